#include "qvertex/currents.hpp"

#include <functional>
#include <mutex>
#include <sstream>

#include "qvertex/parallel.hpp"

namespace qvertex {

const char* current_name(CurrentLabel l) {
    switch (l) {
        case CurrentLabel::XPlus: return "x+";
        case CurrentLabel::XMinus: return "x-";
        case CurrentLabel::Phi: return "phi";
        case CurrentLabel::Psi: return "psi";
    }
    return "?";
}

FFVO frenkel_jing(const FieldCtxPtr& ctx, CurrentLabel label, int kmax) {
    FFVO f = ffvo_identity(ctx, 1, kmax);
    Scalar qm = qpow(ctx, Rational(1)) - qpow(ctx, Rational(-1)); // q - q^{-1}
    switch (label) {
        case CurrentLabel::XPlus:
        case CurrentLabel::XMinus: {
            int sg = label == CurrentLabel::XPlus ? +1 : -1;
            for (int k = 1; k <= kmax; ++k) {
                Scalar base = qpow(ctx, Rational(-sg * k, 2)) / qint(ctx, k);
                f.create[0][static_cast<size_t>(k - 1)] = sg > 0 ? base : -base;
                f.annih[0][static_cast<size_t>(k - 1)] = sg > 0 ? -base : base;
            }
            f.shift[0] = Rational(sg);
            f.zslope[0] = Rational(sg);
            f.zconst = Rational(1);
            break;
        }
        case CurrentLabel::Phi:
            for (int k = 1; k <= kmax; ++k) f.create[0][static_cast<size_t>(k - 1)] = -qm;
            f.qgrade[0] = Rational(-1);
            break;
        case CurrentLabel::Psi:
            for (int k = 1; k <= kmax; ++k) f.annih[0][static_cast<size_t>(k - 1)] = qm;
            f.qgrade[0] = Rational(1);
            break;
    }
    return f;
}

namespace {

// merge a single-slot operator, at argument z q^{arg}, onto slot j of a
// multi-slot operator
void place_slot(FFVO& host, int j, const FFVO& single, const Rational& arg,
                const FieldCtxPtr& ctx) {
    FFVO s = rescale_argument(single, arg);
    for (int k = 1; k <= host.kmax; ++k) {
        host.create[static_cast<size_t>(j)][static_cast<size_t>(k - 1)] +=
            s.create[0][static_cast<size_t>(k - 1)];
        host.annih[static_cast<size_t>(j)][static_cast<size_t>(k - 1)] +=
            s.annih[0][static_cast<size_t>(k - 1)];
    }
    host.shift[static_cast<size_t>(j)] += s.shift[0];
    host.qgrade[static_cast<size_t>(j)] += s.qgrade[0];
    host.zslope[static_cast<size_t>(j)] += s.zslope[0];
    host.zconst += s.zconst;
    host.prefactor = host.prefactor * s.prefactor;
    host.phase += s.phase;
}

} // namespace

FFVO coproduct_term(const FieldCtxPtr& ctx, CurrentLabel sign, int m, int slot, int kmax) {
    if (slot < 1 || slot > m + 1)
        throw Error(ErrorCode::ConfigError, "coproduct term slot out of range");
    FFVO f = ffvo_identity(ctx, m + 1, kmax);
    if (sign == CurrentLabel::XPlus) {
        FFVO phi = frenkel_jing(ctx, CurrentLabel::Phi, kmax);
        FFVO xp = frenkel_jing(ctx, CurrentLabel::XPlus, kmax);
        for (int j = 1; j < slot; ++j) place_slot(f, j - 1, phi, Rational(2 * j - 1, 2), ctx);
        place_slot(f, slot - 1, xp, Rational(slot - 1), ctx);
    } else if (sign == CurrentLabel::XMinus) {
        FFVO psi = frenkel_jing(ctx, CurrentLabel::Psi, kmax);
        FFVO xm = frenkel_jing(ctx, CurrentLabel::XMinus, kmax);
        place_slot(f, slot - 1, xm, Rational(m + 1 - slot), ctx);
        for (int j = slot + 1; j <= m + 1; ++j)
            place_slot(f, j - 1, psi, Rational(2 * (m + 1 - j) + 1, 2), ctx);
    } else {
        throw Error(ErrorCode::ConfigError, "coproduct_term expects a raising/lowering current");
    }
    return f;
}

FFVO coproduct_cartan(const FieldCtxPtr& ctx, CurrentLabel label, int m, int kmax) {
    if (label != CurrentLabel::Phi && label != CurrentLabel::Psi)
        throw Error(ErrorCode::ConfigError, "coproduct_cartan expects phi or psi");
    FFVO f = ffvo_identity(ctx, m + 1, kmax);
    FFVO single = frenkel_jing(ctx, label, kmax);
    for (int j = 1; j <= m + 1; ++j) {
        Rational arg = label == CurrentLabel::Phi ? Rational(2 * (j - 1) - m, 2)
                                                  : Rational(m - 2 * (j - 1), 2);
        place_slot(f, j - 1, single, arg, ctx);
    }
    return f;
}

FFVO antipode_current(const FieldCtxPtr& ctx, CurrentLabel label, int kmax) {
    // single slot, central element acting as 1
    switch (label) {
        case CurrentLabel::Phi:
            return ffvo_inverse(frenkel_jing(ctx, CurrentLabel::Phi, kmax));
        case CurrentLabel::Psi:
            return ffvo_inverse(frenkel_jing(ctx, CurrentLabel::Psi, kmax));
        case CurrentLabel::XPlus: {
            FFVO a = rescale_argument(
                ffvo_inverse(frenkel_jing(ctx, CurrentLabel::Phi, kmax)), Rational(-1, 2));
            FFVO b = rescale_argument(frenkel_jing(ctx, CurrentLabel::XPlus, kmax), Rational(-1));
            return ffvo_scaled(specialize(normal_product(a, b, ctx), Rational(0), ctx),
                               -Scalar::one(ctx));
        }
        case CurrentLabel::XMinus: {
            FFVO a = rescale_argument(frenkel_jing(ctx, CurrentLabel::XMinus, kmax), Rational(-1));
            FFVO b = rescale_argument(
                ffvo_inverse(frenkel_jing(ctx, CurrentLabel::Psi, kmax)), Rational(-1, 2));
            return ffvo_scaled(specialize(normal_product(a, b, ctx), Rational(0), ctx),
                               -Scalar::one(ctx));
        }
    }
    throw Error(ErrorCode::UnknownOperator, "antipode_current");
}

Scalar counit_value(const FieldCtxPtr& ctx, CurrentLabel label) {
    if (label == CurrentLabel::Phi || label == CurrentLabel::Psi) return Scalar::one(ctx);
    return Scalar::zero(ctx);
}

FockVector CurrentSum::apply(const Rational& p, const FockVector& v,
                             const FieldCtxPtr& ctx) const {
    FockVector out;
    for (const auto& t : terms) {
        FockVector piece = apply_mode(t, p, v, ctx);
        for (const auto& [b, c] : piece.terms) out.add(b, c);
    }
    return out;
}

CurrentSum coproduct_current(const FieldCtxPtr& ctx, CurrentLabel label, int m, int kmax) {
    CurrentSum s;
    if (label == CurrentLabel::Phi || label == CurrentLabel::Psi) {
        s.terms.push_back(coproduct_cartan(ctx, label, m, kmax));
        return s;
    }
    for (int i = 1; i <= m + 1; ++i) s.terms.push_back(coproduct_term(ctx, label, m, i, kmax));
    return s;
}

FockVector CachedCurrent::apply(const Rational& p, const BasisState& b) {
    auto key = std::make_pair(std::make_pair(p.num(), p.den()), b);
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    FockVector v = op_->apply(p, fock_unit(b, Scalar::one(ctx_)), ctx_);
    std::lock_guard<std::mutex> lk(mu_);
    return memo_.emplace(key, std::move(v)).first->second;
}

FockVector CachedCurrent::apply(const Rational& p, const FockVector& v) {
    FockVector out;
    for (const auto& [b, c] : v.terms) {
        FockVector piece = apply(p, b).scaled(c);
        for (const auto& [nb, nc] : piece.terms) out.add(nb, nc);
    }
    return out;
}

// ---- defining relations, cleared form ----

namespace {

using ModeCache = CachedCurrent;

struct RelTerm {
    Scalar coeff;
    long long dz = 0, dw = 0;
    ModeCache* zop = nullptr;
    ModeCache* wop = nullptr;
    bool w_first = true; // true: term is  z-op(z) w-op(w)
};

FockVector eval_terms(const std::vector<RelTerm>& terms, const Rational& r, const Rational& s,
                      const BasisState& b, const FieldCtxPtr& ctx) {
    FockVector out;
    for (const auto& t : terms) {
        Rational mz = r + Rational(t.dz), mw = s + Rational(t.dw);
        FockVector v = t.w_first ? t.zop->apply(mz, t.wop->apply(mw, b))
                                 : t.wop->apply(mw, t.zop->apply(mz, b));
        for (const auto& [bb, cc] : v.terms) out.add(bb, cc * t.coeff);
    }
    return out;
}

bool vec_eq(CheckContext& cc, const FockVector& lhs, const FockVector& rhs,
            const std::string& where) {
    FockVector diff = lhs - rhs;
    ++cc.report().assertions;
    if (diff.is_zero()) {
        // numeric bridge on a representative coefficient
        if (!lhs.terms.empty())
            cc.scalar_eq(lhs.terms.begin()->second,
                         extract_coefficient(rhs, lhs.terms.begin()->first), where);
        return true;
    }
    const auto& [b, c] = *diff.terms.begin();
    cc.report().fail(where + " at " + b.str(), extract_coefficient(lhs, b).str(),
                     extract_coefficient(rhs, b).str());
    return false;
}

} // namespace

RelationReport check_def21(const FieldCtxPtr& ctx, int m, const std::vector<int>& sectors,
                           int N, int W, int kmax, const Conventions& conv,
                           bool cross_numeric) {
    RelationReport rep;
    rep.check_id = "def21";
    rep.params["m"] = std::to_string(m);
    rep.params["N"] = std::to_string(N);
    rep.params["W"] = std::to_string(W);
    rep.params["kmax"] = std::to_string(kmax);
    {
        std::string sec;
        for (int x : sectors) sec += std::to_string(x);
        rep.params["sectors"] = sec;
    }
    CheckContext cc(rep, cross_numeric);

    int c = m + 1; // central element on the tensor power
    CurrentSum xp = coproduct_current(ctx, CurrentLabel::XPlus, m, kmax);
    CurrentSum xm = coproduct_current(ctx, CurrentLabel::XMinus, m, kmax);
    CurrentSum phi = coproduct_current(ctx, CurrentLabel::Phi, m, kmax);
    CurrentSum psi = coproduct_current(ctx, CurrentLabel::Psi, m, kmax);

    ModeCache mxp(&xp, ctx), mxm(&xm, ctx), mphi(&phi, ctx), mpsi(&psi, ctx);

    auto basis = basis_enumerate(m + 1, sectors, Rational(N), Rational(-N - 1), Rational(N + 1));

    auto qp = [&](const Rational& e) { return qpow(ctx, e); };
    Scalar one = Scalar::one(ctx);

    struct Rel {
        std::string name;
        std::vector<RelTerm> lhs, rhs;
    };
    std::vector<Rel> rels;

    // phi(z)phi(w) = phi(w)phi(z); psi likewise
    rels.push_back({"phi_phi", {{one, 0, 0, &mphi, &mphi, true}}, {{one, 0, 0, &mphi, &mphi, false}}});
    rels.push_back({"psi_psi", {{one, 0, 0, &mpsi, &mpsi, true}}, {{one, 0, 0, &mpsi, &mpsi, false}}});

    // phi(z)psi(w) relation cleared by both g denominators
    rels.push_back({"phi_psi",
                    {{qp(Rational(2)), 2, -2, &mphi, &mpsi, true},
                     {-(qp(Rational(-c)) + qp(Rational(4 + c))), 1, -1, &mphi, &mpsi, true},
                     {qp(Rational(2)), 0, 0, &mphi, &mpsi, true}},
                    {{qp(Rational(2)), 2, -2, &mphi, &mpsi, false},
                     {-(qp(Rational(4 - c)) + qp(Rational(c))), 1, -1, &mphi, &mpsi, false},
                     {qp(Rational(2)), 0, 0, &mphi, &mpsi, false}}});

    // phi(z)x±(w): (v q^{∓c/2} - q^2) phi x± = (q^{2∓c/2} v - 1) x± phi and mirror
    rels.push_back({"phi_xplus",
                    {{qp(Rational(-c, 2)), 1, -1, &mphi, &mxp, true}, {-qp(Rational(2)), 0, 0, &mphi, &mxp, true}},
                    {{qp(Rational(4 - c, 2)), 1, -1, &mphi, &mxp, false}, {-one, 0, 0, &mphi, &mxp, false}}});
    rels.push_back({"phi_xminus",
                    {{qp(Rational(4 + c, 2)), 1, -1, &mphi, &mxm, true}, {-one, 0, 0, &mphi, &mxm, true}},
                    {{qp(Rational(c, 2)), 1, -1, &mphi, &mxm, false}, {-qp(Rational(2)), 0, 0, &mphi, &mxm, false}}});

    // psi(z)x±(w) with u = w/z
    rels.push_back({"psi_xplus",
                    {{qp(Rational(4 - c, 2)), -1, 1, &mpsi, &mxp, true}, {-one, 0, 0, &mpsi, &mxp, true}},
                    {{qp(Rational(-c, 2)), -1, 1, &mpsi, &mxp, false}, {-qp(Rational(2)), 0, 0, &mpsi, &mxp, false}}});
    rels.push_back({"psi_xminus",
                    {{qp(Rational(c, 2)), -1, 1, &mpsi, &mxm, true}, {-qp(Rational(2)), 0, 0, &mpsi, &mxm, true}},
                    {{qp(Rational(4 + c, 2)), -1, 1, &mpsi, &mxm, false}, {-one, 0, 0, &mpsi, &mxm, false}}});

    // (z - q^{±2} w) x±(z) x±(w) = (q^{±2} z - w) x±(w) x±(z)
    rels.push_back({"xplus_xplus",
                    {{one, 1, 0, &mxp, &mxp, true}, {-qp(Rational(2)), 0, 1, &mxp, &mxp, true}},
                    {{qp(Rational(2)), 1, 0, &mxp, &mxp, false}, {-one, 0, 1, &mxp, &mxp, false}}});
    rels.push_back({"xminus_xminus",
                    {{one, 1, 0, &mxm, &mxm, true}, {-qp(Rational(-2)), 0, 1, &mxm, &mxm, true}},
                    {{qp(Rational(-2)), 1, 0, &mxm, &mxm, false}, {-one, 0, 1, &mxm, &mxm, false}}});

    CurrentSum psi_sh_sum, phi_sh_sum;
    psi_sh_sum.terms.push_back(
        rescale_argument(coproduct_cartan(ctx, CurrentLabel::Psi, m, kmax), Rational(c, 2)));
    phi_sh_sum.terms.push_back(
        rescale_argument(coproduct_cartan(ctx, CurrentLabel::Phi, m, kmax), Rational(c, 2)));
    ModeCache mpsish(&psi_sh_sum, ctx), mphish(&phi_sh_sum, ctx);
    Scalar denom = (qpow(ctx, Rational(1)) - qpow(ctx, Rational(-1))).inverse();
    int sigma = conv.delta_parse == DeltaParse::RatioTimesQ ? +1 : -1;

    std::vector<RelationReport> local(basis.size());
    parallel_for(basis.size(), [&](size_t i) {
        const BasisState& b = basis[i];
        CheckContext lc(local[i], cross_numeric);
        FockVector v = fock_unit(b, one);
        for (const auto& rel : rels)
            for (long long r = -W; r <= W; ++r)
                for (long long s = -W; s <= W; ++s) {
                    FockVector lhs = eval_terms(rel.lhs, Rational(r), Rational(s), b, ctx);
                    FockVector rhs = eval_terms(rel.rhs, Rational(r), Rational(s), b, ctx);
                    vec_eq(lc, lhs, rhs, rel.name + " (r,s)=(" + std::to_string(r) + "," +
                                             std::to_string(s) + ")");
                }

        // phi(0) psi(0) = psi(0) phi(0) = 1
        vec_eq(lc, mphi.apply(Rational(0), mpsi.apply(Rational(0), b)), v, "phi0_psi0");
        vec_eq(lc, mpsi.apply(Rational(0), mphi.apply(Rational(0), b)), v, "psi0_phi0");

        // [x+(z), x-(w)] = (delta(z/w q^{-c}) psi(w q^{c/2})
        //                   - delta(z/w q^{c}) phi(z q^{c/2})) / (q - q^{-1})
        for (long long r = -W; r <= W; ++r)
            for (long long s = -W; s <= W; ++s) {
                FockVector lhs = mxp.apply(Rational(r), mxm.apply(Rational(s), b)) -
                                 mxm.apply(Rational(s), mxp.apply(Rational(r), b));
                FockVector rhs =
                    mpsish.apply(Rational(r + s), b)
                        .scaled(denom * qpow(ctx, Rational(sigma * c * r))) -
                    mphish.apply(Rational(r + s), b)
                        .scaled(denom * qpow(ctx, Rational(sigma * c * s)));
                vec_eq(lc, lhs, rhs, "xplus_xminus_delta (r,s)=(" + std::to_string(r) + "," +
                                         std::to_string(s) + ")");
            }
    });
    for (const auto& lr : local) {
        rep.assertions += lr.assertions;
        if (!lr.passed) rep.passed = false;
        for (const auto& f : lr.failures)
            if (rep.failures.size() < 32) rep.failures.push_back(f);
    }
    rep.note(std::string("delta parse: ") +
             (sigma > 0 ? "q^{-c} multiplies the ratio z/w" : "q^{-c} divides w"));
    rep.params["central"] = std::to_string(c);
    return rep;
}

std::map<std::vector<Rational>, Scalar> correlation(const FieldCtxPtr& ctx,
                                                    const std::vector<FFVO>& ops,
                                                    const BasisState& in, const BasisState& out,
                                                    int window) {
    std::map<std::vector<Rational>, Scalar> result;
    std::vector<Rational> modes(ops.size());
    std::function<void(size_t, const FockVector&)> rec = [&](size_t idx, const FockVector& v) {
        if (idx == ops.size()) {
            Scalar c = extract_coefficient(v, out);
            if (!c.is_zero()) result[modes] = c;
            return;
        }
        // ops applied right to left
        size_t pos = ops.size() - 1 - idx;
        for (long long p = -window; p <= window; ++p) {
            modes[pos] = Rational(p);
            FockVector nv = apply_mode(ops[pos], Rational(p), v, ctx);
            if (!nv.is_zero() || ops.size() == idx + 1) rec(idx + 1, nv);
        }
    };
    if (ops.empty()) {
        if (in == out) result[{}] = Scalar::one(ctx);
        return result;
    }
    rec(0, fock_unit(in, Scalar::one(ctx)));
    return result;
}

} // namespace qvertex
