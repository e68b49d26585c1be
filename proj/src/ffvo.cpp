#include "qvertex/ffvo.hpp"

#include <algorithm>
#include <sstream>

namespace qvertex {

namespace {

Scalar fold_phase(const FieldCtxPtr& ctx, const Scalar& pref, int phase) {
    if (phase == 0) return pref;
    return pref * zeta_pow(ctx, phase);
}

} // namespace

std::string FFVO::str() const {
    std::ostringstream os;
    if (is_zero()) return "0 (zero operator)";
    os << "prefactor " << prefactor.str();
    if (phase) os << " * zeta^" << phase;
    os << "\n";
    for (int j = 0; j < slots; ++j) {
        os << "  slot " << j + 1 << ": e^{" << shift[static_cast<size_t>(j)].str()
           << " a}  q^{" << qgrade[static_cast<size_t>(j)].str() << " d}  z-slope "
           << zslope[static_cast<size_t>(j)].str() << "\n";
        for (int k = 1; k <= kmax; ++k) {
            const Scalar& cr = create[static_cast<size_t>(j)][static_cast<size_t>(k - 1)];
            const Scalar& an = annih[static_cast<size_t>(j)][static_cast<size_t>(k - 1)];
            if (cr.is_zero() && an.is_zero()) continue;
            os << "    k=" << k << ": a_{-k} " << cr.str() << " | a_k " << an.str() << "\n";
        }
    }
    os << "  z^const " << zconst.str();
    return os.str();
}

FFVO ffvo_identity(const FieldCtxPtr& ctx, int slots, int kmax) {
    FFVO f;
    f.slots = slots;
    f.kmax = kmax;
    f.prefactor = Scalar::one(ctx);
    f.create.assign(static_cast<size_t>(slots),
                    std::vector<Scalar>(static_cast<size_t>(kmax), Scalar::zero(ctx)));
    f.annih = f.create;
    f.shift.assign(static_cast<size_t>(slots), Rational(0));
    f.qgrade = f.shift;
    f.zslope = f.shift;
    return f;
}

FFVO ffvo_zero(const FieldCtxPtr& ctx, int slots, int kmax) {
    FFVO f = ffvo_identity(ctx, slots, kmax);
    f.prefactor = Scalar::zero(ctx);
    return f;
}

FFVO ffvo_inverse(const FFVO& a) {
    FFVO f = a;
    f.prefactor = a.prefactor.inverse();
    f.phase = -a.phase;
    for (auto& row : f.create)
        for (auto& c : row) c = -c;
    for (auto& row : f.annih)
        for (auto& c : row) c = -c;
    for (auto& r : f.shift) r = -r;
    for (auto& r : f.qgrade) r = -r;
    for (auto& r : f.zslope) r = -r;
    f.zconst = -a.zconst;
    return f;
}

FFVO rescale_argument(const FFVO& a, const Rational& c) {
    const FieldCtxPtr& ctx = a.prefactor.ctx();
    FFVO f = a;
    for (int j = 0; j < a.slots; ++j)
        for (int k = 1; k <= a.kmax; ++k) {
            Scalar tw = qpow(ctx, c * Rational(k));
            f.create[static_cast<size_t>(j)][static_cast<size_t>(k - 1)] =
                a.create[static_cast<size_t>(j)][static_cast<size_t>(k - 1)] * tw;
            f.annih[static_cast<size_t>(j)][static_cast<size_t>(k - 1)] =
                a.annih[static_cast<size_t>(j)][static_cast<size_t>(k - 1)] * tw.inverse();
        }
    for (int j = 0; j < a.slots; ++j)
        f.qgrade[static_cast<size_t>(j)] += c * a.zslope[static_cast<size_t>(j)];
    f.prefactor = a.prefactor * qpow(ctx, c * a.zconst);
    return f;
}

FFVO ffvo_scaled(const FFVO& a, const Scalar& s) {
    FFVO f = a;
    f.prefactor = a.prefactor * s;
    return f;
}

// ---- ScalarSeries ----

ScalarSeries ScalarSeries::operator*(const ScalarSeries& o) const {
    ScalarSeries r;
    r.coeff = coeff * o.coeff;
    r.phase = phase + o.phase;
    r.z_exp = z_exp + o.z_exp;
    r.x_exp = x_exp + o.x_exp;
    size_t n = std::min(gpos.size(), o.gpos.size());
    r.gpos.resize(n);
    r.gneg.resize(n);
    for (size_t i = 0; i < n; ++i) {
        r.gpos[i] = gpos[i] + o.gpos[i];
        r.gneg[i] = gneg[i] + o.gneg[i];
    }
    return r;
}

std::string ScalarSeries::str() const { return recognize_closed_form(*this).str(); }

ScalarSeries series_one(const FieldCtxPtr& ctx, int kmax) {
    ScalarSeries s;
    s.coeff = Scalar::one(ctx);
    s.gpos.assign(static_cast<size_t>(kmax), Scalar::zero(ctx));
    s.gneg = s.gpos;
    return s;
}

ScalarSeries series_closed_factor(const FieldCtxPtr& ctx, int kmax, const Rational& e,
                                  int mult, int dir) {
    ScalarSeries s = series_one(ctx, kmax);
    for (int k = 1; k <= kmax; ++k) {
        // log(1 - q^e x^dir)^mult has coefficient -mult q^{ek}/k at x^{dir k}
        Scalar g = qpow(ctx, e * Rational(k)) *
                   Scalar::from_mpq(ctx, mpq_class(-mult, k));
        if (dir > 0) s.gpos[static_cast<size_t>(k - 1)] = g;
        else s.gneg[static_cast<size_t>(k - 1)] = g;
    }
    return s;
}

ScalarSeries series_monomial(const FieldCtxPtr& ctx, int kmax, const Scalar& coeff,
                             const Rational& z_exp, const Rational& x_exp, int phase) {
    ScalarSeries s = series_one(ctx, kmax);
    s.coeff = coeff;
    s.z_exp = z_exp;
    s.x_exp = x_exp;
    s.phase = phase;
    return s;
}

bool RecognizedSeries::fully_recognized() const {
    for (const auto& c : residual_pos)
        if (!c.is_zero()) return false;
    for (const auto& c : residual_neg)
        if (!c.is_zero()) return false;
    return true;
}

std::string RecognizedSeries::str() const {
    std::ostringstream os;
    os << "(" << coeff.str() << ")";
    if (phase) os << " * zeta^" << phase;
    if (!z_exp.is_zero()) os << " * z^(" << z_exp.str() << ")";
    if (!x_exp.is_zero()) os << " * x^(" << x_exp.str() << ")";
    for (const auto& [e, m] : closed) {
        os << " * (1 - ";
        if (!e.is_zero()) os << "q^(" << e.str() << ") ";
        os << "x)";
        if (m != 1) os << "^" << m;
    }
    if (!fully_recognized()) os << " * [unrecognized remainder]";
    return os.str();
}

namespace {

// gamma_k = sum_i n_i q^{e_i k} / k with integer n_i, detected from k=1 and
// verified through the window. Returns false if not of that shape.
bool recognize_direction(const FieldCtxPtr& ctx, const std::vector<Scalar>& gamma,
                         std::vector<std::pair<Rational, long long>>& pattern) {
    pattern.clear();
    int K = static_cast<int>(gamma.size());
    if (K == 0) return true;
    bool allzero = true;
    for (const auto& g : gamma)
        if (!g.is_zero()) allzero = false;
    if (allzero) return true;
    if (ctx->backend == Backend::Numeric) return false;

    Scalar d1 = gamma[0]; // k * gamma_k at k = 1
    if (d1.is_zero()) return false;
    if (!(d1.den().is_monomial() && d1.den().max_exp() == 0)) return false;
    int D = ctx->params.root_denominator;
    for (const auto& [e, c] : d1.num().terms) {
        // coefficient must be a rational integer
        for (size_t i = 1; i < c.size(); ++i)
            if (c[i] != 0) return false;
        if (c[0].get_den() != 1) return false;
        if (!c[0].get_num().fits_slong_p()) return false;
        pattern.emplace_back(Rational(e, D), c[0].get_num().get_si());
    }
    for (int k = 2; k <= K; ++k) {
        Scalar expect = Scalar::zero(ctx);
        for (const auto& [e, n] : pattern)
            expect += Scalar::from_int(ctx, n) * qpow(ctx, e * Rational(k));
        Scalar actual = gamma[static_cast<size_t>(k - 1)] * Scalar::from_int(ctx, k);
        if (!(expect == actual)) {
            pattern.clear();
            return false;
        }
    }
    return true;
}

} // namespace

RecognizedSeries recognize_closed_form(const ScalarSeries& s) {
    RecognizedSeries r;
    r.coeff = s.coeff;
    r.phase = s.phase;
    r.z_exp = s.z_exp;
    r.x_exp = s.x_exp;
    const FieldCtxPtr& ctx = s.coeff.ctx();
    if (!ctx || s.coeff.is_zero()) {
        r.residual_pos = s.gpos;
        r.residual_neg = s.gneg;
        return r;
    }

    std::vector<std::pair<Rational, long long>> pat;
    if (recognize_direction(ctx, s.gpos, pat)) {
        for (const auto& [e, n] : pat) r.closed[e] -= n; // gamma = -mult log(1-q^e x)
        r.residual_pos.assign(s.gpos.size(), Scalar::zero(ctx));
    } else {
        r.residual_pos = s.gpos;
    }
    if (recognize_direction(ctx, s.gneg, pat)) {
        // (1 - q^e x^{-1})^m = (-q^e)^m x^{-m} (1 - q^{-e} x)^m
        for (const auto& [e, n] : pat) {
            long long m = -n;
            r.closed[-e] += static_cast<int>(m);
            r.x_exp -= Rational(m);
            Scalar f = (-qpow(ctx, e)).pow(m);
            r.coeff = r.coeff * f;
        }
        r.residual_neg.assign(s.gneg.size(), Scalar::zero(ctx));
    } else {
        r.residual_neg = s.gneg;
    }
    for (auto it = r.closed.begin(); it != r.closed.end();) {
        if (it->second == 0) it = r.closed.erase(it);
        else ++it;
    }
    return r;
}

SeriesEq series_equal(const ScalarSeries& a, const ScalarSeries& b) {
    SeriesEq eq;
    RecognizedSeries ra = recognize_closed_form(a), rb = recognize_closed_form(b);
    auto fail = [&](const std::string& what) {
        eq.equal = false;
        eq.mismatch = what;
        return eq;
    };
    const FieldCtxPtr& ctx = a.coeff.has_ctx() ? a.coeff.ctx() : b.coeff.ctx();
    if (!(fold_phase(ctx, ra.coeff, ra.phase) == fold_phase(ctx, rb.coeff, rb.phase)))
        return fail("monomial coefficient: " + ra.coeff.str() + " vs " + rb.coeff.str());
    if (ra.z_exp != rb.z_exp) return fail("z exponent");
    if (ra.x_exp != rb.x_exp) return fail("x exponent");
    if (ra.closed != rb.closed) return fail("closed factors: " + ra.str() + " vs " + rb.str());
    for (size_t i = 0; i < std::min(ra.residual_pos.size(), rb.residual_pos.size()); ++i)
        if (!(ra.residual_pos[i] == rb.residual_pos[i]))
            return fail("residual series at x^" + std::to_string(i + 1));
    for (size_t i = 0; i < std::min(ra.residual_neg.size(), rb.residual_neg.size()); ++i)
        if (!(ra.residual_neg[i] == rb.residual_neg[i]))
            return fail("residual series at x^-" + std::to_string(i + 1));
    eq.equal = true;
    eq.truncated = !ra.fully_recognized() || !rb.fully_recognized();
    return eq;
}

namespace {

// exp(sum_k g_k x^k) as a power series to the given order (g indexed from 1)
std::vector<Scalar> exp_series(const FieldCtxPtr& ctx, const std::vector<Scalar>& g,
                               int order) {
    QSeries a = qseries_zero(ctx, order);
    for (int k = 1; k <= order && k <= static_cast<int>(g.size()); ++k)
        a.coeff[static_cast<size_t>(k)] = g[static_cast<size_t>(k - 1)];
    QSeries e = qseries_exp(a);
    return e.coeff;
}

} // namespace

QSeries series_expand_pos(const ScalarSeries& s, int order) {
    const FieldCtxPtr& ctx = s.coeff.ctx();
    for (const auto& g : s.gneg)
        if (!g.is_zero())
            throw Error(ErrorCode::Internal, "series_expand_pos: negative-direction content");
    QSeries r;
    r.var = "x";
    r.coeff = exp_series(ctx, s.gpos, order);
    Scalar c = fold_phase(ctx, s.coeff, s.phase);
    for (auto& v : r.coeff) v = v * c;
    return r;
}

// ---- products ----

TwoVarProduct normal_product(const FFVO& a, const FFVO& b, const FieldCtxPtr& ctx) {
    if (a.slots != b.slots) throw Error(ErrorCode::Internal, "normal_product: slot mismatch");
    TwoVarProduct p;
    p.left = a;
    p.right = b;
    int K = std::min(a.kmax, b.kmax);
    ScalarSeries s = series_one(ctx, K);
    for (int k = 1; k <= K; ++k) {
        Scalar g = Scalar::zero(ctx);
        for (int j = 0; j < a.slots; ++j) {
            const Scalar& ann = a.annih[static_cast<size_t>(j)][static_cast<size_t>(k - 1)];
            const Scalar& cre = b.create[static_cast<size_t>(j)][static_cast<size_t>(k - 1)];
            if (ann.is_zero() || cre.is_zero()) continue;
            g += ann * cre * heis_bracket(ctx, k);
        }
        s.gpos[static_cast<size_t>(k - 1)] = g;
    }
    Rational zcross(0), qcross(0);
    for (int j = 0; j < a.slots; ++j) {
        zcross += Rational(2) * a.zslope[static_cast<size_t>(j)] * b.shift[static_cast<size_t>(j)];
        qcross += Rational(2) * a.qgrade[static_cast<size_t>(j)] * b.shift[static_cast<size_t>(j)];
    }
    s.z_exp = zcross;
    s.coeff = qpow(ctx, qcross);
    p.contraction = s;
    return p;
}

FFVO normal_compose(const FFVO& a, const FFVO& b, const Rational& c, const FieldCtxPtr& ctx) {
    if (a.slots != b.slots) throw Error(ErrorCode::Internal, "normal_compose: slot mismatch");
    if (a.is_zero() || b.is_zero()) return ffvo_zero(ctx, a.slots, a.kmax);
    FFVO bb = rescale_argument(b, c);
    FFVO f = a;
    f.kmax = std::min(a.kmax, b.kmax);
    f.prefactor = a.prefactor * bb.prefactor;
    f.phase = a.phase + b.phase;
    for (int j = 0; j < a.slots; ++j) {
        for (int k = 1; k <= f.kmax; ++k) {
            f.create[static_cast<size_t>(j)][static_cast<size_t>(k - 1)] =
                a.create[static_cast<size_t>(j)][static_cast<size_t>(k - 1)] +
                bb.create[static_cast<size_t>(j)][static_cast<size_t>(k - 1)];
            f.annih[static_cast<size_t>(j)][static_cast<size_t>(k - 1)] =
                a.annih[static_cast<size_t>(j)][static_cast<size_t>(k - 1)] +
                bb.annih[static_cast<size_t>(j)][static_cast<size_t>(k - 1)];
        }
        f.shift[static_cast<size_t>(j)] += bb.shift[static_cast<size_t>(j)];
        f.qgrade[static_cast<size_t>(j)] += bb.qgrade[static_cast<size_t>(j)];
        f.zslope[static_cast<size_t>(j)] += bb.zslope[static_cast<size_t>(j)];
    }
    f.zconst += bb.zconst;
    return f;
}

FFVO specialize(const TwoVarProduct& p, const Rational& c, const FieldCtxPtr& ctx,
                bool* truncated) {
    if (p.left.is_zero() || p.right.is_zero())
        return ffvo_zero(ctx, p.left.slots, p.left.kmax);
    RecognizedSeries r = recognize_closed_form(p.contraction);
    Scalar value = fold_phase(ctx, r.coeff, r.phase) * qpow(ctx, c * r.x_exp);
    for (const auto& [e, mult] : r.closed) {
        if ((e + c).is_zero()) {
            if (mult < 0)
                throw Error(ErrorCode::PoleAtSpecialization,
                            "pole factor (1 - q^(" + e.str() + ") x) at x = q^(" + c.str() + ")");
            return ffvo_zero(ctx, p.left.slots, p.left.kmax);
        }
        Scalar f = Scalar::one(ctx) - qpow(ctx, e + c);
        value = value * f.pow(mult);
    }
    if (!r.fully_recognized()) {
        if (truncated) *truncated = true;
        int K = p.contraction.kmax();
        std::vector<Scalar> ep = exp_series(ctx, r.residual_pos, K);
        std::vector<Scalar> en = exp_series(ctx, r.residual_neg, K);
        Scalar sp = Scalar::zero(ctx), sn = Scalar::zero(ctx);
        for (int d = 0; d <= K; ++d) {
            sp += ep[static_cast<size_t>(d)] * qpow(ctx, c * Rational(d));
            sn += en[static_cast<size_t>(d)] * qpow(ctx, -c * Rational(d));
        }
        value = value * sp * sn;
    }
    FFVO f = normal_compose(p.left, p.right, c, ctx);
    f.prefactor = f.prefactor * value;
    f.zconst += r.z_exp;
    return f;
}

// ---- exact mode application ----

namespace {

struct AnnihOption {
    int side; // 0 = left/z, 1 = right/w
    int slot;
    int k;
    Scalar tail;
};

struct CreateOption {
    int slot;
    int k;
    Scalar tail;
};

// recursive enumeration of creation multisets of exact total weight
void enumerate_creations(const FieldCtxPtr& ctx, const std::vector<CreateOption>& opts,
                         size_t idx, long long weight, const Scalar& acc,
                         std::vector<std::pair<std::vector<int>, Scalar>>& partial,
                         std::vector<int>& counts) {
    if (weight == 0) {
        partial.emplace_back(counts, acc);
        return;
    }
    if (idx == opts.size()) return;
    const auto& o = opts[idx];
    long long maxc = weight / o.k;
    Scalar powacc = Scalar::one(ctx);
    mpq_class fact(1);
    for (long long cnt = 0; cnt <= maxc; ++cnt) {
        if (cnt > 0) {
            powacc = powacc * o.tail;
            fact *= static_cast<long>(cnt);
        }
        counts[idx] = static_cast<int>(cnt);
        Scalar contrib = acc * powacc * Scalar::from_mpq(ctx, mpq_class(1) / fact);
        enumerate_creations(ctx, opts, idx + 1, weight - cnt * o.k, contrib, partial, counts);
    }
    counts[idx] = 0;
}

struct AnnihResult {
    long long wz = 0, ww = 0;
    std::map<std::pair<int, int>, int> remaining;
    Scalar coeff;
};

// annihilation assignment recursion: options on the same (slot, k) share
// the falling factorial of the state's partition multiplicity
void enumerate_annih(const FieldCtxPtr& ctx, const std::vector<AnnihOption>& opts, size_t idx,
                     std::map<std::pair<int, int>, int>& remaining,
                     long long wz, long long ww, const Scalar& acc,
                     std::vector<AnnihResult>& results) {
    if (idx == opts.size()) {
        results.push_back({wz, ww, remaining, acc});
        return;
    }
    const auto& o = opts[idx];
    auto key = std::make_pair(o.slot, o.k);
    int avail = remaining[key];
    Scalar powacc = Scalar::one(ctx);
    mpq_class fact(1);
    Scalar fall = Scalar::one(ctx);
    Scalar br = heis_bracket(ctx, o.k);
    for (int cnt = 0; cnt <= avail; ++cnt) {
        if (cnt > 0) {
            powacc = powacc * o.tail * br;
            fact *= cnt;
            fall = fall * Scalar::from_int(ctx, avail - cnt + 1);
        }
        remaining[key] = avail - cnt;
        Scalar contrib = acc * powacc * fall * Scalar::from_mpq(ctx, mpq_class(1) / fact);
        long long dw = static_cast<long long>(cnt) * o.k;
        enumerate_annih(ctx, opts, idx + 1, remaining, wz + (o.side == 0 ? dw : 0),
                        ww + (o.side == 1 ? dw : 0), contrib, results);
    }
    remaining[key] = avail;
}

void joint_apply_state(const FieldCtxPtr& ctx, const FFVO& A, const FFVO* B,
                       const Rational& rz, const Rational& sw, const BasisState& b,
                       const Scalar& cb, FockVector& out) {
    int slots = A.slots;
    // power laws and q-grades act on the original charges
    Rational P0A = A.zconst, P0B = B ? B->zconst : Rational(0);
    Rational qexp(0);
    for (int j = 0; j < slots; ++j) {
        Rational pr = b.pairing(j);
        P0A += A.zslope[static_cast<size_t>(j)] * pr;
        qexp += A.qgrade[static_cast<size_t>(j)] * pr;
        if (B) {
            P0B += B->zslope[static_cast<size_t>(j)] * pr;
            qexp += B->qgrade[static_cast<size_t>(j)] * pr;
        }
    }
    Rational hz_r = -rz - P0A, hw_r = -sw - P0B;
    if (!hz_r.is_integer() || !hw_r.is_integer()) return;
    long long hz = hz_r.num(), hw = hw_r.num();

    Scalar base = cb * fold_phase(ctx, A.prefactor, A.phase) * qpow(ctx, qexp);
    if (B) base = base * fold_phase(ctx, B->prefactor, B->phase);
    if (base.is_zero()) return;

    // collect annihilation options present in the state
    std::vector<AnnihOption> aopts;
    std::map<std::pair<int, int>, int> mult;
    for (int j = 0; j < slots; ++j)
        for (int k : b.parts[static_cast<size_t>(j)]) mult[{j, k}]++;
    for (const auto& [key, m] : mult) {
        auto [j, k] = key;
        if (k <= A.kmax) {
            const Scalar& t = A.annih[static_cast<size_t>(j)][static_cast<size_t>(k - 1)];
            if (!t.is_zero()) aopts.push_back({0, j, k, t});
        }
        if (B && k <= B->kmax) {
            const Scalar& t = B->annih[static_cast<size_t>(j)][static_cast<size_t>(k - 1)];
            if (!t.is_zero()) aopts.push_back({1, j, k, t});
        }
    }
    std::vector<CreateOption> coptsA, coptsB;
    for (int j = 0; j < slots; ++j)
        for (int k = 1; k <= A.kmax; ++k) {
            const Scalar& t = A.create[static_cast<size_t>(j)][static_cast<size_t>(k - 1)];
            if (!t.is_zero()) coptsA.push_back({j, k, t});
        }
    if (B)
        for (int j = 0; j < slots; ++j)
            for (int k = 1; k <= B->kmax; ++k) {
                const Scalar& t = B->create[static_cast<size_t>(j)][static_cast<size_t>(k - 1)];
                if (!t.is_zero()) coptsB.push_back({j, k, t});
            }

    std::vector<AnnihResult> annih_results;
    enumerate_annih(ctx, aopts, 0, mult, 0, 0, base, annih_results);

    for (const auto& [wz, ww, remaining, acc] : annih_results) {
        long long WcA = hz + wz, WcB = hw + ww;
        if (WcA < 0 || WcB < 0) continue;
        std::vector<std::pair<std::vector<int>, Scalar>> creA, creB;
        std::vector<int> cnts(coptsA.size(), 0);
        enumerate_creations(ctx, coptsA, 0, WcA, Scalar::one(ctx), creA, cnts);
        cnts.assign(coptsB.size(), 0);
        enumerate_creations(ctx, coptsB, 0, WcB, Scalar::one(ctx), creB, cnts);
        if (creA.empty() || creB.empty()) continue;

        // base partition after annihilation
        BasisState nb = b;
        for (int j = 0; j < slots; ++j) {
            auto& p = nb.parts[static_cast<size_t>(j)];
            p.clear();
        }
        for (const auto& [key, m] : remaining) {
            auto [j, k] = key;
            for (int t = 0; t < m; ++t) nb.parts[static_cast<size_t>(j)].push_back(k);
        }
        for (int j = 0; j < slots; ++j) {
            nb.charge[static_cast<size_t>(j)] += A.shift[static_cast<size_t>(j)];
            if (B) nb.charge[static_cast<size_t>(j)] += B->shift[static_cast<size_t>(j)];
        }
        for (const auto& [countsA, coefA] : creA) {
            for (const auto& [countsB, coefB] : creB) {
                BasisState fin = nb;
                for (size_t i = 0; i < countsA.size(); ++i)
                    for (int t = 0; t < countsA[i]; ++t)
                        fin.parts[static_cast<size_t>(coptsA[i].slot)].push_back(coptsA[i].k);
                for (size_t i = 0; i < countsB.size(); ++i)
                    for (int t = 0; t < countsB[i]; ++t)
                        fin.parts[static_cast<size_t>(coptsB[i].slot)].push_back(coptsB[i].k);
                for (auto& p : fin.parts) std::sort(p.begin(), p.end(), std::greater<int>());
                out.add(fin, acc * coefA * coefB);
            }
        }
    }
}

} // namespace

FockVector apply_mode(const FFVO& a, const Rational& p, const FockVector& v,
                      const FieldCtxPtr& ctx) {
    FockVector out;
    if (a.is_zero()) return out;
    for (const auto& [b, cb] : v.terms)
        joint_apply_state(ctx, a, nullptr, p, Rational(0), b, cb, out);
    return out;
}

ProductApplier::ProductApplier(TwoVarProduct p, const FieldCtxPtr& ctx,
                               const ScalarSeries* extra)
    : prod_(std::move(p)), ctx_(ctx) {
    ScalarSeries S = extra ? (prod_.contraction * (*extra)) : prod_.contraction;
    int K = S.kmax();
    for (const auto& g : S.gneg)
        if (!g.is_zero()) has_neg_ = true;
    epos_ = exp_series(ctx_, S.gpos, K);
    eneg_ = exp_series(ctx_, S.gneg, K);
    c0_ = fold_phase(ctx_, S.coeff, S.phase);
    z_exp_ = S.z_exp;
    x_exp_ = S.x_exp;
}

FockVector ProductApplier::apply(const Rational& r, const Rational& s, const FockVector& v,
                                 bool* truncated) const {
    FockVector out;
    if (prod_.left.is_zero() || prod_.right.is_zero() || c0_.is_zero()) return out;
    long long K = static_cast<long long>(epos_.size()) - 1;

    for (const auto& [b, cb] : v.terms) {
        // grading window for the series index d
        long long heis = b.heis_degree();
        Rational P0A = prod_.left.zconst, P0B = prod_.right.zconst;
        for (int j = 0; j < prod_.left.slots; ++j) {
            P0A += prod_.left.zslope[static_cast<size_t>(j)] * b.pairing(j);
            P0B += prod_.right.zslope[static_cast<size_t>(j)] * b.pairing(j);
        }
        // joint w-exponent -s_d needs creation weight >= 0: bounds d above;
        // the z-side bounds it below
        Rational dmax_r = Rational(heis) - P0B - s - x_exp_;
        Rational dmin_r = r + z_exp_ - x_exp_ - Rational(heis) + P0A;
        long long dmax = dmax_r.num() / dmax_r.den();
        while (Rational(dmax + 1) <= dmax_r) ++dmax;
        while (Rational(dmax) > dmax_r) --dmax;
        long long dmin = dmin_r.num() / dmin_r.den();
        while (Rational(dmin - 1) >= dmin_r) --dmin;
        while (Rational(dmin) < dmin_r) ++dmin;
        long long lo = has_neg_ ? -K : 0;
        long long hi = K;
        // the series has no terms below lo; only a clipped upper end (or a
        // clipped two-sided window) loses content
        if (truncated && (dmax > hi || (has_neg_ && dmin < lo))) *truncated = true;
        lo = std::max(lo, dmin);
        hi = std::min(hi, dmax);
        for (long long d = lo; d <= hi; ++d) {
            // T_d: coefficient of x^d in exp(pos)*exp(neg)
            Scalar Td = Scalar::zero(ctx_);
            for (long long a2 = std::max<long long>(0, d); a2 <= K; ++a2) {
                long long b2 = a2 - d;
                if (b2 < 0 || b2 > K) continue;
                Td += epos_[static_cast<size_t>(a2)] * eneg_[static_cast<size_t>(b2)];
                if (!has_neg_) break; // eneg is 1 at index 0 only
            }
            if (Td.is_zero()) continue;
            Rational rd = r + z_exp_ - x_exp_ - Rational(d);
            Rational sd = s + x_exp_ + Rational(d);
            FockVector piece;
            joint_apply_state(ctx_, prod_.left, &prod_.right, rd, sd, b, cb * c0_ * Td, piece);
            for (const auto& [nb, nc] : piece.terms) out.add(nb, nc);
        }
    }
    return out;
}

FockVector product_mode_apply(const TwoVarProduct& p, const Rational& r, const Rational& s,
                              const FockVector& v, const FieldCtxPtr& ctx,
                              const ScalarSeries* extra, bool* truncated) {
    ProductApplier ap(p, ctx, extra);
    return ap.apply(r, s, v, truncated);
}

std::vector<Rational> mode_range(const FFVO& a, const BasisState& b,
                                 const Rational& out_degree_cap) {
    std::vector<Rational> modes;
    Rational P0 = a.zconst;
    for (int j = 0; j < a.slots; ++j) P0 += a.zslope[static_cast<size_t>(j)] * b.pairing(j);
    Rational lat_after(0);
    for (int j = 0; j < a.slots; ++j) {
        Rational n = b.charge[static_cast<size_t>(j)] + a.shift[static_cast<size_t>(j)];
        lat_after += n * n + Rational(b.sector[static_cast<size_t>(j)]) * n;
    }
    long long heis = b.heis_degree();
    // output degree = heis + h + lat_after <= cap, with h >= -heis
    Rational hmax_r = out_degree_cap - lat_after - Rational(heis);
    long long hmax = hmax_r.num() / hmax_r.den();
    while (Rational(hmax) > hmax_r) --hmax;
    while (Rational(hmax + 1) <= hmax_r) ++hmax;
    for (long long h = -heis; h <= hmax; ++h) modes.push_back(-P0 - Rational(h));
    return modes;
}

FfvoEq ffvo_equal(const FFVO& a, const FFVO& b) {
    FfvoEq eq;
    auto fail = [&](const std::string& what) {
        eq.equal = false;
        eq.mismatch = what;
        return eq;
    };
    if (a.slots != b.slots) return fail("slot count");
    if (a.is_zero() && b.is_zero()) {
        eq.equal = true;
        return eq;
    }
    const FieldCtxPtr& ctx = a.prefactor.ctx();
    if (!(fold_phase(ctx, a.prefactor, a.phase) == fold_phase(ctx, b.prefactor, b.phase)))
        return fail("prefactor: " + a.prefactor.str() + " vs " + b.prefactor.str());
    if (a.shift != b.shift) return fail("lattice shift");
    if (a.qgrade != b.qgrade) return fail("q-grade");
    if (a.zconst != b.zconst) return fail("z-power constant");
    if (a.zslope != b.zslope) return fail("z-power slope");
    int K = std::min(a.kmax, b.kmax);
    for (int j = 0; j < a.slots; ++j)
        for (int k = 1; k <= K; ++k) {
            if (!(a.create[static_cast<size_t>(j)][static_cast<size_t>(k - 1)] ==
                  b.create[static_cast<size_t>(j)][static_cast<size_t>(k - 1)]))
                return fail("creation tail slot " + std::to_string(j + 1) + " k=" +
                            std::to_string(k));
            if (!(a.annih[static_cast<size_t>(j)][static_cast<size_t>(k - 1)] ==
                  b.annih[static_cast<size_t>(j)][static_cast<size_t>(k - 1)]))
                return fail("annihilation tail slot " + std::to_string(j + 1) + " k=" +
                            std::to_string(k));
        }
    eq.equal = true;
    return eq;
}

} // namespace qvertex
