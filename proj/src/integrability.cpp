#include "qvertex/integrability.hpp"

#include <sstream>

#include "qvertex/parallel.hpp"

namespace qvertex {

namespace {

std::string rs(const Rational& r) { return r.str(); }

// mode-level agreement of two operators on all basis states of degree <= N
void modewise_agree(CheckContext& cc, const FieldCtxPtr& ctx, const FFVO& a, const FFVO& b,
                    int slots, const std::vector<int>& sectors, int N,
                    const std::string& where) {
    auto basis = basis_enumerate(slots, sectors, Rational(N), Rational(-N - 1), Rational(N + 1));
    for (const auto& st : basis) {
        FockVector v = fock_unit(st, Scalar::one(ctx));
        for (const Rational& p : mode_range(a, st, Rational(N + 2))) {
            FockVector lhs = apply_mode(a, p, v, ctx);
            FockVector rhs = apply_mode(b, p, v, ctx);
            FockVector diff = lhs - rhs;
            ++cc.report().assertions;
            if (!diff.is_zero()) {
                cc.report().fail(where + " mode " + p.str() + " on " + st.str(),
                                 lhs.str(), rhs.str());
                return;
            }
        }
    }
}

} // namespace

RelationReport check_diff_eq_single(const Engine& eng, CurrentLabel sign, int N) {
    RelationReport rep;
    rep.check_id = "diff_eq_single";
    rep.params["sign"] = current_name(sign);
    rep.params["N"] = std::to_string(N);
    CheckContext cc(rep, eng.backend == Backend::Exact);
    const FieldCtxPtr ctx = eng.active();
    int K = eng.kmax;

    bool plus = sign == CurrentLabel::XPlus;
    FFVO x = frenkel_jing(ctx, sign, K);
    FFVO lhs = rescale_argument(x, Rational(2));

    FFVO left = plus ? rescale_argument(
                           ffvo_inverse(frenkel_jing(ctx, CurrentLabel::Phi, K)), Rational(1, 2))
                     : rescale_argument(frenkel_jing(ctx, CurrentLabel::Phi, K), Rational(3, 2));
    FFVO right = plus ? rescale_argument(frenkel_jing(ctx, CurrentLabel::Psi, K), Rational(3, 2))
                      : rescale_argument(
                            ffvo_inverse(frenkel_jing(ctx, CurrentLabel::Psi, K)), Rational(1, 2));
    FFVO rhs = specialize(normal_product(left, x, ctx), Rational(0), ctx);
    rhs = specialize(normal_product(rhs, right, ctx), Rational(0), ctx);

    auto eq = ffvo_equal(lhs, rhs);
    cc.require(eq.equal, "operator data: " + eq.mismatch);
    cc.scalar_eq(lhs.prefactor, rhs.prefactor, "prefactor");
    for (int i = 0; i < 2; ++i) {
        modewise_agree(cc, ctx, lhs, rhs, 1, {i}, N, "sector " + std::to_string(i));
    }
    return rep;
}

namespace {

// fold one ordered tuple of coproduct summands at the given offsets;
// returns the zero operator as soon as a factor kills the product
FFVO fold_tuple(const FieldCtxPtr& ctx, const std::vector<FFVO>& terms,
                const std::vector<int>& tuple, const std::vector<Rational>& offsets) {
    FFVO acc = rescale_argument(terms[static_cast<size_t>(tuple[0])], offsets[0]);
    for (size_t l = 1; l < tuple.size(); ++l) {
        if (acc.is_zero()) return acc;
        acc = specialize(normal_product(acc, terms[static_cast<size_t>(tuple[l])], ctx),
                         offsets[l], ctx);
    }
    return acc;
}

std::vector<Rational> spaced_offsets(CurrentLabel sign, int factors) {
    std::vector<Rational> offs;
    for (int l = 0; l < factors; ++l)
        offs.emplace_back(sign == CurrentLabel::XPlus ? 2 * l : 2 * (factors - 1 - l));
    return offs;
}

} // namespace

FusedCurrent collapse_product(const Engine& eng, CurrentLabel sign, RelationReport* rep) {
    const FieldCtxPtr ctx = eng.exact; // certification is symbolic
    int m = eng.m, K = eng.kmax;
    std::vector<FFVO> terms;
    for (int i = 1; i <= m + 1; ++i)
        terms.push_back(coproduct_term(ctx, sign, m, i, K));
    std::vector<Rational> offsets = spaced_offsets(sign, m + 1);

    FusedCurrent fc;
    fc.sign = sign;
    fc.m = m;
    fc.survivor_args = offsets;
    // the survivor places the currents on slots m+1, m, ..., 1
    for (int l = 0; l <= m; ++l) fc.survivor_slots.push_back(m + 1 - l);

    long long total = 1;
    for (int l = 0; l <= m; ++l) total *= (m + 1);
    std::vector<int> tuple(static_cast<size_t>(m) + 1, 0);
    bool found = false;
    for (long long code = 0; code < total; ++code) {
        long long c = code;
        for (int l = 0; l <= m; ++l) {
            tuple[static_cast<size_t>(l)] = static_cast<int>(c % (m + 1));
            c /= (m + 1);
        }
        bool is_survivor = true;
        for (int l = 0; l <= m; ++l)
            if (tuple[static_cast<size_t>(l)] != fc.survivor_slots[static_cast<size_t>(l)] - 1)
                is_survivor = false;
        FFVO prod = fold_tuple(ctx, terms, tuple, offsets);
        if (is_survivor) {
            if (prod.is_zero())
                throw Error(ErrorCode::Internal, "surviving ordered term vanished");
            fc.collapsed = prod;
            found = true;
        } else if (prod.is_zero()) {
            ++fc.certified_zero_terms;
        } else {
            std::ostringstream os;
            os << "cross term (";
            for (int l = 0; l <= m; ++l) os << tuple[static_cast<size_t>(l)] + 1 << " ";
            os << ") did not vanish";
            throw Error(ErrorCode::NonVanishingCrossTerm, os.str());
        }
    }
    if (!found) throw Error(ErrorCode::Internal, "survivor not visited");
    if (rep) {
        rep->params["cross_terms"] = std::to_string(total - 1);
        rep->params["certified_zero"] = std::to_string(fc.certified_zero_terms);
        rep->assertions += fc.certified_zero_terms + 1;
        if (fc.certified_zero_terms != total - 1) rep->passed = false;
    }
    return fc;
}

RelationReport check_diff_eq_fused(const Engine& eng, CurrentLabel sign) {
    RelationReport rep;
    rep.check_id = "diff_eq_fused";
    rep.params["sign"] = current_name(sign);
    rep.params["m"] = std::to_string(eng.m);
    CheckContext cc(rep, true);
    const FieldCtxPtr ctx = eng.exact;
    int m = eng.m, K = eng.kmax;
    bool plus = sign == CurrentLabel::XPlus;

    FusedCurrent fc = collapse_product(eng, sign, &rep);
    FFVO lhs = rescale_argument(fc.collapsed, Rational(2));

    // slotwise Cartan factors
    FFVO left = ffvo_identity(ctx, m + 1, K);
    FFVO right = ffvo_identity(ctx, m + 1, K);
    FFVO phi1 = frenkel_jing(ctx, CurrentLabel::Phi, K);
    FFVO psi1 = frenkel_jing(ctx, CurrentLabel::Psi, K);
    {
        // x+: phi^{-1}(zq^{j-1/2}) per slot and psi(zq^{2m+5/2-j});
        // x-: phi(zq^{m+1/2+j}) per slot and psi^{-1}(zq^{m+3/2-j})
        FFVO l1 = plus ? ffvo_inverse(phi1) : phi1;
        FFVO r1 = plus ? psi1 : ffvo_inverse(psi1);
        for (int j = 1; j <= m + 1; ++j) {
            Rational larg = plus ? Rational(2 * j - 1, 2) : Rational(2 * (m + j) + 1, 2);
            Rational rarg = plus ? Rational(4 * m + 5 - 2 * j, 2) : Rational(2 * (m - j) + 3, 2);
            FFVO ls = rescale_argument(l1, larg);
            FFVO rs_ = rescale_argument(r1, rarg);
            for (int k = 1; k <= K; ++k) {
                left.create[static_cast<size_t>(j - 1)][static_cast<size_t>(k - 1)] =
                    ls.create[0][static_cast<size_t>(k - 1)];
                left.annih[static_cast<size_t>(j - 1)][static_cast<size_t>(k - 1)] =
                    ls.annih[0][static_cast<size_t>(k - 1)];
                right.create[static_cast<size_t>(j - 1)][static_cast<size_t>(k - 1)] =
                    rs_.create[0][static_cast<size_t>(k - 1)];
                right.annih[static_cast<size_t>(j - 1)][static_cast<size_t>(k - 1)] =
                    rs_.annih[0][static_cast<size_t>(k - 1)];
            }
            left.qgrade[static_cast<size_t>(j - 1)] = ls.qgrade[0];
            right.qgrade[static_cast<size_t>(j - 1)] = rs_.qgrade[0];
        }
    }

    // the compact form reads the same factors from the coproduct of a single
    // shifted Cartan current; agreement is recorded as data
    {
        FFVO compact_left =
            plus ? rescale_argument(ffvo_inverse(coproduct_cartan(ctx, CurrentLabel::Phi, m, K)),
                                    Rational(m + 1, 2))
                 : rescale_argument(coproduct_cartan(ctx, CurrentLabel::Phi, m, K),
                                    Rational(3 * (m + 1), 2));
        FFVO compact_right =
            plus ? rescale_argument(coproduct_cartan(ctx, CurrentLabel::Psi, m, K),
                                    Rational(3 * (m + 1), 2))
                 : rescale_argument(ffvo_inverse(coproduct_cartan(ctx, CurrentLabel::Psi, m, K)),
                                    Rational(m + 1, 2));
        auto eqL = ffvo_equal(compact_left, left);
        auto eqR = ffvo_equal(compact_right, right);
        rep.note(std::string("compact Cartan arguments ") +
                 (plus ? "z q^{(m+1)/2}, z q^{3(m+1)/2}" : "z q^{3(m+1)/2}, z q^{(m+1)/2}") +
                 (eqL.equal && eqR.equal ? " agree with the slotwise form"
                                         : " disagree with the slotwise form"));
    }

    FFVO rhs = specialize(normal_product(left, fc.collapsed, ctx), Rational(0), ctx);
    rhs = specialize(normal_product(rhs, right, ctx), Rational(0), ctx);
    auto eq = ffvo_equal(lhs, rhs);
    cc.require(eq.equal, "fused difference equation: " + eq.mismatch);
    if (eq.equal) cc.scalar_eq(lhs.prefactor, rhs.prefactor, "prefactor");
    return rep;
}

RelationReport check_pole_structure(const Engine& eng, int N, int window) {
    RelationReport rep;
    rep.check_id = "pole_structure";
    rep.params["m"] = std::to_string(eng.m);
    rep.params["N"] = std::to_string(N);
    const FieldCtxPtr ctx = eng.active();
    int m = eng.m, K = eng.kmax;
    std::vector<int> sectors(static_cast<size_t>(m) + 1, 0);
    auto basis = basis_enumerate(m + 1, sectors, Rational(N), Rational(-N - 1), Rational(N + 1));

    // Per matrix coefficient the series in x = w/z times the single pole
    // factor is a Laurent polynomial. The termination bound in the series
    // index d (with w-mode s = smax - d):
    //   x-powers of the cleared function are at most
    //       closed-degree (<=3) + max w-exponent of the joint normal form,
    //   and the w-exponent is at most P0cap + outcap, so with the baseline
    //   smax = heis(in) + P0cap every coefficient with
    //       d > B := smax + P0cap + outcap + 3
    //   vanishes identically. outcap bounds the out-state degree window.
    int outcap = N + window;
    // the contraction series must extend through the whole tail window
    int nmax = 0;
    while ((nmax + 1) * (nmax + 1) <= N) ++nmax; // lattice degree <= N
    int pair_cap = 2 * nmax + 1;
    int kcheck = std::max(K, 2 * (1 + pair_cap) + N + outcap + 10);
    for (CurrentLabel sign : {CurrentLabel::XPlus, CurrentLabel::XMinus}) {
        std::vector<FFVO> terms;
        for (int i = 1; i <= m + 1; ++i) terms.push_back(coproduct_term(ctx, sign, m, i, kcheck));
        // structural half of the statement: the only pole of any term-pair
        // contraction sits at w = z q^{-2} (x+) resp. w = z q^2 (x-)
        Rational pole_exp = sign == CurrentLabel::XPlus ? Rational(2) : Rational(-2);
        std::vector<ProductApplier> prods;
        for (const FFVO& a : terms)
            for (const FFVO& b : terms) {
                TwoVarProduct p = normal_product(a, b, ctx);
                RecognizedSeries rc = recognize_closed_form(p.contraction);
                ++rep.assertions;
                if (!rc.fully_recognized())
                    rep.fail("contraction not a finite product", rc.str(), "");
                for (const auto& [e, mult] : rc.closed) {
                    ++rep.assertions;
                    if (mult < 0 && e != pole_exp)
                        rep.fail("unexpected pole factor", "(1 - q^(" + e.str() + ") x)^" +
                                                              std::to_string(mult),
                                 "pole only at q^(" + pole_exp.str() + ")");
                }
                prods.emplace_back(std::move(p), ctx);
            }
        // mode half: the cleared coefficient series between states of degree
        // <= N and outputs of degree <= outcap terminate at the grading
        // bound B = smax + P0cap + outcap + 3 (w-side power-law and creation
        // content bound the surviving x-powers)
        Scalar clear = m == 0 ? Scalar::zero(ctx) : qpow(ctx, -pole_exp);
        std::vector<RelationReport> local(basis.size());
        parallel_for(basis.size(), [&](size_t bi) {
            CheckContext lc(local[bi], false);
            const BasisState& in = basis[bi];
            FockVector v = fock_unit(in, Scalar::one(ctx));
            long long pairmax = 0;
            for (int j = 0; j <= m; ++j) {
                Rational p = in.pairing(j);
                long long ap = p.num() < 0 ? -p.num() : p.num();
                pairmax = std::max(pairmax, ap);
            }
            long long P0cap = 1 + pairmax;
            long long smax = in.heis_degree() + P0cap;
            long long B = smax + P0cap + outcap + 3;
            long long degin_floor = in.degree().num() / in.degree().den();
            for (long long T = degin_floor - outcap; T <= degin_floor + 1; ++T) {
                FockVector prev;
                for (long long d = 0; d <= B + 3; ++d) {
                    long long s = smax - d;
                    long long r = T - s;
                    FockVector g;
                    for (const auto& p : prods) {
                        bool trunc = false;
                        FockVector piece = p.apply(Rational(r), Rational(s), v, &trunc);
                        if (trunc) {
                            lc.report().fail("series window exceeded", "", "");
                            return;
                        }
                        for (const auto& [nb, nc] : piece.terms) g.add(nb, nc);
                    }
                    FockVector h = g - prev.scaled(clear);
                    prev = g;
                    ++lc.report().assertions;
                    if (d > B && !h.is_zero()) {
                        lc.report().fail("cleared series tail, T=" + std::to_string(T) +
                                             " d=" + std::to_string(d) + " on " + in.str(),
                                         h.str(), "0");
                        return;
                    }
                }
            }
        });
        for (const auto& lr : local) {
            rep.assertions += lr.assertions;
            if (!lr.passed) rep.passed = false;
            for (const auto& f : lr.failures)
                if (rep.failures.size() < 32) rep.failures.push_back(f);
        }
        rep.note(std::string(current_name(sign)) + ": cleared with (1 - q^{" +
                 (sign == CurrentLabel::XPlus ? "2" : "-2") + "} x)" +
                 (m == 0 ? " not needed at level 1 (series terminate raw)" : ""));
    }
    rep.note("series computed through the normal-form route certified by the "
             "oracle-equivalence suite");
    return rep;
}

RelationReport check_vanishing(const Engine& eng, int N) {
    RelationReport rep;
    rep.check_id = "vanishing_locus";
    rep.params["m"] = std::to_string(eng.m);
    const FieldCtxPtr ctx = eng.exact;
    int m = eng.m, K = eng.kmax;
    (void)N;

    for (CurrentLabel sign : {CurrentLabel::XPlus, CurrentLabel::XMinus}) {
        std::vector<FFVO> terms;
        for (int i = 1; i <= m + 1; ++i) terms.push_back(coproduct_term(ctx, sign, m, i, K));
        int factors = m + 2;
        std::vector<Rational> offsets = spaced_offsets(sign, factors);
        long long total = 1;
        for (int l = 0; l < factors; ++l) total *= (m + 1);
        long long dead = 0;
        std::vector<int> tuple(static_cast<size_t>(factors), 0);
        for (long long code = 0; code < total; ++code) {
            long long c = code;
            for (int l = 0; l < factors; ++l) {
                tuple[static_cast<size_t>(l)] = static_cast<int>(c % (m + 1));
                c /= (m + 1);
            }
            FFVO prod = fold_tuple(ctx, terms, tuple, offsets);
            ++rep.assertions;
            if (prod.is_zero()) ++dead;
            else rep.fail(std::string(current_name(sign)) + " tuple " + std::to_string(code),
                          "nonzero operator", "0");
        }
        rep.params[std::string("terms_") + current_name(sign)] = std::to_string(total);
        rep.note(std::string(current_name(sign)) + ": all " + std::to_string(dead) + "/" +
                 std::to_string(total) + " geometric-product terms vanish");
    }
    return rep;
}

RelationReport fused_closed_form(const Engine& eng, CurrentLabel sign, FFVO* out) {
    RelationReport rep;
    rep.check_id = "fused_closed_form";
    rep.params["sign"] = current_name(sign);
    rep.params["m"] = std::to_string(eng.m);
    CheckContext cc(rep, true);
    const FieldCtxPtr ctx = eng.exact;
    int m = eng.m, K = eng.kmax;

    FusedCurrent fc = collapse_product(eng, sign, nullptr);
    if (out) *out = fc.collapsed;

    // tails must be expressible through the fused Heisenberg generators:
    // tail[j][k] = c_k * w_{j,k} with w the coproduct weights
    for (int k = 1; k <= K; ++k) {
        HeisOp dm = coproduct_heis(ctx, m, k);
        Scalar c_cre, c_ann;
        for (int j = 0; j <= m; ++j) {
            const Scalar& w = dm.terms[static_cast<size_t>(j)].second;
            Scalar rc = fc.collapsed.create[static_cast<size_t>(j)][static_cast<size_t>(k - 1)] / w;
            Scalar ra = fc.collapsed.annih[static_cast<size_t>(j)][static_cast<size_t>(k - 1)] / w;
            if (j == 0) {
                c_cre = rc;
                c_ann = ra;
            } else {
                cc.scalar_eq(rc, c_cre, "creation tail ratio slot " + std::to_string(j + 1) +
                                            " k=" + std::to_string(k));
                cc.scalar_eq(ra, c_ann, "annihilation tail ratio slot " + std::to_string(j + 1) +
                                            " k=" + std::to_string(k));
            }
        }
        if (k == 1)
            rep.note("k=1 fused tail coefficients: creation " + c_cre.str() + ", annihilation " +
                     c_ann.str());
    }

    // consistency with the vanishing locus at the fused level
    bool truncated = false;
    FFVO self = specialize(normal_product(fc.collapsed, fc.collapsed, ctx),
                           Rational(sign == CurrentLabel::XPlus ? 2 : -2), ctx, &truncated);
    cc.require(self.is_zero(), "fused current squared at spacing q^{+-2}");
    rep.truncated = rep.truncated || truncated;
    return rep;
}

} // namespace qvertex
