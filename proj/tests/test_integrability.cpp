#include "doctest.h"

#include "qvertex/integrability.hpp"

using namespace qvertex;

namespace {

Scalar q(const FieldCtxPtr& c, long long n, long long d = 1) {
    return qpow(c, Rational(n, d));
}

} // namespace

TEST_CASE("single-current difference equation") {
    Engine eng = make_engine(0, Backend::Exact, 8);
    for (CurrentLabel sign : {CurrentLabel::XPlus, CurrentLabel::XMinus}) {
        RelationReport rep = check_diff_eq_single(eng, sign, 4);
        for (const auto& f : rep.failures) {
            CAPTURE(f.location);
            CHECK(false);
        }
        CHECK(rep.passed);
    }
    // argument rescale twists the first creation tail by q^2
    auto c = eng.exact;
    FFVO xp = frenkel_jing(c, CurrentLabel::XPlus, 8);
    FFVO xp2 = rescale_argument(xp, Rational(2));
    CHECK(xp2.create[0][0] == xp.create[0][0] * q(c, 2));
}

TEST_CASE("product collapse at m=1") {
    Engine eng = make_engine(1, Backend::Exact, 8);
    auto c = eng.exact;
    RelationReport rep;
    FusedCurrent fc = collapse_product(eng, CurrentLabel::XPlus, &rep);
    CHECK(fc.certified_zero_terms == 3); // 2^2 - 1
    CHECK(rep.passed);
    CHECK(!fc.collapsed.is_zero());

    // slot 1 holds phi(zq^{1/2}) x+(zq^2), slot 2 holds x+(zq)
    FFVO phi = frenkel_jing(c, CurrentLabel::Phi, 8);
    FFVO xp = frenkel_jing(c, CurrentLabel::XPlus, 8);
    for (int k = 1; k <= 8; ++k) {
        Scalar slot1 = phi.create[0][static_cast<size_t>(k - 1)] * q(c, k, 2) +
                       xp.create[0][static_cast<size_t>(k - 1)] * q(c, 2 * k);
        CHECK(fc.collapsed.create[0][static_cast<size_t>(k - 1)] == slot1);
        CHECK(fc.collapsed.create[1][static_cast<size_t>(k - 1)] ==
              xp.create[0][static_cast<size_t>(k - 1)] * q(c, k));
    }
    CHECK(fc.collapsed.shift == std::vector<Rational>{Rational(1), Rational(1)});

    FusedCurrent fm = collapse_product(eng, CurrentLabel::XMinus, &rep);
    CHECK(fm.certified_zero_terms == 3);
    // slot 1 holds x-(zq), slot 2 holds x-(zq^2) psi(zq^{1/2})
    FFVO xm = frenkel_jing(c, CurrentLabel::XMinus, 8);
    FFVO psi = frenkel_jing(c, CurrentLabel::Psi, 8);
    for (int k = 1; k <= 8; ++k) {
        CHECK(fm.collapsed.create[0][static_cast<size_t>(k - 1)] ==
              xm.create[0][static_cast<size_t>(k - 1)] * q(c, k));
        CHECK(fm.collapsed.create[1][static_cast<size_t>(k - 1)] ==
              xm.create[0][static_cast<size_t>(k - 1)] * q(c, 2 * k));
        CHECK(fm.collapsed.annih[1][static_cast<size_t>(k - 1)] ==
              xm.annih[0][static_cast<size_t>(k - 1)] * q(c, -2 * k) +
                  psi.annih[0][static_cast<size_t>(k - 1)] * q(c, -k, 2));
    }
    CHECK(fm.collapsed.shift == std::vector<Rational>{Rational(-1), Rational(-1)});
}

TEST_CASE("collapse certifies all cross terms at m=2") {
    Engine eng = make_engine(2, Backend::Exact, 6);
    RelationReport rep;
    FusedCurrent fc = collapse_product(eng, CurrentLabel::XPlus, &rep);
    CHECK(fc.certified_zero_terms == 26); // 3^3 - 1
    FusedCurrent fm = collapse_product(eng, CurrentLabel::XMinus, &rep);
    CHECK(fm.certified_zero_terms == 26);
}

TEST_CASE("collapse at m=0 returns the current itself") {
    Engine eng = make_engine(0, Backend::Exact, 8);
    FusedCurrent fc = collapse_product(eng, CurrentLabel::XPlus, nullptr);
    CHECK(ffvo_equal(fc.collapsed, frenkel_jing(eng.exact, CurrentLabel::XPlus, 8)).equal);
}

TEST_CASE("fused difference equations") {
    for (int m = 1; m <= 2; ++m) {
        Engine eng = make_engine(m, Backend::Exact, m == 1 ? 8 : 6);
        for (CurrentLabel sign : {CurrentLabel::XPlus, CurrentLabel::XMinus}) {
            RelationReport rep = check_diff_eq_fused(eng, sign);
            for (const auto& f : rep.failures) {
                CAPTURE(f.location);
                CAPTURE(f.lhs);
                CAPTURE(f.rhs);
                CHECK(false);
            }
            CHECK(rep.passed);
        }
    }
    // m=0 reduces to the single-current equation
    Engine e0 = make_engine(0, Backend::Exact, 8);
    RelationReport r0 = check_diff_eq_fused(e0, CurrentLabel::XPlus);
    CHECK(r0.passed);
}

TEST_CASE("fused closed form is a pure coproduct exponential") {
    for (int m = 1; m <= 2; ++m) {
        Engine eng = make_engine(m, Backend::Exact, m == 1 ? 8 : 6);
        for (CurrentLabel sign : {CurrentLabel::XPlus, CurrentLabel::XMinus}) {
            FFVO col;
            RelationReport rep = fused_closed_form(eng, sign, &col);
            for (const auto& f : rep.failures) {
                CAPTURE(f.location);
                CHECK(false);
            }
            CHECK(rep.passed);
        }
    }
    // at m=1 the x+ fused creation coefficient is w_{j,k}/[k] (the display
    // exponent (m-1)k/2 degenerates to zero)
    Engine eng = make_engine(1, Backend::Exact, 8);
    FFVO col;
    fused_closed_form(eng, CurrentLabel::XPlus, &col);
    auto c = eng.exact;
    for (int k = 1; k <= 4; ++k) {
        HeisOp dm = coproduct_heis(c, 1, k);
        CHECK(col.create[0][static_cast<size_t>(k - 1)] ==
              dm.terms[0].second / qint(c, k));
    }
}

TEST_CASE("pole structure of the coproduct current pair") {
    Engine eng = make_engine(1, Backend::Exact, 8);
    RelationReport rep = check_pole_structure(eng, 1, 2);
    for (const auto& f : rep.failures) {
        CAPTURE(f.location);
        CHECK(false);
    }
    CHECK(rep.passed);
}

TEST_CASE("level-1 series terminate without clearing") {
    Engine eng = make_engine(0, Backend::Exact, 8);
    auto c = eng.exact;
    // raw series of x+(z)x+(w) on the vacuum stop after the closed factors
    CurrentSum cur = coproduct_current(c, CurrentLabel::XPlus, 0, 8);
    FockVector v = fock_unit(vacuum_state(1, {0}), Scalar::one(c));
    // T = r+s = -4: modes (r,s) = (-4-s, s): nonzero only for s in a
    // two-step window set by (1-x)(1-q^{-2}x)
    int nonzero = 0;
    for (long long s = -8; s <= 2; ++s) {
        FockVector g = cur.apply(Rational(-4 - s), cur.apply(Rational(s), v, c), c);
        if (!g.is_zero()) ++nonzero;
    }
    CHECK(nonzero == 3);
}

TEST_CASE("geometric products of m+2 currents vanish") {
    for (int m = 0; m <= 1; ++m) {
        Engine eng = make_engine(m, Backend::Exact, 6);
        RelationReport rep = check_vanishing(eng, 2);
        for (const auto& f : rep.failures) {
            CAPTURE(f.location);
            CHECK(false);
        }
        CHECK(rep.passed);
    }
}
