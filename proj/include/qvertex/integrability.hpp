#pragma once

#include "qvertex/engine.hpp"

namespace qvertex {

// Ordered product of m+1 coproduct currents at arguments spaced by q^{+-2},
// kept both as the surviving factor list and as the collapsed operator.
struct FusedCurrent {
    CurrentLabel sign;
    int m = 0;
    std::vector<int> survivor_slots;      // slot of the current in each factor
    std::vector<Rational> survivor_args;  // argument offsets per factor
    FFVO collapsed;
    long long certified_zero_terms = 0;
};

// single-current difference equation
// x±(q^2 z) = phi^{-+1}(z q^{-+1/2+1}) x±(z) psi^{±1}(z q^{±1/2+1})
RelationReport check_diff_eq_single(const Engine& eng, CurrentLabel sign, int N);

// expands the (m+1)-fold spaced product, certifies every cross term is the
// zero operator, and returns the surviving ordered term collapsed
FusedCurrent collapse_product(const Engine& eng, CurrentLabel sign,
                              RelationReport* rep = nullptr);

// fused difference equation in slotwise form; the compact-form arguments
// are compared against the slotwise ones and reported as data
RelationReport check_diff_eq_fused(const Engine& eng, CurrentLabel sign);

// cleared correlation series of x±(z)x±(w) terminate at the grading bound
RelationReport check_pole_structure(const Engine& eng, int N, int window);

// the (m+2)-fold geometrically spaced product vanishes term by term
RelationReport check_vanishing(const Engine& eng, int N);

// collapsed operator is a pure exponential in the fused Heisenberg
// generators: tails proportional to the coproduct weights, per mode
RelationReport fused_closed_form(const Engine& eng, CurrentLabel sign, FFVO* out = nullptr);

} // namespace qvertex
