#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qvertex/field.hpp"
#include "qvertex/rational.hpp"

namespace qvertex {

// Graded basis element of a tensor power of Fock modules: per slot a
// partition (Heisenberg creation content) and a lattice point
// e^{n alpha + Lambda_i}. Charges are exact rationals; in the current
// sector they are integers, the parafermion sector uses denominator m+1.
struct BasisState {
    // parts[j] sorted descending, entries >= 1
    std::vector<std::vector<int>> parts;
    std::vector<Rational> charge; // n_j
    std::vector<int> sector;      // i_j in {0,1}

    int slots() const { return static_cast<int>(sector.size()); }
    long long heis_degree() const;
    Rational degree() const; // sum |lambda| + n^2 + n*i
    // pairing (alpha, n alpha + Lambda_i) = 2n + i for one slot
    Rational pairing(int slot) const;

    bool operator<(const BasisState& o) const;
    bool operator==(const BasisState& o) const;
    std::string str() const;
};

BasisState vacuum_state(int slots, const std::vector<int>& sectors);

// Finite linear combination of basis states; zero coefficients are dropped.
struct FockVector {
    std::map<BasisState, Scalar> terms;

    bool is_zero() const;
    void add(const BasisState& b, const Scalar& c);
    FockVector operator+(const FockVector& o) const;
    FockVector operator-(const FockVector& o) const;
    FockVector scaled(const Scalar& c) const;
    bool operator==(const FockVector& o) const;
    std::string str() const;
};

FockVector fock_unit(const BasisState& b, const Scalar& c);

// Heisenberg generator: a single-slot mode a_k^{(j)} or the fused coproduct
// generator, a weighted sum over slots.
struct HeisOp {
    int mode = 0; // k != 0
    // (slot, weight); single-slot generators have one entry of weight 1
    std::vector<std::pair<int, Scalar>> terms;
};

HeisOp heis_single(const FieldCtxPtr& ctx, int slot, int mode);

// Delta^m(a_k) with weights q^{k(2(j-1)-m)/2} on slot j, the convention
// obtained by iterating the coproducts of phi(z) and psi(z); the same
// exponent pattern applies to both signs of k.
HeisOp coproduct_heis(const FieldCtxPtr& ctx, int m, int mode);

FockVector heis_apply(const FieldCtxPtr& ctx, const HeisOp& op, const FockVector& v);
FockVector lattice_apply(int slot, const Rational& shift, const FockVector& v);
FockVector qgrade_apply(const FieldCtxPtr& ctx, int slot, const Rational& t, const FockVector& v);
Rational charge_read(int slot, const BasisState& b);

Scalar extract_coefficient(const FockVector& v, const BasisState& b);

// All basis states with degree <= max_degree and every charge inside
// [charge_lo, charge_hi], charges running over multiples of
// 1/charge_denominator. Deterministic order: (degree, charges, partitions).
std::vector<BasisState> basis_enumerate(int slots, const std::vector<int>& sectors,
                                        const Rational& max_degree,
                                        const Rational& charge_lo, const Rational& charge_hi,
                                        int charge_denominator = 1);

// independent combinatorial count used as the enumeration oracle
long long partition_count(int n);

} // namespace qvertex
