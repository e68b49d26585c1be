#pragma once

#include <mutex>

#include "qvertex/ffvo.hpp"
#include "qvertex/report.hpp"

namespace qvertex {

enum class CurrentLabel { XPlus, XMinus, Phi, Psi };

const char* current_name(CurrentLabel l);

// Convention flags resolved empirically; the rejected alternatives are kept
// for negative controls.
enum class DeltaParse { RatioTimesQ, QDividesW }; // delta(z/w q^{+-c}) reading
enum class CouplingDivisor { ByK, One };          // "/n" in the coupling constants
enum class BigVTailSign { Derived, Flipped };     // q^{-+(m+1)k/2} exponent sign

struct Conventions {
    DeltaParse delta_parse = DeltaParse::RatioTimesQ;
    CouplingDivisor coupling_divisor = CouplingDivisor::ByK;
    BigVTailSign bigv_sign = BigVTailSign::Derived;
};

// level-1 Fock space currents
FFVO frenkel_jing(const FieldCtxPtr& ctx, CurrentLabel label, int kmax);

// i-th summand of the iterated coproduct on m+1 slots, one slot carrying
// the current. Indexing is by that slot for both signs: for x+ the current
// sits at slot i with argument z q^{i-1} behind phi factors, for x- at slot
// i with argument z q^{m+1-i} followed by psi factors.
FFVO coproduct_term(const FieldCtxPtr& ctx, CurrentLabel sign, int m, int slot, int kmax);

// slotwise coproduct of phi or psi as a single operator
FFVO coproduct_cartan(const FieldCtxPtr& ctx, CurrentLabel label, int m, int kmax);

FFVO antipode_current(const FieldCtxPtr& ctx, CurrentLabel label, int kmax);
Scalar counit_value(const FieldCtxPtr& ctx, CurrentLabel label);

// sum of coproduct terms, applied mode-wise
struct CurrentSum {
    std::vector<FFVO> terms;
    FockVector apply(const Rational& p, const FockVector& v, const FieldCtxPtr& ctx) const;
};
CurrentSum coproduct_current(const FieldCtxPtr& ctx, CurrentLabel label, int m, int kmax);

// memoized mode application shared by the relation checkers; thread safe
class CachedCurrent {
public:
    CachedCurrent(const CurrentSum* op, const FieldCtxPtr& ctx) : op_(op), ctx_(ctx) {}
    FockVector apply(const Rational& p, const BasisState& b);
    FockVector apply(const Rational& p, const FockVector& v);

private:
    const CurrentSum* op_;
    FieldCtxPtr ctx_;
    std::map<std::pair<std::pair<long long, long long>, BasisState>, FockVector> memo_;
    std::mutex mu_;
};

// All defining relations in denominator-cleared polynomial form, checked
// mode-wise on every basis state of degree <= N for modes |r|,|s| <= W.
RelationReport check_def21(const FieldCtxPtr& ctx, int m, const std::vector<int>& sectors,
                           int N, int W, int kmax, const Conventions& conv,
                           bool cross_numeric = true);

// exact matrix coefficients <out| product |in> per mode tuple
std::map<std::vector<Rational>, Scalar> correlation(const FieldCtxPtr& ctx,
                                                    const std::vector<FFVO>& ops,
                                                    const BasisState& in, const BasisState& out,
                                                    int window);

} // namespace qvertex
