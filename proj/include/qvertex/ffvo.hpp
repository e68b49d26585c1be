#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qvertex/fock.hpp"

namespace qvertex {

// Normal-ordered exponential vertex operator in one formal variable:
//
//   prefactor * zeta^phase
//   * exp( sum_{j,k} create[j][k-1] a^{(j)}_{-k} z^k )
//   * exp( sum_{j,k} annih[j][k-1]  a^{(j)}_{k}  z^{-k} )
//   * prod_j e^{shift_j alpha^{(j)}}
//   * prod_j q^{qgrade_j d^{(j)}}
//   * z^{zconst + sum_j zslope_j d^{(j)}}
//
// where d^{(j)} is the lattice pairing operator on slot j. Factors act
// right to left; tails are kept to k <= kmax. The zero operator is a first
// class value (zero prefactor) so product collapse can be certified term
// by term.
struct FFVO {
    int slots = 1;
    int kmax = 8;
    Scalar prefactor;
    int phase = 0; // power of zeta, reduced mod L
    std::vector<std::vector<Scalar>> create;
    std::vector<std::vector<Scalar>> annih;
    std::vector<Rational> shift;
    std::vector<Rational> qgrade;
    Rational zconst;
    std::vector<Rational> zslope;

    bool is_zero() const { return prefactor.is_zero(); }
    std::string str() const;
};

FFVO ffvo_identity(const FieldCtxPtr& ctx, int slots, int kmax);
FFVO ffvo_zero(const FieldCtxPtr& ctx, int slots, int kmax);
// all tails, grades, shifts and power laws negated; prefactor inverted
FFVO ffvo_inverse(const FFVO& a);
// A(z q^c): twists tails by q^{±ck}, adds c * zslope to the q-grade and
// multiplies the prefactor by q^{c zconst}
FFVO rescale_argument(const FFVO& a, const Rational& c);
FFVO ffvo_scaled(const FFVO& a, const Scalar& s);

// Contraction factor of an ordered product A(z) B(w), and by extension any
// scalar-valued series the calculus produces: a monomial
// coeff * zeta^phase * z^{z_exp} * x^{x_exp} with x = w/z, times
// exp( sum_k gpos[k-1] x^k + sum_k gneg[k-1] x^{-k} ).
// Finite q-binomial content is recovered by closed-form recognition.
struct ScalarSeries {
    Scalar coeff;
    int phase = 0;
    Rational z_exp;
    Rational x_exp;
    std::vector<Scalar> gpos;
    std::vector<Scalar> gneg;

    int kmax() const { return static_cast<int>(gpos.size()); }
    ScalarSeries operator*(const ScalarSeries& o) const;
    std::string str() const;
};

ScalarSeries series_one(const FieldCtxPtr& ctx, int kmax);
// (1 - q^e x^{dir})^mult as log data; dir = +1 or -1
ScalarSeries series_closed_factor(const FieldCtxPtr& ctx, int kmax, const Rational& e,
                                  int mult, int dir = +1);
ScalarSeries series_monomial(const FieldCtxPtr& ctx, int kmax, const Scalar& coeff,
                             const Rational& z_exp, const Rational& x_exp, int phase = 0);

// Closed-form recognition: factors (1 - q^e x)^mult recovered from the log
// coefficients when gamma_k = sum_i n_i q^{e_i k}/k for a finite integer
// multiset, verified through the truncation order. The unrecognized part
// stays as a residual log series.
struct RecognizedSeries {
    Scalar coeff;
    int phase = 0;
    Rational z_exp;
    Rational x_exp;
    std::map<Rational, int> closed; // exponent -> multiplicity, in x
    std::vector<Scalar> residual_pos;
    std::vector<Scalar> residual_neg;

    bool fully_recognized() const;
    std::string str() const;
};

RecognizedSeries recognize_closed_form(const ScalarSeries& s);

// structural equality of two contraction factors; residual parts are
// compared coefficientwise through kmax (flagged as truncated certification
// when nonzero)
struct SeriesEq {
    bool equal = false;
    bool truncated = false;
    std::string mismatch;
};
SeriesEq series_equal(const ScalarSeries& a, const ScalarSeries& b);

// expand coeff * exp(sum gpos x^k) (+ closed content) as a power series in
// x to the given order; x_exp must be integral zero and gneg empty
QSeries series_expand_pos(const ScalarSeries& s, int order);

// Ordered product A(z) B(w) split into contraction and joint normal data.
struct TwoVarProduct {
    FFVO left;  // variable z
    FFVO right; // variable w
    ScalarSeries contraction;
};

TwoVarProduct normal_product(const FFVO& a, const FFVO& b, const FieldCtxPtr& ctx);

// Specialization w = q^c z. Returns the zero operator when a recognized
// closed factor vanishes; throws PoleAtSpecialization on a pole. If the
// contraction has an unrecognized residual its value is summed through
// kmax and *truncated is set.
FFVO specialize(const TwoVarProduct& p, const Rational& c, const FieldCtxPtr& ctx,
                bool* truncated = nullptr);

// Joint normal-ordered composition :A(z) B(zq^c):, no contraction factor.
FFVO normal_compose(const FFVO& a, const FFVO& b, const Rational& c, const FieldCtxPtr& ctx);

// Exact coefficient of z^{-p} of A applied to v.
FockVector apply_mode(const FFVO& a, const Rational& p, const FockVector& v,
                      const FieldCtxPtr& ctx);

// Exact coefficient of z^{-r} w^{-s} of (extra * contraction * :A(z)B(w):)
// applied to v, summing the series against the grading of v.
FockVector product_mode_apply(const TwoVarProduct& p, const Rational& r, const Rational& s,
                              const FockVector& v, const FieldCtxPtr& ctx,
                              const ScalarSeries* extra = nullptr,
                              bool* truncated = nullptr);

// Same extraction with the (expensive) series exponential precomputed once;
// use this when scanning many mode pairs of the same product.
class ProductApplier {
public:
    ProductApplier(TwoVarProduct p, const FieldCtxPtr& ctx, const ScalarSeries* extra = nullptr);
    FockVector apply(const Rational& r, const Rational& s, const FockVector& v,
                     bool* truncated = nullptr) const;
    const TwoVarProduct& product() const { return prod_; }

private:
    TwoVarProduct prod_;
    FieldCtxPtr ctx_;
    Scalar c0_;
    Rational z_exp_, x_exp_;
    std::vector<Scalar> epos_, eneg_;
    bool has_neg_ = false;
};

// modes of A that can act nontrivially on v within an output degree cap
std::vector<Rational> mode_range(const FFVO& a, const BasisState& b,
                                 const Rational& out_degree_cap);

struct FfvoEq {
    bool equal = false;
    std::string mismatch; // first mismatching component
};
FfvoEq ffvo_equal(const FFVO& a, const FFVO& b);

} // namespace qvertex
