#pragma once

#include <complex>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "qvertex/errors.hpp"
#include "qvertex/rational.hpp"

namespace qvertex {

enum class Backend { Exact, Numeric };

// Coefficient field parameters. All q-exponents must be integer multiples
// of 1/D (the engine works with the formal root s = q^{1/D}); phases are
// powers of a primitive L-th root of unity zeta.
struct FieldParams {
    int root_denominator = 2; // D
    int cyclotomic_order = 1; // L
};

// Elements of Q(zeta_L), stored densely modulo the L-th cyclotomic polynomial.
using Cyc = std::vector<mpq_class>;

struct FieldCtx {
    FieldParams params;
    Backend backend = Backend::Exact;
    std::complex<double> q_sample{0.7303, 0.1159};
    double tolerance = 1e-9;

    // cyclotomic modulus: x^deg = -(mod_[0] + mod_[1] x + ...)
    std::vector<mpq_class> cyclo_tail;
    int cyclo_deg = 1;

    std::complex<double> s_value;    // fixed D-th root of q_sample
    std::complex<double> zeta_value; // fixed primitive L-th root of unity
};

using FieldCtxPtr = std::shared_ptr<const FieldCtx>;

FieldCtxPtr make_field_ctx(const FieldParams& params,
                           Backend backend = Backend::Exact,
                           std::complex<double> q_sample = {0.7303, 0.1159},
                           double tolerance = 1e-9);

// Sparse Laurent polynomial in s with cyclotomic-rational coefficients.
struct Laurent {
    // sorted by exponent, no zero coefficients
    std::vector<std::pair<long long, Cyc>> terms;

    bool is_zero() const { return terms.empty(); }
    bool is_monomial() const { return terms.size() == 1; }
    long long min_exp() const { return terms.front().first; }
    long long max_exp() const { return terms.back().first; }
};

// Exact or numeric element of the coefficient field. Exact values are kept
// as a reduced fraction num/den of Laurent polynomials in s, normalized so
// that den has constant term 1 at exponent 0; equality is then syntactic.
class Scalar {
public:
    Scalar() = default; // exact zero with no context; absorbed on contact

    static Scalar zero(const FieldCtxPtr& ctx);
    static Scalar one(const FieldCtxPtr& ctx);
    static Scalar from_int(const FieldCtxPtr& ctx, long long v);
    static Scalar from_mpq(const FieldCtxPtr& ctx, const mpq_class& v);
    // c * zeta^zp * s^se
    static Scalar monomial(const FieldCtxPtr& ctx, const mpq_class& c,
                           long long s_exp, int zeta_pow = 0);
    static Scalar from_numeric(const FieldCtxPtr& ctx, std::complex<double> v);

    const FieldCtxPtr& ctx() const { return ctx_; }
    bool has_ctx() const { return static_cast<bool>(ctx_); }
    bool is_numeric() const { return numeric_; }

    bool is_zero() const;
    bool is_one() const;

    Scalar operator-() const;
    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    Scalar inverse() const;
    Scalar pow(long long e) const;

    // equality: syntactic on canonical forms (exact) or within tolerance
    // (numeric)
    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    std::complex<double> numeric_eval() const;
    std::complex<double> numeric_value() const { return value_; }

    // q-exponents printed as exact rationals
    std::string str() const;

    // exact monomial access (throws unless the value is c * s^e)
    bool is_exact_monomial() const;

    const Laurent& num() const { return num_; }
    const Laurent& den() const { return den_; }

private:
    friend Scalar scalar_make(const FieldCtxPtr&, Laurent, Laurent);
    void canonicalize();

    FieldCtxPtr ctx_;
    bool numeric_ = false;
    std::complex<double> value_{0.0, 0.0};
    Laurent num_; // empty == zero
    Laurent den_; // normalized: constant term 1 at exponent 0
};

// field constructors tied to a context
Scalar qpow(const FieldCtxPtr& ctx, const Rational& r); // q^r = s^{rD}
Scalar qint(const FieldCtxPtr& ctx, long long k);       // [k]
Scalar zeta_pow(const FieldCtxPtr& ctx, long long e);   // zeta^e
// [2k][k]/k, the Heisenberg bracket value for [a_k, a_{-k}], k > 0
Scalar heis_bracket(const FieldCtxPtr& ctx, long long k);

// Truncated power series with Scalar coefficients. Arithmetic never reads
// beyond the truncation order; binary ops truncate to the minimum order.
struct QSeries {
    std::string var = "x";
    std::vector<Scalar> coeff; // c_0..c_K

    int order() const { return static_cast<int>(coeff.size()) - 1; }
    Scalar at(int k) const;

    QSeries operator+(const QSeries& o) const;
    QSeries operator*(const QSeries& o) const;
    std::string str() const;
};

QSeries qseries_zero(const FieldCtxPtr& ctx, int order, const std::string& var = "x");
QSeries qseries_one(const FieldCtxPtr& ctx, int order, const std::string& var = "x");
// exp of a series with zero constant term
QSeries qseries_exp(const QSeries& a);

// g(z) = (q^2 z - 1)/(z - q^2) expanded around z = 0, to the given order
QSeries g_series(const FieldCtxPtr& ctx, int order);

std::string cyc_str(const FieldCtx& ctx, const Cyc& c);

} // namespace qvertex
