#include "qvertex/field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qvertex {

namespace {

// ---- dense rational polynomials, used to set up the cyclotomic modulus ----

using QPoly = std::vector<mpq_class>; // coefficient of x^i at index i

void qpoly_trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly qpoly_divexact(const QPoly& a, const QPoly& b) {
    QPoly q(a.size(), mpq_class(0));
    QPoly rr = a;
    qpoly_trim(rr);
    while (rr.size() >= b.size() && !rr.empty()) {
        size_t shift = rr.size() - b.size();
        mpq_class c = rr.back() / b.back();
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i) rr[shift + i] -= c * b[i];
        qpoly_trim(rr);
    }
    qpoly_trim(q);
    return q;
}

QPoly cyclotomic_poly(int L) {
    QPoly p(static_cast<size_t>(L) + 1, mpq_class(0));
    p[0] = -1;
    p[static_cast<size_t>(L)] = 1; // x^L - 1
    for (int d = 1; d < L; ++d) {
        if (L % d != 0) continue;
        p = qpoly_divexact(p, cyclotomic_poly(d));
    }
    return p;
}

// ---- cyclotomic arithmetic modulo Phi_L ----

Cyc cyc_zero(const FieldCtx& ctx) { return Cyc(static_cast<size_t>(ctx.cyclo_deg), mpq_class(0)); }

Cyc cyc_from_mpq(const FieldCtx& ctx, const mpq_class& v) {
    Cyc c = cyc_zero(ctx);
    c[0] = v;
    return c;
}

bool cyc_is_zero(const Cyc& c) {
    for (const auto& v : c)
        if (v != 0) return false;
    return true;
}

Cyc cyc_add(const Cyc& a, const Cyc& b) {
    Cyc r = a;
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

Cyc cyc_neg(const Cyc& a) {
    Cyc r = a;
    for (auto& v : r) v = -v;
    return r;
}

// reduce a dense vector (any length) modulo the cyclotomic tail
Cyc cyc_reduce(const FieldCtx& ctx, std::vector<mpq_class> v) {
    size_t deg = static_cast<size_t>(ctx.cyclo_deg);
    for (size_t i = v.size(); i-- > deg;) {
        mpq_class c = v[i];
        if (c == 0) continue;
        v[i] = 0;
        for (size_t j = 0; j < deg; ++j) v[i - deg + j] -= c * ctx.cyclo_tail[j];
    }
    v.resize(deg, mpq_class(0));
    return v;
}

Cyc cyc_mul(const FieldCtx& ctx, const Cyc& a, const Cyc& b) {
    std::vector<mpq_class> v(a.size() + b.size() - 1, mpq_class(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) {
            if (b[j] == 0) continue;
            v[i + j] += a[i] * b[j];
        }
    }
    return cyc_reduce(ctx, std::move(v));
}

// inverse in Q[x]/Phi_L via extended Euclid
Cyc cyc_inverse(const FieldCtx& ctx, const Cyc& a) {
    if (cyc_is_zero(a)) throw Error(ErrorCode::Internal, "cyclotomic inverse of zero");
    if (ctx.cyclo_deg == 1) {
        Cyc r(1);
        r[0] = 1 / a[0];
        return r;
    }
    QPoly phi(ctx.cyclo_tail);
    phi.push_back(mpq_class(1));
    QPoly r0 = phi, r1(a.begin(), a.end());
    qpoly_trim(r1);
    QPoly t0{}, t1{mpq_class(1)};
    while (!(r1.size() == 1)) {
        if (r1.empty()) throw Error(ErrorCode::Internal, "cyclotomic inverse: unit gcd expected");
        // r0 = q*r1 + r2
        QPoly q(r0.size(), mpq_class(0)), r2 = r0;
        while (r2.size() >= r1.size() && !r2.empty()) {
            size_t shift = r2.size() - r1.size();
            mpq_class c = r2.back() / r1.back();
            q[shift] += c;
            for (size_t i = 0; i < r1.size(); ++i) r2[shift + i] -= c * r1[i];
            qpoly_trim(r2);
        }
        qpoly_trim(q);
        // t2 = t0 - q*t1
        QPoly t2 = t0;
        t2.resize(std::max(t0.size(), q.size() + t1.size()), mpq_class(0));
        for (size_t i = 0; i < q.size(); ++i)
            for (size_t j = 0; j < t1.size(); ++j) t2[i + j] -= q[i] * t1[j];
        qpoly_trim(t2);
        r0 = r1; r1 = r2; t0 = t1; t1 = t2;
    }
    mpq_class lead = r1[0];
    for (auto& v : t1) v /= lead;
    std::vector<mpq_class> ext(t1.begin(), t1.end());
    return cyc_reduce(ctx, std::move(ext));
}

std::complex<double> cyc_eval(const FieldCtx& ctx, const Cyc& c) {
    std::complex<double> acc{0.0, 0.0}, z{1.0, 0.0};
    for (const auto& v : c) {
        acc += v.get_d() * z;
        z *= ctx.zeta_value;
    }
    return acc;
}

// ---- Laurent polynomials in s over the cyclotomic field ----

Laurent laurent_zero() { return Laurent{}; }

Laurent laurent_monomial(long long e, Cyc c) {
    Laurent r;
    if (!cyc_is_zero(c)) r.terms.emplace_back(e, std::move(c));
    return r;
}

Laurent laurent_add(const Laurent& a, const Laurent& b) {
    Laurent r;
    size_t i = 0, j = 0;
    while (i < a.terms.size() || j < b.terms.size()) {
        if (j == b.terms.size() || (i < a.terms.size() && a.terms[i].first < b.terms[j].first)) {
            r.terms.push_back(a.terms[i++]);
        } else if (i == a.terms.size() || b.terms[j].first < a.terms[i].first) {
            r.terms.push_back(b.terms[j++]);
        } else {
            Cyc c = cyc_add(a.terms[i].second, b.terms[j].second);
            if (!cyc_is_zero(c)) r.terms.emplace_back(a.terms[i].first, std::move(c));
            ++i; ++j;
        }
    }
    return r;
}

Laurent laurent_neg(const Laurent& a) {
    Laurent r = a;
    for (auto& [e, c] : r.terms) c = cyc_neg(c);
    return r;
}

Laurent laurent_mul(const FieldCtx& ctx, const Laurent& a, const Laurent& b) {
    if (a.is_zero() || b.is_zero()) return laurent_zero();
    std::map<long long, Cyc> acc;
    for (const auto& [ea, ca] : a.terms)
        for (const auto& [eb, cb] : b.terms) {
            Cyc p = cyc_mul(ctx, ca, cb);
            if (cyc_is_zero(p)) continue;
            auto it = acc.find(ea + eb);
            if (it == acc.end()) acc.emplace(ea + eb, std::move(p));
            else it->second = cyc_add(it->second, p);
        }
    Laurent r;
    for (auto& [e, c] : acc)
        if (!cyc_is_zero(c)) r.terms.emplace_back(e, std::move(c));
    return r;
}

Laurent laurent_scale(const FieldCtx& ctx, const Laurent& a, const Cyc& c) {
    if (cyc_is_zero(c)) return laurent_zero();
    Laurent r;
    for (const auto& [e, v] : a.terms) {
        Cyc p = cyc_mul(ctx, v, c);
        if (!cyc_is_zero(p)) r.terms.emplace_back(e, std::move(p));
    }
    return r;
}

Laurent laurent_shift(const Laurent& a, long long d) {
    Laurent r = a;
    for (auto& [e, c] : r.terms) e += d;
    return r;
}

bool laurent_equal(const Laurent& a, const Laurent& b) {
    if (a.terms.size() != b.terms.size()) return false;
    for (size_t i = 0; i < a.terms.size(); ++i) {
        if (a.terms[i].first != b.terms[i].first) return false;
        if (a.terms[i].second != b.terms[i].second) return false;
    }
    return true;
}

// polynomial remainder a mod b; both must have min_exp >= 0
Laurent laurent_polyrem(const FieldCtx& ctx, Laurent a, const Laurent& b) {
    Cyc lead_inv = cyc_inverse(ctx, b.terms.back().second);
    long long db = b.max_exp();
    while (!a.is_zero() && a.max_exp() >= db) {
        long long shift = a.max_exp() - db;
        Cyc c = cyc_mul(ctx, a.terms.back().second, lead_inv);
        Laurent sub = laurent_scale(ctx, laurent_shift(b, shift), c);
        a = laurent_add(a, laurent_neg(sub));
    }
    return a;
}

Laurent laurent_polydiv(const FieldCtx& ctx, Laurent a, const Laurent& b) {
    Cyc lead_inv = cyc_inverse(ctx, b.terms.back().second);
    long long db = b.max_exp();
    Laurent q;
    std::vector<std::pair<long long, Cyc>> qterms;
    while (!a.is_zero() && a.max_exp() >= db) {
        long long shift = a.max_exp() - db;
        Cyc c = cyc_mul(ctx, a.terms.back().second, lead_inv);
        qterms.emplace_back(shift, c);
        Laurent sub = laurent_scale(ctx, laurent_shift(b, shift), c);
        a = laurent_add(a, laurent_neg(sub));
    }
    std::sort(qterms.begin(), qterms.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    q.terms = std::move(qterms);
    return q;
}

// monic gcd of the polynomial parts (min_exp normalized to 0 first)
Laurent laurent_gcd(const FieldCtx& ctx, Laurent a, Laurent b) {
    a = laurent_shift(a, -a.min_exp());
    b = laurent_shift(b, -b.min_exp());
    while (!b.is_zero()) {
        Laurent r = laurent_polyrem(ctx, a, b);
        a = b;
        b = std::move(r);
        if (!b.is_zero()) b = laurent_shift(b, -b.min_exp());
    }
    Cyc inv = cyc_inverse(ctx, a.terms.back().second);
    return laurent_scale(ctx, a, inv);
}

std::complex<double> ipow(std::complex<double> b, long long e) {
    if (e < 0) return 1.0 / ipow(b, -e);
    std::complex<double> r{1.0, 0.0};
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

std::complex<double> laurent_eval(const FieldCtx& ctx, const Laurent& a) {
    std::complex<double> acc{0.0, 0.0};
    for (const auto& [e, c] : a.terms) acc += cyc_eval(ctx, c) * ipow(ctx.s_value, e);
    return acc;
}

} // namespace

// ---- context ----

FieldCtxPtr make_field_ctx(const FieldParams& params, Backend backend,
                           std::complex<double> q_sample, double tolerance) {
    if (params.root_denominator < 1 || params.cyclotomic_order < 1)
        throw Error(ErrorCode::ConfigError, "field parameters must be positive");
    auto ctx = std::make_shared<FieldCtx>();
    ctx->params = params;
    ctx->backend = backend;
    ctx->q_sample = q_sample;
    ctx->tolerance = tolerance;
    QPoly phi = cyclotomic_poly(params.cyclotomic_order);
    ctx->cyclo_deg = static_cast<int>(phi.size()) - 1;
    ctx->cyclo_tail.assign(phi.begin(), phi.end() - 1); // monic
    ctx->s_value = std::exp(std::log(q_sample) / static_cast<double>(params.root_denominator));
    double ang = 2.0 * M_PI / static_cast<double>(params.cyclotomic_order);
    ctx->zeta_value = std::complex<double>(std::cos(ang), std::sin(ang));
    return ctx;
}

// ---- Scalar ----

Scalar scalar_make(const FieldCtxPtr& ctx, Laurent num, Laurent den) {
    Scalar s;
    s.ctx_ = ctx;
    s.numeric_ = false;
    s.num_ = std::move(num);
    s.den_ = std::move(den);
    s.canonicalize();
    return s;
}

void Scalar::canonicalize() {
    if (den_.is_zero()) throw Error(ErrorCode::Internal, "Scalar: zero denominator");
    if (num_.is_zero()) {
        den_ = laurent_monomial(0, cyc_from_mpq(*ctx_, mpq_class(1)));
        return;
    }
    // split off the s-monomial content, keep it on the numerator side
    long long shift = num_.min_exp() - den_.min_exp();
    Laurent n = laurent_shift(num_, -num_.min_exp());
    Laurent d = laurent_shift(den_, -den_.min_exp());
    if (!d.is_monomial()) {
        Laurent g = laurent_gcd(*ctx_, n, d);
        if (!(g.is_monomial() && g.max_exp() == 0)) {
            n = laurent_polydiv(*ctx_, n, g);
            d = laurent_polydiv(*ctx_, d, g);
        }
    }
    // normalize the denominator's lowest coefficient to 1
    Cyc low_inv = cyc_inverse(*ctx_, d.terms.front().second);
    n = laurent_scale(*ctx_, n, low_inv);
    d = laurent_scale(*ctx_, d, low_inv);
    num_ = laurent_shift(n, shift);
    den_ = std::move(d);
}

Scalar Scalar::zero(const FieldCtxPtr& ctx) {
    if (ctx->backend == Backend::Numeric) return from_numeric(ctx, {0.0, 0.0});
    return scalar_make(ctx, laurent_zero(), laurent_monomial(0, cyc_from_mpq(*ctx, mpq_class(1))));
}

Scalar Scalar::one(const FieldCtxPtr& ctx) { return from_int(ctx, 1); }

Scalar Scalar::from_int(const FieldCtxPtr& ctx, long long v) {
    return from_mpq(ctx, mpq_class(static_cast<long>(v)));
}

Scalar Scalar::from_mpq(const FieldCtxPtr& ctx, const mpq_class& v) {
    if (ctx->backend == Backend::Numeric) return from_numeric(ctx, {v.get_d(), 0.0});
    return scalar_make(ctx, laurent_monomial(0, cyc_from_mpq(*ctx, v)),
                       laurent_monomial(0, cyc_from_mpq(*ctx, mpq_class(1))));
}

Scalar Scalar::monomial(const FieldCtxPtr& ctx, const mpq_class& c, long long s_exp, int zeta_pow) {
    if (ctx->backend == Backend::Numeric) {
        std::complex<double> v = c.get_d() * ipow(ctx->s_value, s_exp) *
                                 ipow(ctx->zeta_value, zeta_pow);
        return from_numeric(ctx, v);
    }
    int L = ctx->params.cyclotomic_order;
    int zp = ((zeta_pow % L) + L) % L;
    std::vector<mpq_class> raw(static_cast<size_t>(zp) + 1, mpq_class(0));
    raw[static_cast<size_t>(zp)] = c;
    Cyc cc = cyc_reduce(*ctx, std::move(raw));
    return scalar_make(ctx, laurent_monomial(s_exp, std::move(cc)),
                       laurent_monomial(0, cyc_from_mpq(*ctx, mpq_class(1))));
}

Scalar Scalar::from_numeric(const FieldCtxPtr& ctx, std::complex<double> v) {
    Scalar s;
    s.ctx_ = ctx;
    s.numeric_ = true;
    s.value_ = v;
    return s;
}

bool Scalar::is_zero() const {
    if (!ctx_) return true;
    if (numeric_) return std::abs(value_) <= ctx_->tolerance;
    return num_.is_zero();
}

bool Scalar::is_one() const {
    if (!ctx_) return false;
    return *this == Scalar::one(ctx_);
}

static const FieldCtxPtr& pick_ctx(const Scalar& a, const Scalar& b) {
    if (a.has_ctx()) return a.ctx();
    return b.ctx();
}

Scalar Scalar::operator-() const {
    if (!ctx_) return *this;
    if (numeric_) return from_numeric(ctx_, -value_);
    Scalar r = *this;
    r.num_ = laurent_neg(r.num_);
    return r;
}

Scalar Scalar::operator+(const Scalar& o) const {
    if (!ctx_) return o;
    if (!o.ctx_) return *this;
    if (numeric_ || o.numeric_) return from_numeric(ctx_, numeric_eval() + o.numeric_eval());
    Laurent n = laurent_add(laurent_mul(*ctx_, num_, o.den_), laurent_mul(*ctx_, o.num_, den_));
    Laurent d = laurent_mul(*ctx_, den_, o.den_);
    return scalar_make(ctx_, std::move(n), std::move(d));
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
    if (!ctx_ || !o.ctx_) return Scalar();
    if (numeric_ || o.numeric_)
        return from_numeric(pick_ctx(*this, o), numeric_eval() * o.numeric_eval());
    return scalar_make(ctx_, laurent_mul(*ctx_, num_, o.num_), laurent_mul(*ctx_, den_, o.den_));
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inverse(); }

Scalar Scalar::inverse() const {
    if (!ctx_ || is_zero()) throw Error(ErrorCode::Internal, "Scalar: inverse of zero");
    if (numeric_) return from_numeric(ctx_, 1.0 / value_);
    return scalar_make(ctx_, den_, num_);
}

Scalar Scalar::pow(long long e) const {
    if (!ctx_) {
        if (e == 0) throw Error(ErrorCode::Internal, "Scalar: 0^0 without context");
        return Scalar();
    }
    Scalar base = e < 0 ? inverse() : *this;
    long long n = e < 0 ? -e : e;
    Scalar r = Scalar::one(ctx_);
    while (n > 0) {
        if (n & 1) r = r * base;
        base = base * base;
        n >>= 1;
    }
    return r;
}

bool Scalar::operator==(const Scalar& o) const {
    if (!ctx_ || !o.ctx_) return is_zero() && o.is_zero();
    if (numeric_ || o.numeric_) {
        const FieldCtx& c = *pick_ctx(*this, o);
        return std::abs(numeric_eval() - o.numeric_eval()) <= c.tolerance;
    }
    return laurent_equal(num_, o.num_) && laurent_equal(den_, o.den_);
}

std::complex<double> Scalar::numeric_eval() const {
    if (!ctx_) return {0.0, 0.0};
    if (numeric_) return value_;
    std::complex<double> d = laurent_eval(*ctx_, den_);
    if (std::abs(d) < 1e-30)
        throw Error(ErrorCode::PoleAtSample, "denominator vanishes at the q sample");
    return laurent_eval(*ctx_, num_) / d;
}

bool Scalar::is_exact_monomial() const {
    if (!ctx_ || numeric_) return false;
    return num_.is_monomial() && den_.is_monomial() && den_.max_exp() == 0;
}

std::string cyc_str(const FieldCtx& ctx, const Cyc& c) {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        if (!first) os << "+";
        first = false;
        os << c[i].get_str();
        if (i == 1) os << "*zeta";
        else if (i > 1) os << "*zeta^" << i;
    }
    if (first) os << "0";
    return os.str();
}

static std::string laurent_str(const FieldCtx& ctx, const Laurent& a) {
    if (a.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : a.terms) {
        if (!first) os << " + ";
        first = false;
        bool simple = c.size() >= 1 && c[0] != 0;
        for (size_t i = 1; i < c.size(); ++i)
            if (c[i] != 0) simple = false;
        std::string cs = simple ? c[0].get_str() : "(" + cyc_str(ctx, c) + ")";
        if (e == 0) {
            os << cs;
        } else {
            Rational qe(e, ctx.params.root_denominator);
            if (cs != "1") os << cs << "*";
            os << "q^(" << qe.str() << ")";
        }
    }
    return os.str();
}

std::string Scalar::str() const {
    if (!ctx_) return "0";
    if (numeric_) {
        std::ostringstream os;
        os << value_.real() << (value_.imag() < 0 ? "-" : "+") << std::abs(value_.imag()) << "i";
        return os.str();
    }
    std::string n = laurent_str(*ctx_, num_);
    if (den_.is_monomial() && den_.max_exp() == 0) return n;
    return "(" + n + ") / (" + laurent_str(*ctx_, den_) + ")";
}

// ---- field constructors ----

Scalar qpow(const FieldCtxPtr& ctx, const Rational& r) {
    Rational e = Rational(ctx->params.root_denominator) * r;
    if (!e.is_integer())
        throw Error(ErrorCode::NonRepresentableExponent,
                    "q^(" + r.str() + ") is not representable with D=" +
                        std::to_string(ctx->params.root_denominator));
    return Scalar::monomial(ctx, mpq_class(1), e.num());
}

Scalar qint(const FieldCtxPtr& ctx, long long k) {
    // [k] = (q^k - q^{-k})/(q - q^{-1}), a Laurent polynomial in q
    Scalar r = Scalar::zero(ctx);
    long long a = k < 0 ? -k : k;
    for (long long j = 0; j < a; ++j) r += qpow(ctx, Rational(a - 1 - 2 * j));
    if (k < 0) r = -r;
    return r;
}

Scalar zeta_pow(const FieldCtxPtr& ctx, long long e) {
    long long L = ctx->params.cyclotomic_order;
    int zp = static_cast<int>(((e % L) + L) % L);
    return Scalar::monomial(ctx, mpq_class(1), 0, zp);
}

Scalar heis_bracket(const FieldCtxPtr& ctx, long long k) {
    Scalar v = qint(ctx, 2 * k) * qint(ctx, k);
    return v * Scalar::from_mpq(ctx, mpq_class(1, static_cast<long>(k)));
}

// ---- QSeries ----

Scalar QSeries::at(int k) const {
    if (k < 0 || k >= static_cast<int>(coeff.size())) return Scalar();
    return coeff[static_cast<size_t>(k)];
}

QSeries QSeries::operator+(const QSeries& o) const {
    QSeries r;
    r.var = var;
    size_t n = std::min(coeff.size(), o.coeff.size());
    r.coeff.resize(n);
    for (size_t i = 0; i < n; ++i) r.coeff[i] = coeff[i] + o.coeff[i];
    return r;
}

QSeries QSeries::operator*(const QSeries& o) const {
    QSeries r;
    r.var = var;
    size_t n = std::min(coeff.size(), o.coeff.size());
    r.coeff.assign(n, Scalar());
    for (size_t i = 0; i < n; ++i) {
        if (coeff[i].is_zero()) continue;
        for (size_t j = 0; i + j < n; ++j) r.coeff[i + j] += coeff[i] * o.coeff[j];
    }
    return r;
}

std::string QSeries::str() const {
    std::ostringstream os;
    for (size_t i = 0; i < coeff.size(); ++i) {
        if (coeff[i].is_zero()) continue;
        os << "(" << coeff[i].str() << ")*" << var << "^" << i << " ";
    }
    os << "+ O(" << var << "^" << coeff.size() << ")";
    return os.str();
}

QSeries qseries_zero(const FieldCtxPtr& ctx, int order, const std::string& var) {
    QSeries r;
    r.var = var;
    r.coeff.assign(static_cast<size_t>(order) + 1, Scalar::zero(ctx));
    return r;
}

QSeries qseries_one(const FieldCtxPtr& ctx, int order, const std::string& var) {
    QSeries r = qseries_zero(ctx, order, var);
    r.coeff[0] = Scalar::one(ctx);
    return r;
}

QSeries qseries_exp(const QSeries& a) {
    if (!a.coeff.empty() && !a.coeff[0].is_zero())
        throw Error(ErrorCode::Internal, "qseries_exp needs zero constant term");
    const FieldCtxPtr& ctx = a.coeff.empty() ? FieldCtxPtr() : a.coeff[0].ctx();
    QSeries r = qseries_one(ctx, a.order(), a.var);
    QSeries term = qseries_one(ctx, a.order(), a.var);
    for (int i = 1; i <= a.order(); ++i) {
        term = term * a;
        Scalar inv_i = Scalar::from_mpq(ctx, mpq_class(1, i));
        for (auto& c : term.coeff) c = c * inv_i;
        r = r + term;
    }
    return r;
}

QSeries g_series(const FieldCtxPtr& ctx, int order) {
    // (q^2 z - 1) / (z - q^2) as a power series around z = 0
    QSeries r = qseries_zero(ctx, order, "z");
    Scalar qm2 = qpow(ctx, Rational(-2));
    // 1/(z - q^2) = -q^{-2} * sum_d (q^{-2} z)^d
    // numerator (q^2 z - 1)
    std::vector<Scalar> inv(static_cast<size_t>(order) + 1);
    for (int d = 0; d <= order; ++d) inv[static_cast<size_t>(d)] = -(qm2.pow(d + 1));
    Scalar q2 = qpow(ctx, Rational(2));
    for (int d = 0; d <= order; ++d) {
        Scalar c = -inv[static_cast<size_t>(d)];
        if (d >= 1) c += q2 * inv[static_cast<size_t>(d - 1)];
        r.coeff[static_cast<size_t>(d)] = c;
    }
    return r;
}

} // namespace qvertex
