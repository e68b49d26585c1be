#include "qvertex/fock.hpp"

#include <algorithm>
#include <sstream>

namespace qvertex {

long long BasisState::heis_degree() const {
    long long d = 0;
    for (const auto& p : parts)
        for (int k : p) d += k;
    return d;
}

Rational BasisState::degree() const {
    Rational d(heis_degree());
    for (int j = 0; j < slots(); ++j)
        d += charge[j] * charge[j] + Rational(sector[j]) * charge[j];
    return d;
}

Rational BasisState::pairing(int slot) const {
    return Rational(2) * charge[slot] + Rational(sector[slot]);
}

bool BasisState::operator<(const BasisState& o) const {
    Rational da = degree(), db = o.degree();
    if (da != db) return da < db;
    if (charge != o.charge) return std::lexicographical_compare(
        charge.begin(), charge.end(), o.charge.begin(), o.charge.end());
    if (sector != o.sector) return sector < o.sector;
    return parts < o.parts;
}

bool BasisState::operator==(const BasisState& o) const {
    return parts == o.parts && charge == o.charge && sector == o.sector;
}

std::string BasisState::str() const {
    std::ostringstream os;
    for (int j = 0; j < slots(); ++j) {
        if (j) os << " (x) ";
        os << "[";
        for (size_t i = 0; i < parts[j].size(); ++i) {
            if (i) os << ",";
            os << parts[j][i];
        }
        os << "]e^{" << charge[j].str() << "a+L" << sector[j] << "}";
    }
    return os.str();
}

BasisState vacuum_state(int slots, const std::vector<int>& sectors) {
    BasisState b;
    b.parts.assign(static_cast<size_t>(slots), {});
    b.charge.assign(static_cast<size_t>(slots), Rational(0));
    b.sector = sectors;
    return b;
}

bool FockVector::is_zero() const { return terms.empty(); }

void FockVector::add(const BasisState& b, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = terms.find(b);
    if (it == terms.end()) {
        terms.emplace(b, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms.erase(it);
    }
}

FockVector FockVector::operator+(const FockVector& o) const {
    FockVector r = *this;
    for (const auto& [b, c] : o.terms) r.add(b, c);
    return r;
}

FockVector FockVector::operator-(const FockVector& o) const {
    FockVector r = *this;
    for (const auto& [b, c] : o.terms) r.add(b, -c);
    return r;
}

FockVector FockVector::scaled(const Scalar& c) const {
    FockVector r;
    if (c.is_zero()) return r;
    for (const auto& [b, v] : terms) r.add(b, v * c);
    return r;
}

bool FockVector::operator==(const FockVector& o) const {
    return (*this - o).is_zero();
}

std::string FockVector::str() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [b, c] : terms) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")*" << b.str();
    }
    return os.str();
}

FockVector fock_unit(const BasisState& b, const Scalar& c) {
    FockVector v;
    v.add(b, c);
    return v;
}

HeisOp heis_single(const FieldCtxPtr& ctx, int slot, int mode) {
    HeisOp op;
    op.mode = mode;
    op.terms.emplace_back(slot, Scalar::one(ctx));
    return op;
}

HeisOp coproduct_heis(const FieldCtxPtr& ctx, int m, int mode) {
    HeisOp op;
    op.mode = mode;
    long long n = mode < 0 ? -mode : mode;
    for (int j = 0; j <= m; ++j)
        op.terms.emplace_back(j, qpow(ctx, Rational(n * (2 * j - m), 2)));
    return op;
}

namespace {

// a_k on one slot of a single state; k != 0
FockVector heis_apply_single(const FieldCtxPtr& ctx, int slot, int k,
                             const BasisState& b, const Scalar& coeff) {
    FockVector out;
    if (k < 0) {
        BasisState nb = b;
        auto& p = nb.parts[static_cast<size_t>(slot)];
        p.push_back(-k);
        std::sort(p.begin(), p.end(), std::greater<int>());
        out.add(nb, coeff);
        return out;
    }
    // derivation determined by [a_k, a_{-k}] = [2k][k]/k
    const auto& p = b.parts[static_cast<size_t>(slot)];
    long long mult = static_cast<long long>(std::count(p.begin(), p.end(), k));
    if (mult == 0) return out;
    BasisState nb = b;
    auto& np = nb.parts[static_cast<size_t>(slot)];
    np.erase(std::find(np.begin(), np.end(), k));
    Scalar c = coeff * Scalar::from_int(ctx, mult) * heis_bracket(ctx, k);
    out.add(nb, c);
    return out;
}

} // namespace

FockVector heis_apply(const FieldCtxPtr& ctx, const HeisOp& op, const FockVector& v) {
    FockVector out;
    for (const auto& [b, c] : v.terms)
        for (const auto& [slot, w] : op.terms) {
            FockVector piece = heis_apply_single(ctx, slot, op.mode, b, c * w);
            for (const auto& [nb, nc] : piece.terms) out.add(nb, nc);
        }
    return out;
}

FockVector lattice_apply(int slot, const Rational& shift, const FockVector& v) {
    FockVector out;
    for (const auto& [b, c] : v.terms) {
        BasisState nb = b;
        nb.charge[static_cast<size_t>(slot)] += shift;
        out.add(nb, c);
    }
    return out;
}

FockVector qgrade_apply(const FieldCtxPtr& ctx, int slot, const Rational& t,
                        const FockVector& v) {
    FockVector out;
    for (const auto& [b, c] : v.terms)
        out.add(b, c * qpow(ctx, t * b.pairing(slot)));
    return out;
}

Rational charge_read(int slot, const BasisState& b) { return b.pairing(slot); }

Scalar extract_coefficient(const FockVector& v, const BasisState& b) {
    auto it = v.terms.find(b);
    if (it == v.terms.end()) return Scalar();
    return it->second;
}

namespace {

void enumerate_partitions(int max_weight, std::vector<std::vector<int>>& out) {
    // all partitions of weight <= max_weight, parts descending
    std::vector<int> cur;
    // recursive helper
    struct Rec {
        int maxw;
        std::vector<std::vector<int>>& out;
        void go(std::vector<int>& cur, int remaining, int max_part) {
            out.push_back(cur);
            for (int p = std::min(remaining, max_part); p >= 1; --p) {
                cur.push_back(p);
                go(cur, remaining - p, p);
                cur.pop_back();
            }
        }
    } rec{max_weight, out};
    rec.go(cur, max_weight, max_weight);
}

} // namespace

long long partition_count(int n) {
    if (n < 0) return 0;
    std::vector<long long> p(static_cast<size_t>(n) + 1, 0);
    p[0] = 1;
    for (int k = 1; k <= n; ++k)
        for (int i = k; i <= n; ++i) p[static_cast<size_t>(i)] += p[static_cast<size_t>(i - k)];
    return p[static_cast<size_t>(n)];
}

std::vector<BasisState> basis_enumerate(int slots, const std::vector<int>& sectors,
                                        const Rational& max_degree,
                                        const Rational& charge_lo, const Rational& charge_hi,
                                        int charge_denominator) {
    // candidate charges per slot
    std::vector<Rational> charges;
    long long lo_num = charge_lo.num() * charge_denominator / charge_lo.den();
    while (Rational(lo_num, charge_denominator) < charge_lo) ++lo_num;
    for (long long n = lo_num; Rational(n, charge_denominator) <= charge_hi; ++n)
        charges.emplace_back(n, charge_denominator);

    std::vector<std::vector<int>> all_parts;
    long long heis_cap = max_degree >= Rational(0) ? max_degree.num() / max_degree.den() : -1;
    if (heis_cap >= 0) enumerate_partitions(static_cast<int>(heis_cap), all_parts);

    std::vector<BasisState> out;
    BasisState cur = vacuum_state(slots, sectors);
    // iterate over charge tuples and partition tuples with pruning by degree
    struct Rec {
        int slots;
        const std::vector<Rational>& charges;
        const std::vector<std::vector<int>>& all_parts;
        const Rational& max_degree;
        std::vector<BasisState>& out;
        void go(BasisState& cur, int j, Rational used) {
            if (j == slots) {
                if (cur.degree() <= max_degree) out.push_back(cur);
                return;
            }
            // fractional charges can lower the degree by up to 1/4 per slot
            Rational slack(slots - j - 1, 4);
            for (const Rational& n : charges) {
                Rational lat = n * n + Rational(cur.sector[static_cast<size_t>(j)]) * n;
                if (used + lat > max_degree + slack) continue;
                for (const auto& p : all_parts) {
                    long long w = 0;
                    for (int k : p) w += k;
                    if (used + lat + Rational(w) > max_degree + slack) continue;
                    cur.charge[static_cast<size_t>(j)] = n;
                    cur.parts[static_cast<size_t>(j)] = p;
                    go(cur, j + 1, used + lat + Rational(w));
                }
            }
            cur.charge[static_cast<size_t>(j)] = Rational(0);
            cur.parts[static_cast<size_t>(j)].clear();
        }
    } rec{slots, charges, all_parts, max_degree, out};
    if (max_degree >= Rational(0)) rec.go(cur, 0, Rational(0));
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace qvertex
