#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qvertex/currents.hpp"
#include "qvertex/parallel.hpp"

namespace qvertex {

// One engine instance fixes the fusion level m, the field parameters
// D = 2(m+1), L = m+1, the truncation order and the convention flags. A
// numeric twin context is kept for cross-backend comparisons.
struct Engine {
    int m = 0;
    int kmax = 8;
    Backend backend = Backend::Exact;
    Conventions conventions;
    FieldCtxPtr exact;   // always available
    FieldCtxPtr numeric; // same parameters, numeric backend
    FieldCtxPtr active() const { return backend == Backend::Numeric ? numeric : exact; }
};

Engine make_engine(int m, Backend backend = Backend::Exact, int kmax = 8,
                   std::complex<double> q_sample = {0.7303, 0.1159}, double tol = 1e-9,
                   const Conventions& conv = Conventions{});

// exact -> numeric transport of operators (for the numeric backend runs)
Scalar to_numeric(const Scalar& s, const FieldCtxPtr& nctx);
FFVO to_numeric(const FFVO& f, const FieldCtxPtr& nctx);

// Basis/mode-action cache: a versioned text serialization of the
// enumerated basis and single-slot mode action tables, keyed by a content
// hash of the generating parameters. A corrupt file is ignored and rebuilt.
struct BasisCache {
    std::string dir; // empty disables caching

    // returns the basis, from the cache when possible; writes the cache
    // (with mode actions for |k| <= kmodes) after a cold enumeration
    std::vector<BasisState> load_or_build(const FieldCtxPtr& ctx, int slots,
                                          const std::vector<int>& sectors, int N,
                                          int charge_window, int kmodes,
                                          int charge_denominator = 1, bool* warm = nullptr,
                                          std::vector<std::string>* warnings = nullptr);
};

std::string basis_cache_key(const FieldParams& fp, int slots, const std::vector<int>& sectors,
                            int N, int charge_window, int kmodes, int charge_denominator);

} // namespace qvertex
