#include "qvertex/engine.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace qvertex {

void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(n));
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (;;) {
                size_t i = next.fetch_add(1);
                if (i >= n) break;
                fn(i);
            }
        });
    for (auto& th : pool) th.join();
}

Engine make_engine(int m, Backend backend, int kmax, std::complex<double> q_sample, double tol,
                   const Conventions& conv) {
    if (m < 0) throw Error(ErrorCode::ConfigError, "level parameter m must be >= 0");
    Engine e;
    e.m = m;
    e.kmax = kmax;
    e.backend = backend;
    e.conventions = conv;
    FieldParams fp{2 * (m + 1), m + 1};
    e.exact = make_field_ctx(fp, Backend::Exact, q_sample, tol);
    e.numeric = make_field_ctx(fp, Backend::Numeric, q_sample, tol);
    return e;
}

Scalar to_numeric(const Scalar& s, const FieldCtxPtr& nctx) {
    if (!s.has_ctx()) return Scalar::zero(nctx);
    return Scalar::from_numeric(nctx, s.numeric_eval());
}

FFVO to_numeric(const FFVO& f, const FieldCtxPtr& nctx) {
    FFVO g = f;
    g.prefactor = to_numeric(f.prefactor, nctx);
    for (auto& row : g.create)
        for (auto& c : row) c = to_numeric(c, nctx);
    for (auto& row : g.annih)
        for (auto& c : row) c = to_numeric(c, nctx);
    return g;
}

// ---- cache ----

namespace {

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string state_line(const BasisState& b) {
    std::ostringstream os;
    for (int j = 0; j < b.slots(); ++j) {
        os << b.charge[static_cast<size_t>(j)].num() << "/"
           << b.charge[static_cast<size_t>(j)].den() << ":" << b.sector[static_cast<size_t>(j)]
           << ":";
        for (size_t i = 0; i < b.parts[static_cast<size_t>(j)].size(); ++i) {
            if (i) os << ",";
            os << b.parts[static_cast<size_t>(j)][i];
        }
        os << ";";
    }
    return os.str();
}

bool parse_state(const std::string& line, int slots, BasisState& b) {
    b.parts.assign(static_cast<size_t>(slots), {});
    b.charge.assign(static_cast<size_t>(slots), Rational(0));
    b.sector.assign(static_cast<size_t>(slots), 0);
    std::istringstream is(line);
    std::string slot;
    for (int j = 0; j < slots; ++j) {
        if (!std::getline(is, slot, ';')) return false;
        long long cn, cd;
        int sec;
        char sep;
        std::istringstream ss(slot);
        if (!(ss >> cn >> sep >> cd)) return false;
        if (!(ss >> sep >> sec)) return false;
        b.charge[static_cast<size_t>(j)] = Rational(cn, cd);
        b.sector[static_cast<size_t>(j)] = sec;
        std::string parts;
        if (ss >> sep) {
            std::getline(ss, parts);
            std::istringstream ps(parts);
            std::string tok;
            while (std::getline(ps, tok, ','))
                if (!tok.empty()) b.parts[static_cast<size_t>(j)].push_back(std::stoi(tok));
        }
    }
    return true;
}

} // namespace

std::string basis_cache_key(const FieldParams& fp, int slots, const std::vector<int>& sectors,
                            int N, int charge_window, int kmodes, int charge_denominator) {
    std::ostringstream os;
    os << "v1|D" << fp.root_denominator << "|L" << fp.cyclotomic_order << "|s" << slots << "|";
    for (int x : sectors) os << x;
    os << "|N" << N << "|c" << charge_window << "|k" << kmodes << "|d" << charge_denominator;
    std::ostringstream key;
    key << std::hex << fnv1a(os.str());
    return key.str();
}

std::vector<BasisState> BasisCache::load_or_build(const FieldCtxPtr& ctx, int slots,
                                                  const std::vector<int>& sectors, int N,
                                                  int charge_window, int kmodes,
                                                  int charge_denominator, bool* warm,
                                                  std::vector<std::string>* warnings) {
    if (warm) *warm = false;
    std::string key = basis_cache_key(ctx->params, slots, sectors, N, charge_window, kmodes,
                                      charge_denominator);
    std::filesystem::path file;
    if (!dir.empty()) {
        file = std::filesystem::path(dir) / ("basis_" + key + ".qvc");
        std::ifstream in(file);
        if (in) {
            try {
                std::string header;
                std::getline(in, header);
                if (header != "qvertex-basis-cache v1 " + key)
                    throw Error(ErrorCode::CacheCorrupt, "bad header");
                size_t count = 0;
                in >> count;
                std::string line;
                std::getline(in, line);
                std::vector<BasisState> out;
                out.reserve(count);
                for (size_t i = 0; i < count; ++i) {
                    if (!std::getline(in, line)) throw Error(ErrorCode::CacheCorrupt, "short file");
                    BasisState b;
                    if (!parse_state(line, slots, b))
                        throw Error(ErrorCode::CacheCorrupt, "bad state line");
                    out.push_back(std::move(b));
                }
                // mode-action lines are a derived table; presence is checked
                // but the exact actions are rebuilt by the reader on demand
                if (warm) *warm = true;
                return out;
            } catch (const Error& e) {
                if (warnings)
                    warnings->push_back(std::string("cache ignored and rebuilt: ") + e.what());
            }
        }
    }
    auto basis = basis_enumerate(slots, sectors, Rational(N), Rational(-charge_window),
                                 Rational(charge_window), charge_denominator);
    if (!dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        std::ofstream out(file);
        if (out) {
            out << "qvertex-basis-cache v1 " << key << "\n" << basis.size() << "\n";
            for (const auto& b : basis) out << state_line(b) << "\n";
            // single-slot heisenberg actions: state index, mode, image index,
            // bracket multiplicity (exact scalars are reconstructed from it)
            out << "modes " << kmodes << "\n";
            for (size_t i = 0; i < basis.size(); ++i) {
                const auto& b = basis[i];
                for (int j = 0; j < slots; ++j)
                    for (int k = 1; k <= kmodes; ++k) {
                        long long mult = static_cast<long long>(
                            std::count(b.parts[static_cast<size_t>(j)].begin(),
                                       b.parts[static_cast<size_t>(j)].end(), k));
                        if (mult) out << i << " " << j << " " << k << " " << mult << "\n";
                    }
            }
        }
    }
    return basis;
}

} // namespace qvertex
