#include "mpfd/reduce.hpp"

#include <cmath>

#include "mpfd/parallel.hpp"

namespace mpfd {

namespace {
constexpr std::size_t kLeaf = 32;
constexpr std::size_t kChunk = 4096;
}  // namespace

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= kLeaf) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double deterministic_sum(std::span<const double> v, int threads) {
    if (v.size() <= kChunk || threads <= 1) return pairwise_sum(v);
    const std::size_t nchunks = (v.size() + kChunk - 1) / kChunk;
    std::vector<double> partials(nchunks);
    parallel_slabs(static_cast<int>(nchunks), threads, [&](int c0, int c1) {
        for (int c = c0; c < c1; ++c) {
            const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
            const std::size_t len = std::min(kChunk, v.size() - lo);
            partials[static_cast<std::size_t>(c)] = pairwise_sum(v.subspan(lo, len));
        }
    });
    return pairwise_sum(partials);
}

double reduce_sum(const Field& f, int threads) {
    const GridSpec& g = f.grid();
    InteriorBuffer buf(g);
    double* out = buf.data();
    const double* src = f.origin();
    const auto sx = f.stride(0);
    const auto sy = f.stride(1);
    const auto sz = f.stride(2);
    parallel_slabs(g.n, threads, [&](int k0, int k1) {
        for (int k = k0; k < k1; ++k)
            for (int j = 0; j < g.n; ++j) {
                const double* row = src + k * sz + j * sy;
                double* dst = out + buf.index(0, j, k);
                for (int i = 0; i < g.n; ++i) dst[i] = row[i * sx];
            }
    });
    return deterministic_sum(buf.span(), threads);
}

bool interior_all_finite(const Field& f, int threads) {
    const GridSpec& g = f.grid();
    const double* src = f.origin();
    const auto sy = f.stride(1);
    const auto sz = f.stride(2);
    std::vector<char> ok(static_cast<std::size_t>(g.n), 1);
    parallel_slabs(g.n, threads, [&](int k0, int k1) {
        for (int k = k0; k < k1; ++k) {
            bool fin = true;
            for (int j = 0; j < g.n && fin; ++j) {
                const double* row = src + k * sz + j * sy;
                for (int i = 0; i < g.n; ++i) {
                    if (!std::isfinite(row[i])) {
                        fin = false;
                        break;
                    }
                }
            }
            ok[static_cast<std::size_t>(k)] = fin ? 1 : 0;
        }
    });
    for (char c : ok)
        if (!c) return false;
    return true;
}

}  // namespace mpfd
