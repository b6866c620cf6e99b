#pragma once
// Deterministic reductions: a fixed-shape pairwise tree whose shape depends
// only on the element count, never on the number of worker threads, so sums
// are bitwise reproducible across runs and across degrees of parallelism.

#include <span>
#include <vector>

#include "mpfd/field.hpp"

namespace mpfd {

/// Pairwise sum with a fixed recursive halving shape.
double pairwise_sum(std::span<const double> v);

/// Same tree as pairwise_sum evaluated over fixed-size chunks whose partial
/// results may be computed on worker threads; shape is unaffected by
/// `threads`.
double deterministic_sum(std::span<const double> v, int threads = 1);

/// Sum of interior values of a field (widened carriers), binary64
/// accumulation through the deterministic tree.
double reduce_sum(const Field& f, int threads = 1);

/// True when every interior value is finite. Order-independent.
bool interior_all_finite(const Field& f, int threads = 1);

/// Scratch buffer sized to a grid interior, for reduction integrands.
class InteriorBuffer {
  public:
    explicit InteriorBuffer(const GridSpec& g) : grid_(g), data_(g.interior_points()) {}
    double* data() { return data_.data(); }
    std::span<const double> span() const { return {data_.data(), data_.size()}; }
    std::size_t index(int i, int j, int k) const {
        const auto n = static_cast<std::size_t>(grid_.n);
        return (static_cast<std::size_t>(k) * n + static_cast<std::size_t>(j)) * n +
               static_cast<std::size_t>(i);
    }

  private:
    GridSpec grid_;
    std::vector<double> data_;
};

}  // namespace mpfd
