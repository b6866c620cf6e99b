#pragma once
// Periodic structured cubic grid and precision-tagged 3D scalar fields.

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "mpfd/precision.hpp"

namespace mpfd {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;

/// Uniform cubic grid with points at x_i = i*h, i in [0,n); the duplicate
/// periodic endpoint is excluded. Halo depth 4 covers nested first-derivative
/// stencils evaluated in a single pass.
struct GridSpec {
    int n = 32;
    double domain_length = kTwoPi;

    static constexpr int halo_depth = 4;

    GridSpec() = default;
    GridSpec(int n_, double length = kTwoPi) : n(n_), domain_length(length) {
        if (n < 5) throw ConfigError("GridSpec: n must be >= 5");
        if (!(domain_length > 0.0)) throw ConfigError("GridSpec: domain_length must be positive");
    }

    double spacing() const { return domain_length / n; }
    double volume() const { return domain_length * domain_length * domain_length; }
    int ext() const { return n + 2 * halo_depth; }
    std::size_t num_points() const {
        const auto e = static_cast<std::size_t>(ext());
        return e * e * e;
    }
    std::size_t interior_points() const {
        const auto m = static_cast<std::size_t>(n);
        return m * m * m;
    }

    /// Flat index, x fastest. i/j/k may range over [-halo_depth, n+halo_depth).
    std::size_t index(int i, int j, int k) const {
        const auto e = static_cast<std::size_t>(ext());
        return (static_cast<std::size_t>(k + halo_depth) * e +
                static_cast<std::size_t>(j + halo_depth)) *
                   e +
               static_cast<std::size_t>(i + halo_depth);
    }

    bool operator==(const GridSpec& o) const {
        return n == o.n && domain_length == o.domain_length;
    }
};

/// One 3D scalar array with halo padding. Data is stored in binary64 carriers
/// constrained to the grid of the storage precision: set() rounds, reads
/// widen exactly. Interior cells are authoritative; halos are derived by
/// periodic copy and never written by kernels.
class Field {
  public:
    Field(std::string name, ArrayClass cls, PrecisionKind storage, const GridSpec& grid)
        : name_(std::move(name)),
          class_(cls),
          storage_(storage),
          grid_(grid),
          data_(grid.num_points(), 0.0) {}

    const std::string& name() const { return name_; }
    ArrayClass array_class() const { return class_; }
    PrecisionKind storage() const { return storage_; }
    const GridSpec& grid() const { return grid_; }

    double operator()(int i, int j, int k) const { return data_[grid_.index(i, j, k)]; }
    void set(int i, int j, int k, double v) {
        data_[grid_.index(i, j, k)] = round_to(storage_, v);
        ++interior_version_;
    }

    /// Raw carrier access for kernels. A kernel that writes through this
    /// pointer must round each stored value itself and then call
    /// note_interior_write().
    double* raw() { return data_.data(); }
    const double* raw() const { return data_.data(); }
    /// Pointer positioned at interior origin (0,0,0).
    const double* origin() const { return data_.data() + grid_.index(0, 0, 0); }
    double* origin() { return data_.data() + grid_.index(0, 0, 0); }

    std::ptrdiff_t stride(int dim) const {
        const auto e = static_cast<std::ptrdiff_t>(grid_.ext());
        return dim == 0 ? 1 : dim == 1 ? e : e * e;
    }

    void note_interior_write() { ++interior_version_; }
    void note_halos_filled() { halo_version_ = interior_version_; }
    bool halos_fresh() const { return halo_version_ == interior_version_; }

    void fill(double v) {
        const double r = round_to(storage_, v);
        for (auto& x : data_) x = r;
        ++interior_version_;
        halo_version_ = interior_version_;  // uniform fill covers halos too
    }

  private:
    std::string name_;
    ArrayClass class_;
    PrecisionKind storage_;
    GridSpec grid_;
    std::vector<double> data_;
    std::uint64_t interior_version_ = 1;
    std::uint64_t halo_version_ = 0;
};

/// Copy periodic wraps into the halo layers (all three dimensions, corners by
/// composition): cell -k mirrors n-k, cell n-1+k mirrors k-1, k = 1..halo.
void fill_halos_periodic(Field& f);

}  // namespace mpfd
