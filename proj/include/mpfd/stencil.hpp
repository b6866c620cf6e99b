#pragma once
// 4th-order central finite-difference operators on periodic fields.

#include <array>

#include "mpfd/field.hpp"

namespace mpfd {

enum class Dir : int { X = 0, Y = 1, Z = 2 };

/// Weights at offsets [-2..2]; the stated scale factors are applied as
/// multiplication by a reciprocal precomputed in binary64 and rounded to the
/// kernel compute precision.
struct StencilCoefficients {
    static constexpr std::array<double, 5> first{1.0, -8.0, 0.0, 8.0, -1.0};    // / (12 h)
    static constexpr std::array<double, 5> second{-1.0, 16.0, -30.0, 16.0, -1.0};  // / (12 h^2)
};

/// First derivative along d at every interior point, written into `out`
/// (rounded to out's storage). Requires fresh halos on f.
void ddx1(const Field& f, Dir d, PrecisionKind compute, EmulationMode mode, Field& out);

/// Second derivative along d.
void ddx2(const Field& f, Dir d, PrecisionKind compute, EmulationMode mode, Field& out);

/// Cross second derivative: first derivative along d2 of the first derivative
/// along d1, with the inner stencil evaluated over the extended region rather
/// than stored (requires halo depth >= 4).
void ddx1_nested(const Field& f, Dir d1, Dir d2, PrecisionKind compute, EmulationMode mode,
                 Field& out);

}  // namespace mpfd
