#pragma once
// Taylor-Green vortex initialization, physical diagnostics, and run-to-run
// comparison metrics.

#include <vector>

#include "mpfd/physics.hpp"
#include "mpfd/registry.hpp"

namespace mpfd {

/// Per-sample time series entry. Diagnostics are always computed in binary64
/// regardless of the run's precision configuration, so differences between
/// runs reflect solver-state differences only.
struct DiagnosticsRecord {
    double t = 0.0;
    double kinetic_energy = 0.0;
    double enstrophy = 0.0;
    double eps_s = 0.0;  // solenoidal dissipation, enstrophy / Re (1/V included)
    double ke_normalized = 0.0;
    bool diverged = false;
};

enum class KeWeighting : std::uint8_t {
    Plain = 0,    // K = (1/V) sum 1/2 (u.u) h^3, as the paper writes it
    Density = 1,  // rho-weighted variant for the inviscid conservation study
};

const char* to_string(KeWeighting w);
KeWeighting parse_ke_weighting(std::string_view s);  // "plain" | "density"

/// u = sin x cos y cos z, v = -cos x sin y cos z, w = 0,
/// p = 1/(gamma M^2) + (1/16)[cos 2x + cos 2y][2 + cos 2z], rho = gamma M^2 p,
/// rho E = p/(gamma-1) + rho(u^2+v^2)/2. Values are computed in binary64 and
/// rounded to each class's storage precision; Qt and R are zeroed.
/// Requires domain_length = 2 pi.
void init_tgv(State& state, const FlowParams& params);

/// Uniform quiescent state: rho = gamma M^2 p0, u = 0, p = p0 = 1/(gamma M^2).
void init_uniform(State& state, const FlowParams& params);

/// Diagnostics engine with its own binary64 scratch velocity fields (kept
/// outside the solver registry so the array census reflects the solver
/// alone).
class DiagnosticsComputer {
  public:
    explicit DiagnosticsComputer(const GridSpec& grid);

    /// K, enstrophy = (1/V) sum (w.w) h^3, eps_S = enstrophy / Re.
    DiagnosticsRecord compute(const State& state, const FlowParams& params, KeWeighting weighting,
                              double t, int threads = 1);

    /// Volume-averaged kinetic energy only.
    double kinetic_energy(const State& state, KeWeighting weighting, int threads = 1);

  private:
    GridSpec grid_;
    FieldRegistry scratch_;
    std::array<Field*, 3> vel_{};
};

struct ComparisonReport {
    std::vector<double> times;
    std::vector<double> abs_diff;  // per-sample |delta eps_S|
    double mean_abs_diff = 0.0;
    double max_abs_diff = 0.0;
};

struct ComparisonError : std::runtime_error {
    explicit ComparisonError(const std::string& what) : std::runtime_error(what) {}
};

/// Per-sample |delta eps_S| of candidate vs reference. The two series must
/// share an identical sample grid (ComparisonError otherwise).
ComparisonReport compare_series(const std::vector<DiagnosticsRecord>& candidate,
                                const std::vector<DiagnosticsRecord>& reference);

}  // namespace mpfd
