#pragma once
// Low-storage Runge-Kutta time advancement with per-class precision
// application:
//   Qt^i = A_i Qt^(i-1) + dt R^(i-1)      (computed at rk_arrays precision)
//   Q^i  = Q^(i-1) + B_i Qt^i             (computed at q_vector precision)
//   Q^(n+1) = Q^m after m substeps.

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "mpfd/physics.hpp"

namespace mpfd {

/// Williamson 3-stage low-storage scheme, 3rd order.
struct RKScheme {
    std::array<double, 3> a{0.0, -5.0 / 9.0, -153.0 / 128.0};
    std::array<double, 3> b{1.0 / 3.0, 15.0 / 16.0, 8.0 / 15.0};
    int substeps() const { return 3; }
};

struct StepConfig {
    double dt = 0.005;
    long n_iterations = 4000;
    int diagnostics_interval = 100;
};

/// One substep's updates. Pre: R freshly evaluated from the current Q.
/// A_i = 0 makes the Qt update independent of stale Qt content.
void rk_substep(int substep, State& state, const RKScheme& scheme, double dt,
                const PrecisionConfig& config, int threads = 1);

enum class RunStatus { Completed, Diverged };

struct AdvanceResult {
    RunStatus status = RunStatus::Completed;
    std::optional<DivergenceEvent> divergence;
    long iterations_run = 0;
    double wall_seconds = 0.0;
    double seconds_per_iteration = 0.0;
};

/// Called at t=0 and after every diagnostics_interval iterations (and once
/// more at the divergence point if the run dies).
using SampleFn = std::function<void(double t, bool diverged)>;
/// Called after the iteration whose end time first reaches each snapshot time.
using SnapshotFn = std::function<void(double t)>;

/// loop { per substep: residual -> rk_substep -> finite guard -> halo fill }.
/// Halos of Q must be fresh on entry (fill_state_halos does that).
AdvanceResult advance(State& state, ResidualEvaluator& eval, const RKScheme& scheme,
                      const StepConfig& step, const PrecisionConfig& config,
                      const SampleFn& sample, const SnapshotFn& snapshot = nullptr,
                      const std::vector<double>& snapshot_times = {}, int threads = 1);

void fill_state_halos(State& state);

}  // namespace mpfd
