#pragma once
// Line-based `key = value` run configuration ('#' comments, dotted keys for
// per-class precision overrides). Unknown keys are rejected.

#include <string>
#include <vector>

#include "mpfd/physics.hpp"
#include "mpfd/registry.hpp"
#include "mpfd/tgv.hpp"

namespace mpfd {

enum class CaseKind : std::uint8_t { Tgv = 0, Uniform = 1 };

struct SimConfig {
    CaseKind case_kind = CaseKind::Tgv;
    int n = 32;
    FlowParams flow;  // M=0.5, Re=800, Pr=0.72, gamma=1.4, viscous
    double dt = 0.005;
    double t_end = 20.0;
    long n_iterations = 4000;
    PrecisionConfig precision;  // default DP, strict
    std::string precision_name = "DP";
    std::string split_name = "Blaisdell";
    ResidualStrategy strategy = ResidualStrategy::Default;
    KeWeighting ke_weighting = KeWeighting::Plain;
    int diagnostics_interval = 100;
    std::string output = "diagnostics.csv";
    int threads = 1;
    std::vector<double> snapshot_times;
    std::string snapshot_path = "snapshot.bin";
    ProcessGrid procs{4, 1, 1};
    // Exchange counts per iteration for the communication model; negative
    // means "use the documented default" (q: 3; wk: 3 default / 0 storesome).
    double comm_q = -1.0, comm_rk = -1.0, comm_res = -1.0, comm_wk = -1.0;

    ExchangeCounts exchange_counts() const;
    SplitCoefficients split() const { return split_preset(split_name); }
};

/// Parse a configuration from text. Errors carry the line number and the
/// offending field name.
SimConfig load_config_text(const std::string& text);
SimConfig load_config_file(const std::string& path);

/// Axis lists for the accuracy sweep; every cell is compared against a DP
/// run at the identical (n, dt, M, split, strategy).
struct SweepSpec {
    SimConfig base;
    std::vector<double> dts;      // empty -> {base.dt}
    std::vector<double> machs;    // empty -> {base.flow.mach}
    std::vector<std::string> presets{"SP"};
    std::string output = "sweep.csv";
};

SweepSpec load_sweep_text(const std::string& text);
SweepSpec load_sweep_file(const std::string& path);

}  // namespace mpfd
