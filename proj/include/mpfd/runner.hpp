#pragma once
// Orchestration: build a case from a SimConfig, advance it, collect the
// diagnostics series, and produce reports.

#include <iosfwd>
#include <string>
#include <vector>

#include "mpfd/config.hpp"
#include "mpfd/integrate.hpp"
#include "mpfd/io.hpp"

namespace mpfd {

struct RunResult {
    std::vector<DiagnosticsRecord> series;
    AdvanceResult outcome;
    MemoryReport memory;
    bool diverged() const { return outcome.status == RunStatus::Diverged; }
};

/// Run a simulation in memory (no files written).
RunResult run_simulation(const SimConfig& cfg);

/// Run, write the diagnostics CSV to cfg.output, print the summary.
/// Returns the process exit status (0 clean, 2 divergence).
int run_to_files(const SimConfig& cfg, std::ostream& log);

/// Memory and communication-volume report without running.
void print_report(const SimConfig& cfg, std::ostream& out);

struct SweepCell {
    double dt = 0.0;
    double mach = 0.0;
    std::string preset;
    double metric = 0.0;  // mean |delta eps_S| vs the DP reference; +inf on divergence
    bool diverged = false;
};

struct SweepResult {
    std::vector<SweepCell> cells;
    std::string matrix_csv;  // rows: dt, M; columns: presets
};

SweepResult run_sweep(const SweepSpec& spec, std::ostream& log);

}  // namespace mpfd
