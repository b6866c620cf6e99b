#include "mpfd/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

namespace mpfd {

RunResult run_simulation(const SimConfig& cfg) {
    const GridSpec grid(cfg.n);
    SolverFields fields = make_solver_fields(grid, cfg.precision, cfg.strategy);
    State& st = fields.state;
    if (cfg.case_kind == CaseKind::Tgv)
        init_tgv(st, cfg.flow);
    else
        init_uniform(st, cfg.flow);

    ResidualEvaluator eval(fields, cfg.flow, cfg.split(), cfg.precision);
    DiagnosticsComputer diag(grid);

    RunResult res;
    res.memory = memory_report(fields.registry);

    double k0 = 0.0;
    const SampleFn sample = [&](double t, bool diverged) {
        DiagnosticsRecord r = diag.compute(st, cfg.flow, cfg.ke_weighting, t, cfg.threads);
        r.diverged = diverged;
        if (res.series.empty()) k0 = r.kinetic_energy;
        r.ke_normalized = k0 != 0.0 ? r.kinetic_energy / k0 : 0.0;
        res.series.push_back(r);
    };
    const SnapshotFn snapshot = [&](double t) {
        char suffix[32];
        std::snprintf(suffix, sizeof suffix, "_t%.6g.bin", t);
        std::string path = cfg.snapshot_path;
        const auto dot = path.rfind(".bin");
        if (dot != std::string::npos && dot == path.size() - 4) path.resize(dot);
        write_snapshot(path + suffix, st);
    };

    StepConfig step{cfg.dt, cfg.n_iterations, cfg.diagnostics_interval};
    res.outcome = advance(st, eval, RKScheme{}, step, cfg.precision, sample,
                          cfg.snapshot_times.empty() ? SnapshotFn{} : snapshot,
                          cfg.snapshot_times, cfg.threads);
    return res;
}

namespace {

void print_memory(const MemoryReport& m, std::ostream& out) {
    static const char* names[5] = {"q_vector", "rk_arrays", "residuals", "wk_arrays",
                                   "diagnostics"};
    out << "memory census (analytic, halos included):\n";
    for (int c = 0; c < 5; ++c) {
        const auto& cc = m.per_class[static_cast<std::size_t>(c)];
        if (cc.count == 0) continue;
        out << "  " << names[c] << ": " << cc.count << " fields, " << cc.bytes << " bytes\n";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", m.gain);
    out << "  total: " << m.total_bytes << " bytes (all-B64 baseline " << m.baseline_b64_bytes
        << " bytes, gain " << buf << "x)\n";
}

}  // namespace

int run_to_files(const SimConfig& cfg, std::ostream& log) {
    RunResult res = run_simulation(cfg);
    write_diagnostics_csv(cfg.output, res.series);
    log << "wrote " << cfg.output << " (" << res.series.size() << " samples)\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", res.outcome.seconds_per_iteration);
    log << "iterations: " << res.outcome.iterations_run << ", wall time "
        << res.outcome.wall_seconds << " s (" << buf << " s/iteration)\n";
    print_memory(res.memory, log);
    if (res.diverged()) {
        const auto& ev = *res.outcome.divergence;
        log << "DIVERGED at t = " << ev.time << " (iteration " << ev.iteration << ", substep "
            << ev.substep << "): " << ev.what << " first at (" << ev.i << "," << ev.j << ","
            << ev.k << ")\n";
        return 2;
    }
    log << "completed to t = " << static_cast<double>(res.outcome.iterations_run) * cfg.dt
        << "\n";
    return 0;
}

void print_report(const SimConfig& cfg, std::ostream& out) {
    const GridSpec grid(cfg.n);
    SolverFields fields = make_solver_fields(grid, cfg.precision, cfg.strategy);
    print_memory(memory_report(fields.registry), out);
    const CommVolumeReport comm =
        comm_volume_report(fields.registry, cfg.procs, cfg.exchange_counts());
    static const char* names[5] = {"q_vector", "rk_arrays", "residuals", "wk_arrays",
                                   "diagnostics"};
    out << "modeled halo-exchange volume per process per iteration (procs " << cfg.procs.px << "x"
        << cfg.procs.py << "x" << cfg.procs.pz << "):\n";
    for (int c = 0; c < 5; ++c) {
        const double b = comm.per_class_bytes[static_cast<std::size_t>(c)];
        if (b == 0.0) continue;
        out << "  " << names[c] << ": " << b << " bytes\n";
    }
    out << "  total: " << comm.total_bytes << " bytes\n";
}

SweepResult run_sweep(const SweepSpec& spec, std::ostream& log) {
    SweepResult result;
    const std::vector<double> dts = spec.dts.empty() ? std::vector<double>{spec.base.dt} : spec.dts;
    const std::vector<double> machs =
        spec.machs.empty() ? std::vector<double>{spec.base.flow.mach} : spec.machs;

    std::string csv = "dt,M";
    for (const auto& p : spec.presets) csv += "," + p;
    csv += "\n";

    for (double dt : dts) {
        for (double mach : machs) {
            SimConfig cell = spec.base;
            cell.dt = dt;
            cell.flow.mach = mach;
            cell.n_iterations = std::lround(cell.t_end / dt);
            cell.diagnostics_interval =
                static_cast<int>(std::max(1l, std::lround(0.5 / dt)));

            SimConfig ref = cell;
            ref.precision = resolve_preset("DP");
            ref.precision.emulation = cell.precision.emulation;
            ref.precision_name = "DP";
            log << "sweep: DP reference at dt=" << dt << " M=" << mach << "\n";
            const RunResult ref_run = run_simulation(ref);

            char num[32];
            std::snprintf(num, sizeof num, "%.17g", dt);
            csv += num;
            std::snprintf(num, sizeof num, ",%.17g", mach);
            csv += num;

            for (const auto& preset : spec.presets) {
                SimConfig cand = cell;
                cand.precision = resolve_preset(preset);
                cand.precision.emulation = cell.precision.emulation;
                cand.precision_name = preset;
                log << "sweep: " << preset << " at dt=" << dt << " M=" << mach << "\n";
                const RunResult cand_run = run_simulation(cand);

                SweepCell sc;
                sc.dt = dt;
                sc.mach = mach;
                sc.preset = preset;
                if (cand_run.diverged() || ref_run.diverged()) {
                    sc.diverged = true;
                    sc.metric = std::numeric_limits<double>::infinity();
                } else {
                    sc.metric =
                        compare_series(cand_run.series, ref_run.series).mean_abs_diff;
                }
                result.cells.push_back(sc);
                std::snprintf(num, sizeof num, ",%.17g", sc.metric);
                csv += sc.diverged ? ",inf" : num;
            }
            csv += "\n";
        }
    }
    result.matrix_csv = csv;
    if (!spec.output.empty()) {
        std::ofstream f(spec.output, std::ios::binary);
        if (!f) throw IoError("cannot open for writing: " + spec.output);
        f << csv;
    }
    return result;
}

}  // namespace mpfd
