// mpfd command-line harness: run simulations, compare diagnostics series,
// sweep parameters, and print memory/communication reports.
//
// Exit status: 0 clean completion, 1 configuration or comparison error,
// 2 numerical divergence.

#include <cstdio>
#include <cstring>
#include <iostream>

#include "mpfd/runner.hpp"

namespace {

void usage(std::ostream& out) {
    out << "usage:\n"
           "  mpfd run <config>          run a simulation, write its diagnostics CSV\n"
           "  mpfd compare <a.csv> <b.csv>   per-sample |delta eps_S| of a vs b\n"
           "  mpfd sweep <spec>          accuracy sweep over dt / M / precision presets\n"
           "  mpfd report <config>       memory + communication model, no run\n";
}

int cmd_run(const char* path) {
    const mpfd::SimConfig cfg = mpfd::load_config_file(path);
    return mpfd::run_to_files(cfg, std::cout);
}

int cmd_compare(const char* a, const char* b) {
    const auto ca = mpfd::read_diagnostics_csv(a);
    const auto cb = mpfd::read_diagnostics_csv(b);
    const mpfd::ComparisonReport rep = mpfd::compare_series(ca, cb);
    std::printf("t,abs_diff_eps_s\n");
    for (std::size_t i = 0; i < rep.times.size(); ++i)
        std::printf("%.17g,%.17g\n", rep.times[i], rep.abs_diff[i]);
    std::printf("mean_abs_diff=%.17g\n", rep.mean_abs_diff);
    std::printf("max_abs_diff=%.17g\n", rep.max_abs_diff);
    return 0;
}

int cmd_sweep(const char* path) {
    const mpfd::SweepSpec spec = mpfd::load_sweep_file(path);
    const mpfd::SweepResult res = mpfd::run_sweep(spec, std::cout);
    std::cout << res.matrix_csv;
    if (!spec.output.empty()) std::cout << "wrote " << spec.output << "\n";
    return 0;
}

int cmd_report(const char* path) {
    const mpfd::SimConfig cfg = mpfd::load_config_file(path);
    mpfd::print_report(cfg, std::cout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        usage(std::cerr);
        return 1;
    }
    const std::string cmd = argv[1];
    try {
        if (cmd == "run" && argc == 3) return cmd_run(argv[2]);
        if (cmd == "compare" && argc == 4) return cmd_compare(argv[2], argv[3]);
        if (cmd == "sweep" && argc == 3) return cmd_sweep(argv[2]);
        if (cmd == "report" && argc == 3) return cmd_report(argv[2]);
        usage(std::cerr);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
