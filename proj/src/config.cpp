#include "mpfd/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace mpfd {

ExchangeCounts SimConfig::exchange_counts() const {
    ExchangeCounts c{};
    c[static_cast<std::size_t>(ArrayClass::QVector)] = comm_q >= 0 ? comm_q : 3.0;
    c[static_cast<std::size_t>(ArrayClass::RkArrays)] = comm_rk >= 0 ? comm_rk : 0.0;
    c[static_cast<std::size_t>(ArrayClass::Residuals)] = comm_res >= 0 ? comm_res : 0.0;
    c[static_cast<std::size_t>(ArrayClass::WkArrays)] =
        comm_wk >= 0 ? comm_wk : (strategy == ResidualStrategy::Default ? 3.0 : 0.0);
    return c;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct KV {
    std::string key, value;
    int line;
};

std::vector<KV> parse_lines(const std::string& text) {
    std::vector<KV> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        out.push_back({key, value, lineno});
    }
    return out;
}

double parse_double(const KV& kv) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(kv.value, &pos);
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(kv.line) + ": field '" + kv.key +
                          "' expects a number, got '" + kv.value + "'");
    }
    if (pos != kv.value.size())
        throw ConfigError("line " + std::to_string(kv.line) + ": field '" + kv.key +
                          "' has trailing characters in '" + kv.value + "'");
    return v;
}

long parse_long(const KV& kv) {
    const double v = parse_double(kv);
    if (v != std::floor(v))
        throw ConfigError("line " + std::to_string(kv.line) + ": field '" + kv.key +
                          "' expects an integer");
    return static_cast<long>(v);
}

bool parse_bool(const KV& kv) {
    if (kv.value == "true" || kv.value == "1") return true;
    if (kv.value == "false" || kv.value == "0") return false;
    throw ConfigError("line " + std::to_string(kv.line) + ": field '" + kv.key +
                      "' expects true or false");
}

std::vector<double> parse_list(const KV& kv) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(kv.value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_double({kv.key, item, kv.line}));
    }
    if (out.empty())
        throw ConfigError("line " + std::to_string(kv.line) + ": field '" + kv.key +
                          "' expects a comma-separated list");
    return out;
}

std::vector<std::string> parse_name_list(const KV& kv) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(kv.value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    if (out.empty())
        throw ConfigError("line " + std::to_string(kv.line) + ": field '" + kv.key +
                          "' expects a comma-separated list");
    return out;
}

ConfigError field_error(const KV& kv, const std::string& what) {
    return ConfigError("line " + std::to_string(kv.line) + ": field '" + kv.key + "': " + what);
}

/// Applies one key; returns false if the key is not recognized here.
bool apply_sim_key(SimConfig& c, const KV& kv, bool& saw_t_end, bool& saw_iters,
                   bool& saw_diag_interval) {
    const std::string& k = kv.key;
    try {
        if (k == "case") {
            if (kv.value == "tgv")
                c.case_kind = CaseKind::Tgv;
            else if (kv.value == "uniform")
                c.case_kind = CaseKind::Uniform;
            else
                throw field_error(kv, "expected tgv or uniform");
        } else if (k == "n") {
            c.n = static_cast<int>(parse_long(kv));
            if (c.n < 5) throw field_error(kv, "n must be >= 5");
        } else if (k == "M") {
            c.flow.mach = parse_double(kv);
        } else if (k == "Re") {
            c.flow.reynolds = parse_double(kv);
        } else if (k == "Pr") {
            c.flow.prandtl = parse_double(kv);
        } else if (k == "gamma") {
            c.flow.gamma = parse_double(kv);
        } else if (k == "viscous") {
            c.flow.viscous = parse_bool(kv);
        } else if (k == "dt") {
            c.dt = parse_double(kv);
            if (!(c.dt > 0)) throw field_error(kv, "dt must be positive");
        } else if (k == "t_end") {
            c.t_end = parse_double(kv);
            saw_t_end = true;
        } else if (k == "n_iterations") {
            c.n_iterations = parse_long(kv);
            saw_iters = true;
        } else if (k == "precision") {
            c.precision = resolve_preset(kv.value);  // keeps default emulation
            c.precision_name = kv.value;
        } else if (k == "precision.q_vector") {
            c.precision.q_vector = parse_precision_kind(kv.value);
            c.precision_name = "custom";
        } else if (k == "precision.rk_arrays") {
            c.precision.rk_arrays = parse_precision_kind(kv.value);
            c.precision_name = "custom";
        } else if (k == "precision.residuals") {
            c.precision.residuals = parse_precision_kind(kv.value);
            c.precision_name = "custom";
        } else if (k == "precision.wk_arrays") {
            c.precision.wk_arrays = parse_precision_kind(kv.value);
            c.precision_name = "custom";
        } else if (k.rfind("precision.custom.", 0) == 0) {
            const std::string name = k.substr(std::string("precision.custom.").size());
            if (name.empty()) throw field_error(kv, "missing array name");
            c.precision.custom_overrides[name] = parse_precision_kind(kv.value);
        } else if (k == "emulation") {
            c.precision.emulation = parse_emulation_mode(kv.value);
        } else if (k == "split") {
            split_preset(kv.value);  // validate now
            c.split_name = kv.value;
        } else if (k == "strategy") {
            c.strategy = parse_strategy(kv.value);
        } else if (k == "ke_weighting") {
            c.ke_weighting = parse_ke_weighting(kv.value);
        } else if (k == "diagnostics_interval") {
            c.diagnostics_interval = static_cast<int>(parse_long(kv));
            if (c.diagnostics_interval < 1) throw field_error(kv, "must be >= 1");
            saw_diag_interval = true;
        } else if (k == "output") {
            c.output = kv.value;
        } else if (k == "threads") {
            c.threads = static_cast<int>(parse_long(kv));
            if (c.threads < 1) throw field_error(kv, "threads must be >= 1");
        } else if (k == "snapshot_times") {
            c.snapshot_times = parse_list(kv);
        } else if (k == "snapshot_path") {
            c.snapshot_path = kv.value;
        } else if (k == "procs") {
            const auto v = parse_name_list(kv);
            if (v.size() != 3) throw field_error(kv, "expected px,py,pz");
            c.procs = {std::stoi(v[0]), std::stoi(v[1]), std::stoi(v[2])};
        } else if (k == "comm.q_vector") {
            c.comm_q = parse_double(kv);
        } else if (k == "comm.rk_arrays") {
            c.comm_rk = parse_double(kv);
        } else if (k == "comm.residuals") {
            c.comm_res = parse_double(kv);
        } else if (k == "comm.wk_arrays") {
            c.comm_wk = parse_double(kv);
        } else {
            return false;
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw field_error(kv, e.what());
    }
    return true;
}

void finalize_sim(SimConfig& c, bool saw_t_end, bool saw_iters, bool saw_diag_interval) {
    c.flow.validate();
    if (saw_iters && saw_t_end) {
        if (std::abs(static_cast<double>(c.n_iterations) * c.dt - c.t_end) > c.dt)
            throw ConfigError("field 'n_iterations': n_iterations*dt = " +
                              std::to_string(c.n_iterations * c.dt) +
                              " disagrees with t_end = " + std::to_string(c.t_end) +
                              " by more than one dt");
    } else if (saw_iters) {
        c.t_end = static_cast<double>(c.n_iterations) * c.dt;
    } else {
        c.n_iterations = std::lround(c.t_end / c.dt);
    }
    if (c.n_iterations < 0) throw ConfigError("field 'n_iterations': must be >= 0");
    if (!saw_diag_interval) {
        const long iv = std::lround(0.5 / c.dt);
        c.diagnostics_interval = static_cast<int>(std::max(1l, iv));
    }
}

}  // namespace

SimConfig load_config_text(const std::string& text) {
    SimConfig c;
    bool saw_t_end = false, saw_iters = false, saw_diag = false;
    for (const KV& kv : parse_lines(text)) {
        if (!apply_sim_key(c, kv, saw_t_end, saw_iters, saw_diag))
            throw ConfigError("line " + std::to_string(kv.line) + ": unknown key '" + kv.key +
                              "'");
    }
    finalize_sim(c, saw_t_end, saw_iters, saw_diag);
    return c;
}

SimConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_config_text(ss.str());
}

SweepSpec load_sweep_text(const std::string& text) {
    SweepSpec s;
    bool saw_t_end = false, saw_iters = false, saw_diag = false;
    bool saw_presets = false;
    for (const KV& kv : parse_lines(text)) {
        if (kv.key == "sweep.dt") {
            s.dts = parse_list(kv);
        } else if (kv.key == "sweep.M") {
            s.machs = parse_list(kv);
        } else if (kv.key == "sweep.presets") {
            s.presets = parse_name_list(kv);
            for (const auto& p : s.presets) resolve_preset(p);  // validate
            saw_presets = true;
        } else if (kv.key == "sweep.output") {
            s.output = kv.value;
        } else if (!apply_sim_key(s.base, kv, saw_t_end, saw_iters, saw_diag)) {
            throw ConfigError("line " + std::to_string(kv.line) + ": unknown key '" + kv.key +
                              "'");
        }
    }
    if (!saw_presets) throw ConfigError("sweep spec: missing 'sweep.presets'");
    finalize_sim(s.base, saw_t_end, saw_iters, saw_diag);
    return s;
}

SweepSpec load_sweep_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open sweep spec file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_sweep_text(ss.str());
}

}  // namespace mpfd
