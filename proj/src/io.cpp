#include "mpfd/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace mpfd {

namespace {
void append_g17(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}
}  // namespace

std::string diagnostics_csv_text(const std::vector<DiagnosticsRecord>& series) {
    std::string out = "t,kinetic_energy,enstrophy,solenoidal_dissipation,ke_normalized,diverged\n";
    for (const auto& r : series) {
        append_g17(out, r.t);
        out += ',';
        append_g17(out, r.kinetic_energy);
        out += ',';
        append_g17(out, r.enstrophy);
        out += ',';
        append_g17(out, r.eps_s);
        out += ',';
        append_g17(out, r.ke_normalized);
        out += ',';
        out += r.diverged ? '1' : '0';
        out += '\n';
    }
    return out;
}

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& series) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    const std::string text = diagnostics_csv_text(series);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw IoError("write failed: " + path);
}

std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open: " + path);
    std::string line;
    if (!std::getline(f, line)) throw IoError("empty CSV: " + path);
    if (line.rfind("t,kinetic_energy", 0) != 0)
        throw IoError("unexpected CSV header in " + path);
    std::vector<DiagnosticsRecord> out;
    int lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        DiagnosticsRecord r;
        int div = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%d", &r.t, &r.kinetic_energy,
                        &r.enstrophy, &r.eps_s, &r.ke_normalized, &div) != 6)
            throw IoError(path + ": malformed CSV row at line " + std::to_string(lineno));
        r.diverged = div != 0;
        out.push_back(r);
    }
    return out;
}

void write_snapshot(const std::string& path, const State& state) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    const GridSpec& g = state.q[0]->grid();
    const std::int32_t header[4] = {g.n, g.n, g.n, 5};
    f.write(reinterpret_cast<const char*>(header), sizeof header);
    std::vector<double> row(static_cast<std::size_t>(g.n));
    for (const Field* q : state.q) {
        for (int k = 0; k < g.n; ++k)
            for (int j = 0; j < g.n; ++j) {
                for (int i = 0; i < g.n; ++i) row[static_cast<std::size_t>(i)] = (*q)(i, j, k);
                f.write(reinterpret_cast<const char*>(row.data()),
                        static_cast<std::streamsize>(row.size() * sizeof(double)));
            }
    }
    if (!f) throw IoError("write failed: " + path);
}

}  // namespace mpfd
