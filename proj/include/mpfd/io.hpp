#pragma once
// Diagnostics CSV and raw field snapshot formats.

#include <string>
#include <vector>

#include "mpfd/physics.hpp"
#include "mpfd/tgv.hpp"

namespace mpfd {

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Header: t,kinetic_energy,enstrophy,solenoidal_dissipation,ke_normalized,diverged
/// Values are printed with round-trip precision, so output is bitwise
/// deterministic for bitwise-identical series.
void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& series);
std::string diagnostics_csv_text(const std::vector<DiagnosticsRecord>& series);
std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::string& path);

/// Raw snapshot: little-endian, 4 int32 header (n, n, n, field count), then
/// each field's interior in x-fastest order, widened to binary64.
void write_snapshot(const std::string& path, const State& state);

}  // namespace mpfd
