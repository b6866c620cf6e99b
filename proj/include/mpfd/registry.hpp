#pragma once
// Field registry, array census, and the analytic memory / communication
// volume reports derived from it.

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "mpfd/field.hpp"

namespace mpfd {

/// Ordered collection of uniquely named fields. Mutated only during setup.
class FieldRegistry {
  public:
    /// Allocate a zero-initialized field whose storage precision is the
    /// config's resolution for (class, name). Duplicate names are an error.
    Field& allocate(const std::string& name, ArrayClass cls, const GridSpec& grid,
                    const PrecisionConfig& config);

    Field* find(const std::string& name);
    const Field* find(const std::string& name) const;

    std::size_t size() const { return fields_.size(); }
    Field& at(std::size_t i) { return *fields_[i]; }
    const Field& at(std::size_t i) const { return *fields_[i]; }

  private:
    std::vector<std::unique_ptr<Field>> fields_;
};

struct ClassCensus {
    int count = 0;
    std::size_t bytes = 0;
};

/// Memory census at the storage precisions plus the gain against an
/// all-binary64 baseline of the same field set (halo padding counted).
struct MemoryReport {
    std::array<ClassCensus, 5> per_class;  // indexed by ArrayClass
    std::size_t total_bytes = 0;
    std::size_t baseline_b64_bytes = 0;
    double gain = 1.0;
};

MemoryReport memory_report(const FieldRegistry& reg);

/// Analytic halo-exchange volume model. Per exchanged field:
///   volume = 2 sides * depth * (sum of face areas of partitioned dimensions)
///            * byte_width(storage) * exchanges_per_iteration(class)
/// with depth fixed at 2, the stencil half-width actually communicated.
struct CommVolumeReport {
    std::array<double, 5> per_class_bytes{};  // per process per iteration
    double total_bytes = 0.0;
};

struct ProcessGrid {
    int px = 1, py = 1, pz = 1;
};

/// Exchange counts per iteration, indexed by ArrayClass.
using ExchangeCounts = std::array<double, 5>;

CommVolumeReport comm_volume_report(const FieldRegistry& reg, const ProcessGrid& procs,
                                    const ExchangeCounts& exchanges);

}  // namespace mpfd
