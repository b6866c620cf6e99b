#include "mpfd/registry.hpp"

namespace mpfd {

Field& FieldRegistry::allocate(const std::string& name, ArrayClass cls, const GridSpec& grid,
                               const PrecisionConfig& config) {
    if (find(name) != nullptr) throw RegistryError("duplicate field name '" + name + "'");
    fields_.push_back(std::make_unique<Field>(name, cls, config.resolve(cls, name), grid));
    return *fields_.back();
}

Field* FieldRegistry::find(const std::string& name) {
    for (auto& f : fields_)
        if (f->name() == name) return f.get();
    return nullptr;
}

const Field* FieldRegistry::find(const std::string& name) const {
    for (const auto& f : fields_)
        if (f->name() == name) return f.get();
    return nullptr;
}

MemoryReport memory_report(const FieldRegistry& reg) {
    MemoryReport r;
    for (std::size_t i = 0; i < reg.size(); ++i) {
        const Field& f = reg.at(i);
        const std::size_t bytes = f.grid().num_points() * byte_width(f.storage());
        auto& c = r.per_class[static_cast<std::size_t>(f.array_class())];
        ++c.count;
        c.bytes += bytes;
        r.total_bytes += bytes;
        r.baseline_b64_bytes += f.grid().num_points() * byte_width(PrecisionKind::B64);
    }
    r.gain = r.total_bytes == 0
                 ? 1.0
                 : static_cast<double>(r.baseline_b64_bytes) / static_cast<double>(r.total_bytes);
    return r;
}

CommVolumeReport comm_volume_report(const FieldRegistry& reg, const ProcessGrid& procs,
                                    const ExchangeCounts& exchanges) {
    constexpr int kExchangeDepth = 2;
    CommVolumeReport r;
    for (std::size_t i = 0; i < reg.size(); ++i) {
        const Field& f = reg.at(i);
        const int n = f.grid().n;
        if (procs.px < 1 || procs.py < 1 || procs.pz < 1)
            throw ConfigError("process grid dimensions must be >= 1");
        if (n % procs.px != 0 || n % procs.py != 0 || n % procs.pz != 0)
            throw ConfigError("grid n=" + std::to_string(n) +
                              " is not divisible by the process grid");
        const double lx = static_cast<double>(n) / procs.px;
        const double ly = static_cast<double>(n) / procs.py;
        const double lz = static_cast<double>(n) / procs.pz;
        double faces = 0.0;
        if (procs.px > 1) faces += ly * lz;
        if (procs.py > 1) faces += lx * lz;
        if (procs.pz > 1) faces += lx * ly;
        const double count = exchanges[static_cast<std::size_t>(f.array_class())];
        const double vol = 2.0 * kExchangeDepth * faces * byte_width(f.storage()) * count;
        r.per_class_bytes[static_cast<std::size_t>(f.array_class())] += vol;
        r.total_bytes += vol;
    }
    return r;
}

}  // namespace mpfd
