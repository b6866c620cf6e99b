#include "mpfd/precision.hpp"

#include <cmath>
#include <limits>

namespace mpfd {

const char* to_string(PrecisionKind k) {
    switch (k) {
        case PrecisionKind::B16: return "B16";
        case PrecisionKind::B32: return "B32";
        case PrecisionKind::B64: return "B64";
    }
    return "?";
}

PrecisionKind parse_precision_kind(std::string_view s) {
    if (s == "B16") return PrecisionKind::B16;
    if (s == "B32") return PrecisionKind::B32;
    if (s == "B64") return PrecisionKind::B64;
    throw ConfigError("unknown precision kind '" + std::string(s) + "' (expected B16, B32 or B64)");
}

const char* to_string(EmulationMode m) {
    return m == EmulationMode::Strict ? "strict" : "storeround";
}

EmulationMode parse_emulation_mode(std::string_view s) {
    if (s == "strict") return EmulationMode::Strict;
    if (s == "storeround") return EmulationMode::StoreRound;
    throw ConfigError("unknown emulation mode '" + std::string(s) +
                      "' (expected strict or storeround)");
}

const char* to_string(ArrayClass c) {
    switch (c) {
        case ArrayClass::QVector: return "q_vector";
        case ArrayClass::RkArrays: return "rk_arrays";
        case ArrayClass::Residuals: return "residuals";
        case ArrayClass::WkArrays: return "wk_arrays";
        case ArrayClass::Diagnostics: return "diagnostics";
    }
    return "?";
}

PrecisionKind PrecisionConfig::resolve(ArrayClass cls, const std::string& name) const {
    if (auto it = custom_overrides.find(name); it != custom_overrides.end()) return it->second;
    switch (cls) {
        case ArrayClass::QVector: return q_vector;
        case ArrayClass::RkArrays: return rk_arrays;
        case ArrayClass::Residuals: return residuals;
        case ArrayClass::WkArrays: return wk_arrays;
        case ArrayClass::Diagnostics: return PrecisionKind::B64;
    }
    return PrecisionKind::B64;
}

PrecisionConfig resolve_preset(std::string_view name) {
    using K = PrecisionKind;
    PrecisionConfig c;
    const auto set = [&c](K q, K rk, K res, K wk) {
        c.q_vector = q;
        c.rk_arrays = rk;
        c.residuals = res;
        c.wk_arrays = wk;
    };
    if (name == "DP")
        set(K::B64, K::B64, K::B64, K::B64);
    else if (name == "SP")
        set(K::B32, K::B32, K::B32, K::B32);
    else if (name == "HP")
        set(K::B16, K::B16, K::B16, K::B16);
    else if (name == "SPDP")
        set(K::B64, K::B64, K::B32, K::B32);
    else if (name == "SPDP-wk")
        set(K::B64, K::B64, K::B64, K::B32);
    else if (name == "SPDP-res")
        set(K::B64, K::B64, K::B32, K::B64);
    else if (name == "HPSP")
        set(K::B32, K::B32, K::B16, K::B16);
    else if (name == "HPSP-wk")
        set(K::B32, K::B32, K::B32, K::B16);
    else if (name == "HPSP-res")
        set(K::B32, K::B32, K::B16, K::B32);
    else
        throw ConfigError("unknown precision preset '" + std::string(name) + "'");
    return c;
}

double emulated_op(EmulationMode mode, PrecisionKind compute, char op, double a, double b) {
    if (mode == EmulationMode::Strict) {
        a = round_to(compute, a);
        b = round_to(compute, b);
    }
    double r;
    switch (op) {
        case '+': r = a + b; break;
        case '-': r = a - b; break;
        case '*': r = a * b; break;
        case '/': r = a / b; break;
        default: throw std::invalid_argument("emulated_op: op must be one of + - * /");
    }
    return mode == EmulationMode::Strict ? round_to(compute, r) : r;
}

}  // namespace mpfd
