#pragma once
// Floating-point precision kinds, bit-exact binary16 emulation, and the
// rounding policy applied inside numerical kernels.
//
// All field data is carried in binary64 variables that are constrained to the
// grid of their storage precision: every store rounds, every read widens
// exactly. Reduced-precision arithmetic is emulated, never delegated to
// hardware half support, so results are platform independent.

#include <bit>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#if defined(__F16C__)
#include <immintrin.h>
#endif

namespace mpfd {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};
struct RegistryError : std::runtime_error {
    explicit RegistryError(const std::string& what) : std::runtime_error(what) {}
};

/// IEEE 754 binary interchange formats supported for array storage.
enum class PrecisionKind : std::uint8_t { B16 = 0, B32 = 1, B64 = 2 };

constexpr int byte_width(PrecisionKind k) {
    switch (k) {
        case PrecisionKind::B16: return 2;
        case PrecisionKind::B32: return 4;
        case PrecisionKind::B64: return 8;
    }
    return 8;
}

/// Total order by precision: B16 < B32 < B64.
constexpr int precision_rank(PrecisionKind k) { return static_cast<int>(k); }

const char* to_string(PrecisionKind k);
PrecisionKind parse_precision_kind(std::string_view s);  // "B16" | "B32" | "B64"

/// Where reduced-precision rounding happens during kernel evaluation.
///  - Strict: every arithmetic operation's result is rounded to the kernel
///    compute precision (models native reduced-precision hardware).
///  - StoreRound: arithmetic is carried in binary64; rounding happens only
///    when a value is stored into a field.
/// In B64 compute precision the two are bitwise identical.
enum class EmulationMode : std::uint8_t { Strict = 0, StoreRound = 1 };

const char* to_string(EmulationMode m);
EmulationMode parse_emulation_mode(std::string_view s);  // "strict" | "storeround"

/// Storage classes at which precision is assigned.
enum class ArrayClass : std::uint8_t {
    QVector = 0,
    RkArrays = 1,
    Residuals = 2,
    WkArrays = 3,
    Diagnostics = 4,  // always binary64; never part of a preset
};

const char* to_string(ArrayClass c);

// ---------------------------------------------------------------------------
// binary16 codec (round-to-nearest-even; total functions)

/// Nearest IEEE 754 binary16 pattern to `value` under round-to-nearest-even,
/// rounded directly from binary64 (no intermediate format, so no double
/// rounding). Overflow beyond the rounding boundary (|x| >= 65520) gives
/// +-inf; values at or below half the smallest subnormal give signed zero;
/// NaN maps to a quiet NaN pattern (payload canonicalized, sign kept).
inline std::uint16_t encode_b16(double value) noexcept {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(value);
    const auto sign = static_cast<std::uint16_t>((bits >> 48) & 0x8000u);
    const int biased = static_cast<int>((bits >> 52) & 0x7FF);
    const std::uint64_t man = bits & 0xFFFFFFFFFFFFFull;

    if (biased == 0x7FF) {  // inf or NaN
        return man == 0 ? static_cast<std::uint16_t>(sign | 0x7C00u)
                        : static_cast<std::uint16_t>(sign | 0x7E00u);
    }
    if (biased == 0) return sign;  // binary64 zero/subnormal: far below half range

    const int e = biased - 1023;
    if (e >= -14) {
        if (e > 15) return static_cast<std::uint16_t>(sign | 0x7C00u);
        // Normal half candidate: round the 52-bit fraction to 10 bits.
        std::uint64_t m10 = man >> 42;
        const std::uint64_t rest = man & ((1ull << 42) - 1);
        const std::uint64_t half = 1ull << 41;
        if (rest > half || (rest == half && (m10 & 1))) ++m10;
        int ee = e;
        if (m10 == 0x400) {  // mantissa carry: 1.111..11 rounded up
            m10 = 0;
            ++ee;
        }
        if (ee > 15) return static_cast<std::uint16_t>(sign | 0x7C00u);
        return static_cast<std::uint16_t>(sign | ((ee + 15) << 10) | m10);
    }

    // Subnormal target: count in units of 2^-24 and round.
    const int shift = 42 + (-14 - e);
    if (shift >= 64) return sign;
    const std::uint64_t sig = (1ull << 52) | man;
    std::uint64_t keep = sig >> shift;
    const std::uint64_t rest = sig & ((1ull << shift) - 1);
    const std::uint64_t half = 1ull << (shift - 1);
    if (rest > half || (rest == half && (keep & 1))) ++keep;
    // keep == 0x400 lands on the smallest normal pattern, which is correct.
    return static_cast<std::uint16_t>(sign | keep);
}

/// Exact widening of a binary16 pattern to binary64.
inline double decode_b16(std::uint16_t h) noexcept {
    const std::uint64_t sign = static_cast<std::uint64_t>(h & 0x8000u) << 48;
    const int exp = (h >> 10) & 0x1F;
    const std::uint64_t man = h & 0x3FFu;
    std::uint64_t bits;
    if (exp == 0) {
        if (man == 0) {
            bits = sign;
        } else {  // subnormal: man * 2^-24, normalized into binary64
            const int top = 63 - std::countl_zero(man);
            bits = sign | (static_cast<std::uint64_t>(999 + top) << 52) |
                   ((man << (52 - top)) & 0xFFFFFFFFFFFFFull);
        }
    } else if (exp == 31) {
        bits = man == 0 ? sign | 0x7FF0000000000000ull
                        : sign | 0x7FF8000000000000ull | (man << 42);
    } else {
        bits = sign | (static_cast<std::uint64_t>(exp - 15 + 1023) << 52) | (man << 42);
    }
    return std::bit_cast<double>(bits);
}

// ---------------------------------------------------------------------------
// rounding to a precision grid

inline double round_b32(double x) noexcept {
    return static_cast<double>(static_cast<float>(x));
}

/// Correct RNE binary16 rounding of any binary64 value.
inline double round_b16(double x) noexcept { return decode_b16(encode_b16(x)); }

#if defined(__F16C__)
// Hardware float->binary16->float round trip. Only valid where the float
// input is the exactly rounded 24-bit result of an operation on binary16
// operands (the 2p+2 double-rounding bound); arbitrary binary64 values must
// go through round_b16 instead.
inline float half_round_f(float f) noexcept {
    return _mm_cvtss_f32(_mm_cvtph_ps(_mm_cvtps_ph(_mm_set_ss(f), _MM_FROUND_TO_NEAREST_INT)));
}
#else
inline float half_round_f(float f) noexcept {
    return static_cast<float>(round_b16(static_cast<double>(f)));
}
#endif

/// Round `value` onto the grid of `kind`, returned widened to binary64.
inline double round_to(PrecisionKind kind, double value) noexcept {
    switch (kind) {
        case PrecisionKind::B16: return round_b16(value);
        case PrecisionKind::B32: return round_b32(value);
        case PrecisionKind::B64: return value;
    }
    return value;
}

// ---------------------------------------------------------------------------
// precision configuration

/// Storage precision per array class, plus named per-array overrides and the
/// emulation mode used by kernels.
struct PrecisionConfig {
    PrecisionKind q_vector = PrecisionKind::B64;
    PrecisionKind rk_arrays = PrecisionKind::B64;
    PrecisionKind residuals = PrecisionKind::B64;
    PrecisionKind wk_arrays = PrecisionKind::B64;
    std::map<std::string, PrecisionKind> custom_overrides;
    EmulationMode emulation = EmulationMode::Strict;

    /// Storage precision for a named array of a given class. A custom
    /// override takes precedence over the class assignment; diagnostics
    /// arrays are pinned to binary64.
    PrecisionKind resolve(ArrayClass cls, const std::string& name) const;
};

/// Preset table. Accepted names: DP, SP, HP, SPDP, HPSP, SPDP-wk, SPDP-res,
/// HPSP-wk, HPSP-res. The unsuffixed mixed names lower both residuals and
/// work arrays ("-res+wk"); "-wk" lowers only work arrays, "-res" only
/// residuals. Unknown names raise ConfigError.
PrecisionConfig resolve_preset(std::string_view name);

/// One emulated scalar operation (op in {'+','-','*','/'}).
/// Strict: operands are snapped to `compute`, the result is rounded to
/// `compute`. StoreRound: plain binary64 arithmetic (rounding is deferred to
/// the field store). Infinities and NaNs propagate per IEEE 754.
double emulated_op(EmulationMode mode, PrecisionKind compute, char op, double a, double b);

}  // namespace mpfd
