#pragma once
// Arithmetic and store policies shared by all numerical kernels.
//
// A kernel computes at the storage precision of its output field. In Strict
// mode every operation result is rounded to that precision and inputs from
// higher-precision fields are rounded on load; in StoreRound mode arithmetic
// is binary64 and only stores round. Strict reduced-precision arithmetic is
// realized with float hardware: operands sit exactly on the target grid, and
// 24 significand bits meet the 2p+2 double-rounding bound for binary16, so
// the emulated results are the correctly rounded ones.

#include <cstddef>

#include "mpfd/field.hpp"

namespace mpfd {

struct NativeArith {
    static constexpr PrecisionKind compute = PrecisionKind::B64;
    static double add(double a, double b) { return a + b; }
    static double sub(double a, double b) { return a - b; }
    static double mul(double a, double b) { return a * b; }
    static double div(double a, double b) { return a / b; }
    static double cvt(double x) { return x; }
};

struct StrictArith32 {
    static constexpr PrecisionKind compute = PrecisionKind::B32;
    static double add(double a, double b) {
        return static_cast<double>(static_cast<float>(a) + static_cast<float>(b));
    }
    static double sub(double a, double b) {
        return static_cast<double>(static_cast<float>(a) - static_cast<float>(b));
    }
    static double mul(double a, double b) {
        return static_cast<double>(static_cast<float>(a) * static_cast<float>(b));
    }
    static double div(double a, double b) {
        return static_cast<double>(static_cast<float>(a) / static_cast<float>(b));
    }
    static double cvt(double x) { return round_b32(x); }
};

struct StrictArith16 {
    static constexpr PrecisionKind compute = PrecisionKind::B16;
    static double add(double a, double b) {
        return static_cast<double>(half_round_f(static_cast<float>(a) + static_cast<float>(b)));
    }
    static double sub(double a, double b) {
        return static_cast<double>(half_round_f(static_cast<float>(a) - static_cast<float>(b)));
    }
    static double mul(double a, double b) {
        return static_cast<double>(half_round_f(static_cast<float>(a) * static_cast<float>(b)));
    }
    static double div(double a, double b) {
        return static_cast<double>(half_round_f(static_cast<float>(a) / static_cast<float>(b)));
    }
    static double cvt(double x) { return round_b16(x); }
};

struct Store64 {
    static double store(double x) { return x; }
};
struct Store32 {
    static double store(double x) { return round_b32(x); }
};
struct Store16 {
    static double store(double x) { return round_b16(x); }
};

/// Invoke f(arith, store) for a kernel whose output field has storage kind
/// `out_kind`. Strict couples compute precision to the output storage;
/// StoreRound computes natively and rounds at stores only.
template <class F>
decltype(auto) dispatch_kernel(PrecisionKind out_kind, EmulationMode mode, F&& f) {
    if (mode == EmulationMode::Strict) {
        switch (out_kind) {
            case PrecisionKind::B64: return f(NativeArith{}, Store64{});
            case PrecisionKind::B32: return f(StrictArith32{}, Store32{});
            case PrecisionKind::B16: return f(StrictArith16{}, Store16{});
        }
    }
    switch (out_kind) {
        case PrecisionKind::B64: return f(NativeArith{}, Store64{});
        case PrecisionKind::B32: return f(NativeArith{}, Store32{});
        case PrecisionKind::B16: return f(NativeArith{}, Store16{});
    }
    return f(NativeArith{}, Store64{});
}

/// Invoke f(arith) for an explicitly chosen compute precision (the public
/// stencil operators take compute and output storage independently).
template <class F>
decltype(auto) with_arith(PrecisionKind compute, EmulationMode mode, F&& f) {
    if (mode == EmulationMode::Strict) {
        switch (compute) {
            case PrecisionKind::B64: return f(NativeArith{});
            case PrecisionKind::B32: return f(StrictArith32{});
            case PrecisionKind::B16: return f(StrictArith16{});
        }
    }
    return f(NativeArith{});
}

template <class F>
decltype(auto) with_store(PrecisionKind k, F&& f) {
    switch (k) {
        case PrecisionKind::B64: return f(Store64{});
        case PrecisionKind::B32: return f(Store32{});
        case PrecisionKind::B16: return f(Store16{});
    }
    return f(Store64{});
}

/// Read view over one input field: `narrow` marks a load from a field stored
/// at higher precision than the kernel computes at, which must be rounded on
/// load. StoreRound kernels dispatch NativeArith (B64 compute), so they never
/// narrow.
struct CView {
    const double* p = nullptr;  // interior origin
    bool narrow = false;

    static CView of(const Field& f, PrecisionKind compute) {
        return {f.origin(), precision_rank(f.storage()) > precision_rank(compute)};
    }
};

template <class A>
inline double ld(A, const CView& v, std::ptrdiff_t off) {
    const double x = v.p[off];
    return v.narrow ? A::cvt(x) : x;
}

// Per-point stencil evaluators; operation order is fixed so that Strict-mode
// results are reproducible. Antisymmetric pairing makes constant fields give
// exactly zero in every precision.
//  d1: ((f+1 - f-1)*8 - (f+2 - f-2)) * r,      r = cvt(1/(12 h))
//  d2: (16*(f+1 + f-1) - (f+2 + f-2) - 30*f0) * r2,  r2 = cvt(1/(12 h^2))
template <class A>
inline double d1_point(A a, const CView& v, std::ptrdiff_t at, std::ptrdiff_t s, double r) {
    const double s1 = a.sub(ld(a, v, at + s), ld(a, v, at - s));
    const double s2 = a.sub(ld(a, v, at + 2 * s), ld(a, v, at - 2 * s));
    return a.mul(a.sub(a.mul(8.0, s1), s2), r);
}

template <class A>
inline double d2_point(A a, const CView& v, std::ptrdiff_t at, std::ptrdiff_t s, double r2) {
    const double s1 = a.add(ld(a, v, at + s), ld(a, v, at - s));
    const double s2 = a.add(ld(a, v, at + 2 * s), ld(a, v, at - 2 * s));
    const double u = a.sub(a.sub(a.mul(16.0, s1), s2), a.mul(30.0, ld(a, v, at)));
    return a.mul(u, r2);
}

}  // namespace mpfd
