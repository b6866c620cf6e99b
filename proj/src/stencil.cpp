#include "mpfd/stencil.hpp"

#include <cassert>

#include "mpfd/kernels.hpp"

namespace mpfd {

namespace {

template <class A, class S>
void ddx1_impl(A a, S, const Field& f, Dir d, Field& out) {
    const GridSpec& g = f.grid();
    const CView v = CView::of(f, A::compute);
    const std::ptrdiff_t s = f.stride(static_cast<int>(d));
    const double r = A::cvt(1.0 / (12.0 * g.spacing()));
    double* o = out.origin();
    const double* base = f.origin();
    for (int k = 0; k < g.n; ++k)
        for (int j = 0; j < g.n; ++j) {
            const std::ptrdiff_t row = k * f.stride(2) + j * f.stride(1);
            const std::ptrdiff_t orow = k * out.stride(2) + j * out.stride(1);
            for (int i = 0; i < g.n; ++i)
                o[orow + i] = S::store(d1_point(a, v, row + i, s, r));
        }
    (void)base;
    out.note_interior_write();
}

template <class A, class S>
void ddx2_impl(A a, S, const Field& f, Dir d, Field& out) {
    const GridSpec& g = f.grid();
    const CView v = CView::of(f, A::compute);
    const std::ptrdiff_t s = f.stride(static_cast<int>(d));
    const double h = g.spacing();
    const double r2 = A::cvt(1.0 / (12.0 * h * h));
    double* o = out.origin();
    for (int k = 0; k < g.n; ++k)
        for (int j = 0; j < g.n; ++j) {
            const std::ptrdiff_t row = k * f.stride(2) + j * f.stride(1);
            const std::ptrdiff_t orow = k * out.stride(2) + j * out.stride(1);
            for (int i = 0; i < g.n; ++i)
                o[orow + i] = S::store(d2_point(a, v, row + i, s, r2));
        }
    out.note_interior_write();
}

template <class A, class S>
void nested_impl(A a, S, const Field& f, Dir d1, Dir d2, Field& out) {
    const GridSpec& g = f.grid();
    const CView v = CView::of(f, A::compute);
    const std::ptrdiff_t si = f.stride(static_cast<int>(d1));
    const std::ptrdiff_t so = f.stride(static_cast<int>(d2));
    const double r = A::cvt(1.0 / (12.0 * g.spacing()));
    double* o = out.origin();
    for (int k = 0; k < g.n; ++k)
        for (int j = 0; j < g.n; ++j) {
            const std::ptrdiff_t row = k * f.stride(2) + j * f.stride(1);
            const std::ptrdiff_t orow = k * out.stride(2) + j * out.stride(1);
            for (int i = 0; i < g.n; ++i) {
                const std::ptrdiff_t at = row + i;
                const double m1 = d1_point(a, v, at - so, si, r);
                const double p1 = d1_point(a, v, at + so, si, r);
                const double m2 = d1_point(a, v, at - 2 * so, si, r);
                const double p2 = d1_point(a, v, at + 2 * so, si, r);
                const double s1 = a.sub(p1, m1);
                const double s2 = a.sub(p2, m2);
                o[orow + i] = S::store(a.mul(a.sub(a.mul(8.0, s1), s2), r));
            }
        }
    out.note_interior_write();
}

void check_contract(const Field& f, const Field& out) {
    assert(f.halos_fresh() && "stencil input halos are stale");
    assert(f.grid() == out.grid());
    (void)f;
    (void)out;
}

}  // namespace

void ddx1(const Field& f, Dir d, PrecisionKind compute, EmulationMode mode, Field& out) {
    check_contract(f, out);
    with_arith(compute, mode, [&](auto a) {
        with_store(out.storage(), [&](auto s) { ddx1_impl(a, s, f, d, out); });
    });
}

void ddx2(const Field& f, Dir d, PrecisionKind compute, EmulationMode mode, Field& out) {
    check_contract(f, out);
    with_arith(compute, mode, [&](auto a) {
        with_store(out.storage(), [&](auto s) { ddx2_impl(a, s, f, d, out); });
    });
}

void ddx1_nested(const Field& f, Dir d1, Dir d2, PrecisionKind compute, EmulationMode mode,
                 Field& out) {
    check_contract(f, out);
    with_arith(compute, mode, [&](auto a) {
        with_store(out.storage(), [&](auto s) { nested_impl(a, s, f, d1, d2, out); });
    });
}

}  // namespace mpfd
