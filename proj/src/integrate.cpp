#include "mpfd/integrate.hpp"

#include <chrono>
#include <cmath>

#include "mpfd/kernels.hpp"
#include "mpfd/parallel.hpp"
#include "mpfd/reduce.hpp"

namespace mpfd {

namespace {

template <class A>
void qt_update_slab(A a, const CView& qt_in, const CView& r_in, double* out, PrecisionKind out_k,
                    double ai, double dt_c, bool skip_a, const GridSpec& g, std::ptrdiff_t sy,
                    std::ptrdiff_t sz, int k0, int k1) {
    for (int k = k0; k < k1; ++k)
        for (int j = 0; j < g.n; ++j) {
            const std::ptrdiff_t row = k * sz + j * sy;
            for (int i = 0; i < g.n; ++i) {
                const std::ptrdiff_t at = row + i;
                const double t = a.mul(dt_c, ld(a, r_in, at));
                const double v = skip_a ? t : a.add(a.mul(ai, ld(a, qt_in, at)), t);
                out[at] = round_to(out_k, v);
            }
        }
}

template <class A>
void q_update_slab(A a, const CView& q_in, const CView& qt_in, double* out, PrecisionKind out_k,
                   double bi, const GridSpec& g, std::ptrdiff_t sy, std::ptrdiff_t sz, int k0,
                   int k1) {
    for (int k = k0; k < k1; ++k)
        for (int j = 0; j < g.n; ++j) {
            const std::ptrdiff_t row = k * sz + j * sy;
            for (int i = 0; i < g.n; ++i) {
                const std::ptrdiff_t at = row + i;
                const double v = a.add(ld(a, q_in, at), a.mul(bi, ld(a, qt_in, at)));
                out[at] = round_to(out_k, v);
            }
        }
}

}  // namespace

void rk_substep(int substep, State& state, const RKScheme& scheme, double dt,
                const PrecisionConfig& config, int threads) {
    const KernelPlan plan = make_kernel_plan(config);
    const GridSpec& g = state.q[0]->grid();
    const auto sy = state.q[0]->stride(1);
    const auto sz = state.q[0]->stride(2);
    const double ai = scheme.a[static_cast<std::size_t>(substep)];
    const double bi = scheme.b[static_cast<std::size_t>(substep)];

    // Qt^i = A_i Qt^(i-1) + dt R^(i-1), at rk_arrays precision.
    with_arith(plan.qt_update, plan.mode, [&](auto a) {
        using A = decltype(a);
        const double ai_c = A::cvt(ai);
        const double dt_c = A::cvt(dt);
        const bool skip_a = ai == 0.0;
        for (int c = 0; c < 5; ++c) {
            Field& qt = *state.qt[static_cast<std::size_t>(c)];
            const CView qt_v = CView::of(qt, A::compute);
            const CView r_v = CView::of(*state.r[static_cast<std::size_t>(c)], A::compute);
            double* out = qt.origin();
            const PrecisionKind out_k = qt.storage();
            parallel_slabs(g.n, threads, [&](int k0, int k1) {
                qt_update_slab(a, qt_v, r_v, out, out_k, ai_c, dt_c, skip_a, g, sy, sz, k0, k1);
            });
            qt.note_interior_write();
        }
    });

    // Q^i = Q^(i-1) + B_i Qt^i, at q_vector precision.
    with_arith(plan.q_update, plan.mode, [&](auto a) {
        using A = decltype(a);
        const double bi_c = A::cvt(bi);
        for (int c = 0; c < 5; ++c) {
            Field& q = *state.q[static_cast<std::size_t>(c)];
            const CView q_v = CView::of(q, A::compute);
            const CView qt_v = CView::of(*state.qt[static_cast<std::size_t>(c)], A::compute);
            double* out = q.origin();
            const PrecisionKind out_k = q.storage();
            parallel_slabs(g.n, threads, [&](int k0, int k1) {
                q_update_slab(a, q_v, qt_v, out, out_k, bi_c, g, sy, sz, k0, k1);
            });
            q.note_interior_write();
        }
    });
}

void fill_state_halos(State& state) {
    for (Field* q : state.q) fill_halos_periodic(*q);
}

AdvanceResult advance(State& state, ResidualEvaluator& eval, const RKScheme& scheme,
                      const StepConfig& step, const PrecisionConfig& config,
                      const SampleFn& sample, const SnapshotFn& snapshot,
                      const std::vector<double>& snapshot_times, int threads) {
    AdvanceResult res;
    const auto t_start = std::chrono::steady_clock::now();

    fill_state_halos(state);
    if (sample) sample(0.0, false);

    std::size_t next_snapshot = 0;
    auto locate_nonfinite = [&](double t, long iter, int sub) {
        const GridSpec& g = state.q[0]->grid();
        for (Field* q : state.q)
            for (int k = 0; k < g.n; ++k)
                for (int j = 0; j < g.n; ++j)
                    for (int i = 0; i < g.n; ++i)
                        if (!std::isfinite((*q)(i, j, k))) {
                            DivergenceEvent ev{"nonfinite state", i, j, k, t, iter, sub};
                            return ev;
                        }
        return DivergenceEvent{"nonfinite state", 0, 0, 0, t, iter, sub};
    };

    for (long iter = 0; iter < step.n_iterations; ++iter) {
        const double t_next = (iter + 1) * step.dt;
        for (int sub = 0; sub < scheme.substeps(); ++sub) {
            if (auto ev = eval.evaluate(threads)) {
                ev->time = iter * step.dt;
                ev->iteration = iter;
                ev->substep = sub;
                res.status = RunStatus::Diverged;
                res.divergence = ev;
                res.iterations_run = iter;
                if (sample) sample(ev->time, true);
                break;
            }
            rk_substep(sub, state, scheme, step.dt, config, threads);
            bool finite = true;
            for (Field* q : state.q)
                if (!interior_all_finite(*q, threads)) {
                    finite = false;
                    break;
                }
            if (!finite) {
                res.status = RunStatus::Diverged;
                res.divergence = locate_nonfinite(t_next, iter, sub);
                res.iterations_run = iter;
                if (sample) sample(t_next, true);
                break;
            }
            fill_state_halos(state);
        }
        if (res.status == RunStatus::Diverged) break;
        res.iterations_run = iter + 1;
        if (sample && step.diagnostics_interval > 0 &&
            (iter + 1) % step.diagnostics_interval == 0)
            sample(t_next, false);
        if (snapshot && next_snapshot < snapshot_times.size() &&
            t_next >= snapshot_times[next_snapshot] - 0.5 * step.dt) {
            snapshot(t_next);
            ++next_snapshot;
        }
    }

    const auto t_end = std::chrono::steady_clock::now();
    res.wall_seconds = std::chrono::duration<double>(t_end - t_start).count();
    res.seconds_per_iteration =
        res.iterations_run > 0 ? res.wall_seconds / static_cast<double>(res.iterations_run) : 0.0;
    return res;
}

}  // namespace mpfd
