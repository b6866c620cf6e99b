#include "mpfd/tgv.hpp"

#include <cmath>

#include "mpfd/kernels.hpp"
#include "mpfd/parallel.hpp"
#include "mpfd/reduce.hpp"
#include "mpfd/stencil.hpp"

namespace mpfd {

const char* to_string(KeWeighting w) { return w == KeWeighting::Plain ? "plain" : "density"; }

KeWeighting parse_ke_weighting(std::string_view s) {
    if (s == "plain") return KeWeighting::Plain;
    if (s == "density") return KeWeighting::Density;
    throw ConfigError("unknown ke_weighting '" + std::string(s) + "' (expected plain or density)");
}

namespace {

void zero_temporaries(State& state) {
    for (Field* f : state.qt) f->fill(0.0);
    for (Field* f : state.r) f->fill(0.0);
}

}  // namespace

void init_tgv(State& state, const FlowParams& params) {
    params.validate();
    const GridSpec& g = state.q[0]->grid();
    if (std::abs(g.domain_length - kTwoPi) > 1e-12)
        throw ConfigError("init_tgv requires a (2 pi)^3 domain");
    const double h = g.spacing();
    const double gm2 = params.gamma * params.mach * params.mach;
    const double p_ref = 1.0 / gm2;

    for (int k = 0; k < g.n; ++k) {
        const double z = k * h;
        for (int j = 0; j < g.n; ++j) {
            const double y = j * h;
            for (int i = 0; i < g.n; ++i) {
                const double x = i * h;
                const double u = std::sin(x) * std::cos(y) * std::cos(z);
                const double v = -std::cos(x) * std::sin(y) * std::cos(z);
                const double p =
                    p_ref + (1.0 / 16.0) * (std::cos(2 * x) + std::cos(2 * y)) *
                                (2.0 + std::cos(2 * z));
                const double rho = gm2 * p;
                const double rhoE = p / (params.gamma - 1.0) + 0.5 * rho * (u * u + v * v);
                state.q[0]->set(i, j, k, rho);
                state.q[1]->set(i, j, k, rho * u);
                state.q[2]->set(i, j, k, rho * v);
                state.q[3]->set(i, j, k, 0.0);
                state.q[4]->set(i, j, k, rhoE);
            }
        }
    }
    zero_temporaries(state);
}

void init_uniform(State& state, const FlowParams& params) {
    params.validate();
    const double gm2 = params.gamma * params.mach * params.mach;
    const double p0 = 1.0 / gm2;
    const double rho = gm2 * p0;  // = 1
    const double rhoE = p0 / (params.gamma - 1.0);
    state.q[0]->fill(rho);
    state.q[1]->fill(0.0);
    state.q[2]->fill(0.0);
    state.q[3]->fill(0.0);
    state.q[4]->fill(rhoE);
    zero_temporaries(state);
}

DiagnosticsComputer::DiagnosticsComputer(const GridSpec& grid) : grid_(grid) {
    PrecisionConfig b64;  // all classes B64; diagnostics class is pinned anyway
    vel_[0] = &scratch_.allocate("diag_u", ArrayClass::Diagnostics, grid, b64);
    vel_[1] = &scratch_.allocate("diag_v", ArrayClass::Diagnostics, grid, b64);
    vel_[2] = &scratch_.allocate("diag_w", ArrayClass::Diagnostics, grid, b64);
}

double DiagnosticsComputer::kinetic_energy(const State& state, KeWeighting weighting,
                                           int threads) {
    const GridSpec& g = grid_;
    InteriorBuffer buf(g);
    double* out = buf.data();
    const double* q0 = state.q[0]->origin();
    const double* q1 = state.q[1]->origin();
    const double* q2 = state.q[2]->origin();
    const double* q3 = state.q[3]->origin();
    const auto sy = state.q[0]->stride(1);
    const auto sz = state.q[0]->stride(2);
    const bool density = weighting == KeWeighting::Density;
    parallel_slabs(g.n, threads, [&](int k0, int k1) {
        for (int k = k0; k < k1; ++k)
            for (int j = 0; j < g.n; ++j) {
                const std::ptrdiff_t row = k * sz + j * sy;
                double* dst = out + buf.index(0, j, k);
                for (int i = 0; i < g.n; ++i) {
                    const double rho = q0[row + i];
                    const double u = q1[row + i] / rho;
                    const double v = q2[row + i] / rho;
                    const double w = q3[row + i] / rho;
                    const double k2 = 0.5 * (u * u + v * v + w * w);
                    dst[i] = density ? rho * k2 : k2;
                }
            }
    });
    const double h = g.spacing();
    const double cell = h * h * h;
    return deterministic_sum(buf.span(), threads) * cell / g.volume();
}

DiagnosticsRecord DiagnosticsComputer::compute(const State& state, const FlowParams& params,
                                               KeWeighting weighting, double t, int threads) {
    DiagnosticsRecord rec;
    rec.t = t;
    rec.kinetic_energy = kinetic_energy(state, weighting, threads);

    const GridSpec& g = grid_;
    // Widen velocities into the scratch fields and wrap their halos for the
    // curl stencils.
    const double* q0 = state.q[0]->origin();
    const std::array<const double*, 3> mom = {state.q[1]->origin(), state.q[2]->origin(),
                                              state.q[3]->origin()};
    const auto sy = state.q[0]->stride(1);
    const auto sz = state.q[0]->stride(2);
    for (int c = 0; c < 3; ++c) {
        double* dst = vel_[static_cast<std::size_t>(c)]->origin();
        parallel_slabs(g.n, threads, [&](int k0, int k1) {
            for (int k = k0; k < k1; ++k)
                for (int j = 0; j < g.n; ++j) {
                    const std::ptrdiff_t row = k * sz + j * sy;
                    for (int i = 0; i < g.n; ++i)
                        dst[row + i] = mom[static_cast<std::size_t>(c)][row + i] / q0[row + i];
                }
        });
        vel_[static_cast<std::size_t>(c)]->note_interior_write();
        fill_halos_periodic(*vel_[static_cast<std::size_t>(c)]);
    }

    // omega = curl u via the 4th-order first-derivative stencil in binary64.
    InteriorBuffer buf(g);
    double* out = buf.data();
    const double r = 1.0 / (12.0 * g.spacing());
    const CView uv = CView::of(*vel_[0], PrecisionKind::B64);
    const CView vv = CView::of(*vel_[1], PrecisionKind::B64);
    const CView wv = CView::of(*vel_[2], PrecisionKind::B64);
    const std::ptrdiff_t sx = vel_[0]->stride(0);
    const std::ptrdiff_t syv = vel_[0]->stride(1);
    const std::ptrdiff_t szv = vel_[0]->stride(2);
    NativeArith a;
    parallel_slabs(g.n, threads, [&](int k0, int k1) {
        for (int k = k0; k < k1; ++k)
            for (int j = 0; j < g.n; ++j) {
                const std::ptrdiff_t row = k * szv + j * syv;
                double* dst = out + buf.index(0, j, k);
                for (int i = 0; i < g.n; ++i) {
                    const std::ptrdiff_t at = row + i;
                    const double wx =
                        d1_point(a, wv, at, syv, r) - d1_point(a, vv, at, szv, r);
                    const double wy =
                        d1_point(a, uv, at, szv, r) - d1_point(a, wv, at, sx, r);
                    const double wz =
                        d1_point(a, vv, at, sx, r) - d1_point(a, uv, at, syv, r);
                    dst[i] = wx * wx + wy * wy + wz * wz;
                }
            }
    });
    const double h = g.spacing();
    rec.enstrophy = deterministic_sum(buf.span(), threads) * (h * h * h) / g.volume();
    rec.eps_s = params.reynolds > 0.0 ? rec.enstrophy / params.reynolds : 0.0;
    return rec;
}

ComparisonReport compare_series(const std::vector<DiagnosticsRecord>& candidate,
                                const std::vector<DiagnosticsRecord>& reference) {
    if (candidate.size() != reference.size())
        throw ComparisonError("sample counts differ (" + std::to_string(candidate.size()) +
                              " vs " + std::to_string(reference.size()) + ")");
    ComparisonReport rep;
    rep.times.reserve(candidate.size());
    rep.abs_diff.reserve(candidate.size());
    for (std::size_t i = 0; i < candidate.size(); ++i) {
        if (candidate[i].t != reference[i].t)
            throw ComparisonError("sample grids differ at index " + std::to_string(i));
        rep.times.push_back(candidate[i].t);
        rep.abs_diff.push_back(std::abs(candidate[i].eps_s - reference[i].eps_s));
    }
    if (!rep.abs_diff.empty()) {
        rep.mean_abs_diff = pairwise_sum({rep.abs_diff.data(), rep.abs_diff.size()}) /
                            static_cast<double>(rep.abs_diff.size());
        for (double d : rep.abs_diff) rep.max_abs_diff = std::max(rep.max_abs_diff, d);
    }
    return rep;
}

}  // namespace mpfd
