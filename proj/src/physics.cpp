#include "mpfd/physics.hpp"

#include <cassert>
#include <cmath>

#include "mpfd/kernels.hpp"
#include "mpfd/parallel.hpp"
#include "mpfd/reduce.hpp"

namespace mpfd {

void FlowParams::validate() const {
    if (!(mach > 0.0)) throw ConfigError("FlowParams: M must be positive");
    if (viscous && !(reynolds > 0.0)) throw ConfigError("FlowParams: Re must be positive");
    if (!(prandtl > 0.0)) throw ConfigError("FlowParams: Pr must be positive");
    if (!(gamma > 1.0)) throw ConfigError("FlowParams: gamma must exceed 1");
}

SplitCoefficients split_preset(std::string_view name) {
    SplitCoefficients c{0, 0, 0, 0, 0, 0, 0};
    if (name == "Divergence") {
        c.alpha = 1.0;
    } else if (name == "Feiereisen") {  // pair rho u | phi
        c.alpha = 0.5;
        c.beta_phi = 0.5;
        c.gamma_phi = 0.5;
    } else if (name == "Blaisdell") {  // pair rho phi | u
        c.alpha = 0.5;
        c.beta_u = 0.5;
        c.gamma_u = 0.5;
    } else if (name == "Kok") {  // pair rho | u phi
        c.alpha = 0.5;
        c.beta_rho = 0.5;
        c.gamma_rho = 0.5;
    } else if (name == "KGP") {
        c.alpha = c.beta_rho = c.beta_u = c.beta_phi = 0.25;
        c.gamma_rho = c.gamma_u = c.gamma_phi = 0.25;
    } else {
        throw ConfigError("unknown split form '" + std::string(name) + "'");
    }
    assert(c.is_consistent());
    return c;
}

const char* to_string(ResidualStrategy s) {
    return s == ResidualStrategy::Default ? "default" : "storesome";
}

ResidualStrategy parse_strategy(std::string_view s) {
    if (s == "default") return ResidualStrategy::Default;
    if (s == "storesome") return ResidualStrategy::Storesome;
    throw ConfigError("unknown strategy '" + std::string(s) + "' (expected default or storesome)");
}

namespace {

// ---------------------------------------------------------------------------
// per-point convective machinery, shared by convective_split and the fused
// residual kernel so the two are bitwise interchangeable

struct ConvCtx {
    CView q[5];
    CView u[3];
    std::ptrdiff_t s[3];
    double r;        // cvt(1/(12h))
    double coef[7];  // cvt'd split weights
    bool nz[7];      // weight nonzero (in binary64, before conversion)
};

// First derivative of per-offset values produced by `value_at`.
template <class A, class VF>
inline double d1_over(A a, VF&& value_at, std::ptrdiff_t at, std::ptrdiff_t s, double r) {
    const double vm2 = value_at(at - 2 * s);
    const double vm1 = value_at(at - s);
    const double vp1 = value_at(at + s);
    const double vp2 = value_at(at + 2 * s);
    const double s1 = a.sub(vp1, vm1);
    const double s2 = a.sub(vp2, vm2);
    return a.mul(a.sub(a.mul(8.0, s1), s2), r);
}

template <class A>
inline double phi_value(A a, const ConvCtx& c, int phi, std::ptrdiff_t at) {
    if (phi == 0) return 1.0;
    if (phi == 4) return a.div(ld(a, c.q[4], at), ld(a, c.q[0], at));
    return ld(a, c.u[phi - 1], at);
}

/// C_j(phi) at one interior point: the seven-term weighted sum, canonical
/// term order, zero-weight terms skipped (phi = 1 also skips gamma_phi since
/// d(phi) vanishes identically). rho*phi and rho*u_j are read directly from
/// the conservative fields.
template <class A>
inline double conv_term_point(A a, const ConvCtx& c, int phi, int j, std::ptrdiff_t at) {
    const std::ptrdiff_t s = c.s[j];
    const CView& qm = c.q[1 + j];
    const CView& uj = c.u[j];

    const double uj0 = ld(a, uj, at);
    const double rho0 = ld(a, c.q[0], at);
    const bool need_phi0 = (c.nz[3] || c.nz[4]) && phi != 0;
    const double phi0 = need_phi0 ? phi_value(a, c, phi, at) : 1.0;

    double acc = 0.0;
    if (c.nz[0]) {  // alpha * d(rho u_j phi)
        double t;
        if (phi == 0) {
            t = d1_over(a, [&](std::ptrdiff_t o) { return ld(a, qm, o); }, at, s, c.r);
        } else if (phi == 4) {
            t = d1_over(
                a, [&](std::ptrdiff_t o) { return a.mul(ld(a, c.q[4], o), ld(a, uj, o)); }, at, s,
                c.r);
        } else {
            t = d1_over(
                a, [&](std::ptrdiff_t o) { return a.mul(ld(a, qm, o), ld(a, c.u[phi - 1], o)); },
                at, s, c.r);
        }
        acc = a.add(acc, a.mul(c.coef[0], t));
    }
    if (c.nz[1]) {  // beta_rho * rho * d(u_j phi)
        double t;
        if (phi == 0) {
            t = d1_over(a, [&](std::ptrdiff_t o) { return ld(a, uj, o); }, at, s, c.r);
        } else {
            t = d1_over(
                a, [&](std::ptrdiff_t o) { return a.mul(ld(a, uj, o), phi_value(a, c, phi, o)); },
                at, s, c.r);
        }
        acc = a.add(acc, a.mul(c.coef[1], a.mul(rho0, t)));
    }
    if (c.nz[2]) {  // beta_u * u_j * d(rho phi)
        const double t =
            d1_over(a, [&](std::ptrdiff_t o) { return ld(a, c.q[phi], o); }, at, s, c.r);
        acc = a.add(acc, a.mul(c.coef[2], a.mul(uj0, t)));
    }
    if (c.nz[3]) {  // beta_phi * phi * d(rho u_j)
        const double t = d1_over(a, [&](std::ptrdiff_t o) { return ld(a, qm, o); }, at, s, c.r);
        acc = a.add(acc, a.mul(c.coef[3], phi == 0 ? t : a.mul(phi0, t)));
    }
    if (c.nz[4]) {  // gamma_rho * u_j phi * d(rho)
        const double t = d1_over(a, [&](std::ptrdiff_t o) { return ld(a, c.q[0], o); }, at, s, c.r);
        const double uphi = phi == 0 ? uj0 : a.mul(uj0, phi0);
        acc = a.add(acc, a.mul(c.coef[4], a.mul(uphi, t)));
    }
    if (c.nz[5]) {  // gamma_u * rho phi * d(u_j)
        const double t = d1_over(a, [&](std::ptrdiff_t o) { return ld(a, uj, o); }, at, s, c.r);
        acc = a.add(acc, a.mul(c.coef[5], a.mul(ld(a, c.q[phi], at), t)));
    }
    if (c.nz[6] && phi != 0) {  // gamma_phi * rho u_j * d(phi)
        const double t =
            d1_over(a, [&](std::ptrdiff_t o) { return phi_value(a, c, phi, o); }, at, s, c.r);
        acc = a.add(acc, a.mul(c.coef[6], a.mul(ld(a, qm, at), t)));
    }
    return acc;
}

template <class A>
ConvCtx make_conv_ctx(A, const std::array<const Field*, 5>& q,
                      const std::array<const Field*, 3>& u, const SplitCoefficients& sc) {
    ConvCtx c;
    const GridSpec& g = q[0]->grid();
    for (int i = 0; i < 5; ++i) c.q[i] = CView::of(*q[static_cast<std::size_t>(i)], A::compute);
    for (int i = 0; i < 3; ++i) c.u[i] = CView::of(*u[static_cast<std::size_t>(i)], A::compute);
    c.s[0] = q[0]->stride(0);
    c.s[1] = q[0]->stride(1);
    c.s[2] = q[0]->stride(2);
    c.r = A::cvt(1.0 / (12.0 * g.spacing()));
    const double w[7] = {sc.alpha,     sc.beta_rho, sc.beta_u, sc.beta_phi,
                         sc.gamma_rho, sc.gamma_u,  sc.gamma_phi};
    for (int i = 0; i < 7; ++i) {
        c.coef[i] = A::cvt(w[i]);
        c.nz[i] = w[i] != 0.0;
    }
    return c;
}

// ---------------------------------------------------------------------------
// velocity/temperature gradient providers for the viscous terms

struct StagedGrads {
    CView du[9];  // du_i/dx_j at i*3+j
    CView dT[3];
    template <class A>
    double grad(A a, int i, int j, std::ptrdiff_t at) const {
        return ld(a, du[i * 3 + j], at);
    }
    template <class A>
    double tgrad(A a, int j, std::ptrdiff_t at) const {
        return ld(a, dT[j], at);
    }
};

struct InlineGrads {
    CView u[3];
    CView T;
    std::ptrdiff_t s[3]{};
    double r = 0.0;
    template <class A>
    double grad(A a, int i, int j, std::ptrdiff_t at) const {
        return d1_point(a, u[i], at, s[j], r);
    }
    template <class A>
    double tgrad(A a, int j, std::ptrdiff_t at) const {
        return d1_point(a, T, at, s[j], r);
    }
};

template <class G>
struct ViscCtx {
    G grads;
    CView u[3];
    std::ptrdiff_t s[3]{};
    double r = 0.0, r2 = 0.0;
    double inv_re = 0.0, third = 0.0, two_thirds = 0.0, kappa = 0.0;
};

template <class A, class G>
inline double divu_at(A a, const ViscCtx<G>& v, std::ptrdiff_t at) {
    return a.add(a.add(v.grads.grad(a, 0, 0, at), v.grads.grad(a, 1, 1, at)),
                 v.grads.grad(a, 2, 2, at));
}

/// (1/Re)[sum_j d2(u_i)/dx_j^2 + (1/3) d(div u)/dx_i]
template <class A, class G>
inline double viscous_momentum(A a, const ViscCtx<G>& v, int i, std::ptrdiff_t at) {
    const double lx = d2_point(a, v.u[i], at, v.s[0], v.r2);
    const double ly = d2_point(a, v.u[i], at, v.s[1], v.r2);
    const double lz = d2_point(a, v.u[i], at, v.s[2], v.r2);
    const double lap = a.add(a.add(lx, ly), lz);
    const double cross =
        d1_over(a, [&](std::ptrdiff_t o) { return divu_at(a, v, o); }, at, v.s[i], v.r);
    return a.mul(v.inv_re, a.add(lap, a.mul(v.third, cross)));
}

/// d(u_i tau_ij)/dx_j with tau built pointwise from the gradient provider.
template <class A, class G>
inline double viscous_energy_tau(A a, const ViscCtx<G>& v, std::ptrdiff_t at) {
    double total = 0.0;
    for (int j = 0; j < 3; ++j) {
        const double tj = d1_over(
            a,
            [&](std::ptrdiff_t o) {
                const double dv = divu_at(a, v, o);
                double g = 0.0;
                for (int i = 0; i < 3; ++i) {
                    double sij = a.add(v.grads.grad(a, i, j, o), v.grads.grad(a, j, i, o));
                    if (i == j) sij = a.sub(sij, a.mul(v.two_thirds, dv));
                    const double tau = a.mul(v.inv_re, sij);
                    g = a.add(g, a.mul(ld(a, v.u[i], o), tau));
                }
                return g;
            },
            at, v.s[j], v.r);
        total = a.add(total, tj);
    }
    return total;
}

/// -d(q_j)/dx_j = kappa * sum_j d(dT/dx_j)/dx_j. First derivatives of T are
/// re-differentiated in both strategies, keeping them algebraically
/// identical (Default reads its staged arrays, Storesome nests inline).
template <class A, class G>
inline double viscous_energy_heat(A a, const ViscCtx<G>& v, std::ptrdiff_t at) {
    double h = 0.0;
    for (int j = 0; j < 3; ++j) {
        const double hj =
            d1_over(a, [&](std::ptrdiff_t o) { return v.grads.tgrad(a, j, o); }, at, v.s[j], v.r);
        h = a.add(h, hj);
    }
    return a.mul(v.kappa, h);
}

// ---------------------------------------------------------------------------
// primitives kernel

struct FirstBad {
    bool found = false;
    int i = 0, j = 0, k = 0;
};

template <class A>
void primitives_impl(A a, const std::array<const Field*, 5>& q, const FlowParams& par, Field& u,
                     Field& v, Field& w, Field& p, Field& T, Field* e_out, int threads,
                     std::vector<FirstBad>& bad) {
    const GridSpec& g = q[0]->grid();
    CView qv[5];
    for (int c = 0; c < 5; ++c) qv[c] = CView::of(*q[static_cast<std::size_t>(c)], A::compute);
    const double half = A::cvt(0.5);
    const double gm1 = A::cvt(par.gamma - 1.0);
    const double gM2 = A::cvt(par.gamma * par.mach * par.mach);
    double* pu = u.origin();
    double* pv = v.origin();
    double* pw = w.origin();
    double* pp = p.origin();
    double* pT = T.origin();
    double* pe = e_out ? e_out->origin() : nullptr;
    const PrecisionKind ku = u.storage(), kv = v.storage(), kw = w.storage(), kp = p.storage(),
                        kT = T.storage(), ke_k = e_out ? e_out->storage() : PrecisionKind::B64;
    const auto sy = q[0]->stride(1);
    const auto sz = q[0]->stride(2);

    parallel_slabs(g.n, threads, [&](int k0, int k1) {
        for (int k = k0; k < k1; ++k)
            for (int j = 0; j < g.n; ++j) {
                const std::ptrdiff_t row = k * sz + j * sy;
                for (int i = 0; i < g.n; ++i) {
                    const std::ptrdiff_t at = row + i;
                    const double rho = ld(a, qv[0], at);
                    if (!(rho > 0.0) || !std::isfinite(rho)) {
                        auto& b = bad[static_cast<std::size_t>(k)];
                        if (!b.found) b = {true, i, j, k};
                    }
                    const double ux = a.div(ld(a, qv[1], at), rho);
                    const double uy = a.div(ld(a, qv[2], at), rho);
                    const double uz = a.div(ld(a, qv[3], at), rho);
                    const double Et = a.div(ld(a, qv[4], at), rho);
                    const double kin =
                        a.mul(half, a.add(a.add(a.mul(ux, ux), a.mul(uy, uy)), a.mul(uz, uz)));
                    const double e = a.sub(Et, kin);
                    const double pr = a.mul(gm1, a.mul(rho, e));
                    const double Tv = a.div(a.mul(gM2, pr), rho);
                    pu[at] = round_to(ku, ux);
                    pv[at] = round_to(kv, uy);
                    pw[at] = round_to(kw, uz);
                    pp[at] = round_to(kp, pr);
                    pT[at] = round_to(kT, Tv);
                    if (pe) pe[at] = round_to(ke_k, e);
                }
            }
    });
}

// ---------------------------------------------------------------------------
// fused residual kernel

template <class G>
struct RCtx {
    ConvCtx conv;
    ViscCtx<G> visc;
    CView p;
    bool viscous = false;
    PrecisionKind store_kind[5] = {};
};

template <class A, class G>
void residual_slab(A a, const RCtx<G>& c, const GridSpec& g, std::ptrdiff_t sy, std::ptrdiff_t sz,
                   const std::array<double*, 5>& out, int k0, int k1) {
    for (int k = k0; k < k1; ++k)
        for (int j = 0; j < g.n; ++j) {
            const std::ptrdiff_t row = k * sz + j * sy;
            for (int i = 0; i < g.n; ++i) {
                const std::ptrdiff_t at = row + i;

                {  // continuity: R_rho = -C(1)
                    const double cx = conv_term_point(a, c.conv, 0, 0, at);
                    const double cy = conv_term_point(a, c.conv, 0, 1, at);
                    const double cz = conv_term_point(a, c.conv, 0, 2, at);
                    out[0][at] = round_to(c.store_kind[0], -a.add(a.add(cx, cy), cz));
                }
                for (int m = 0; m < 3; ++m) {  // momentum: -C(u_m) - dp/dx_m + viscous
                    const double cx = conv_term_point(a, c.conv, 1 + m, 0, at);
                    const double cy = conv_term_point(a, c.conv, 1 + m, 1, at);
                    const double cz = conv_term_point(a, c.conv, 1 + m, 2, at);
                    const double conv = a.add(a.add(cx, cy), cz);
                    const double dp = d1_point(a, c.p, at, c.conv.s[m], c.conv.r);
                    double val = a.sub(-conv, dp);
                    if (c.viscous) val = a.add(val, viscous_momentum(a, c.visc, m, at));
                    out[1 + m][at] = round_to(c.store_kind[1 + m], val);
                }
                {  // energy: -C(E) - d(p u_j)/dx_j + tau work - heat flux divergence
                    const double cx = conv_term_point(a, c.conv, 4, 0, at);
                    const double cy = conv_term_point(a, c.conv, 4, 1, at);
                    const double cz = conv_term_point(a, c.conv, 4, 2, at);
                    const double conv = a.add(a.add(cx, cy), cz);
                    double pw = 0.0;
                    for (int d = 0; d < 3; ++d) {
                        const double t = d1_over(
                            a,
                            [&](std::ptrdiff_t o) {
                                return a.mul(ld(a, c.p, o), ld(a, c.conv.u[d], o));
                            },
                            at, c.conv.s[d], c.conv.r);
                        pw = a.add(pw, t);
                    }
                    double val = a.sub(-conv, pw);
                    if (c.viscous) {
                        val = a.add(val, viscous_energy_tau(a, c.visc, at));
                        val = a.add(val, viscous_energy_heat(a, c.visc, at));
                    }
                    out[4][at] = round_to(c.store_kind[4], val);
                }
            }
        }
}

}  // namespace

std::optional<DivergenceEvent> primitives_from_conservatives(
    const std::array<const Field*, 5>& q, const FlowParams& params, PrecisionKind compute,
    EmulationMode mode, Field& u, Field& v, Field& w, Field& p, Field& T, Field* e_out,
    int threads) {
    params.validate();
    const GridSpec& g = q[0]->grid();
    std::vector<FirstBad> bad(static_cast<std::size_t>(g.n));
    with_arith(compute, mode,
               [&](auto a) { primitives_impl(a, q, params, u, v, w, p, T, e_out, threads, bad); });
    for (auto* f : {&u, &v, &w, &p, &T}) f->note_interior_write();
    if (e_out) e_out->note_interior_write();
    for (const auto& b : bad)
        if (b.found) return DivergenceEvent{"nonpositive or nonfinite density", b.i, b.j, b.k};
    return std::nullopt;
}

void convective_split(Dir j, PhiSelector phi, const SplitCoefficients& coeffs,
                      const ConvectiveInputs& in, PrecisionKind compute, EmulationMode mode,
                      Field& out, int threads) {
    if (!coeffs.is_consistent())
        throw ConfigError("split coefficients violate the consistency constraints");
    for (const Field* f : in.q) assert(f && f->halos_fresh());
    for (const Field* f : in.u) assert(f && f->halos_fresh());
    const GridSpec& g = in.q[0]->grid();
    const auto sy = in.q[0]->stride(1);
    const auto sz = in.q[0]->stride(2);
    const PrecisionKind out_kind = out.storage();
    with_arith(compute, mode, [&](auto a) {
        const ConvCtx ctx = make_conv_ctx(a, in.q, in.u, coeffs);
        double* o = out.origin();
        parallel_slabs(g.n, threads, [&](int k0, int k1) {
            for (int k = k0; k < k1; ++k)
                for (int jj = 0; jj < g.n; ++jj) {
                    const std::ptrdiff_t row = k * sz + jj * sy;
                    for (int i = 0; i < g.n; ++i)
                        o[row + i] = round_to(out_kind, conv_term_point(a, ctx, static_cast<int>(phi),
                                                                        static_cast<int>(j), row + i));
                }
        });
    });
    out.note_interior_write();
}

SolverFields make_solver_fields(const GridSpec& grid, const PrecisionConfig& config,
                                ResidualStrategy strategy) {
    SolverFields f;
    f.strategy = strategy;
    static const char* qn[5] = {"rho", "rhou", "rhov", "rhow", "rhoE"};
    static const char* tn[5] = {"rk_rho", "rk_rhou", "rk_rhov", "rk_rhow", "rk_rhoE"};
    static const char* rn[5] = {"res_rho", "res_rhou", "res_rhov", "res_rhow", "res_rhoE"};
    for (int i = 0; i < 5; ++i)
        f.state.q[static_cast<std::size_t>(i)] =
            &f.registry.allocate(qn[i], ArrayClass::QVector, grid, config);
    for (int i = 0; i < 5; ++i)
        f.state.qt[static_cast<std::size_t>(i)] =
            &f.registry.allocate(tn[i], ArrayClass::RkArrays, grid, config);
    for (int i = 0; i < 5; ++i)
        f.state.r[static_cast<std::size_t>(i)] =
            &f.registry.allocate(rn[i], ArrayClass::Residuals, grid, config);
    static const char* un[3] = {"u", "v", "w"};
    for (int i = 0; i < 3; ++i)
        f.prim_u[static_cast<std::size_t>(i)] =
            &f.registry.allocate(un[i], ArrayClass::WkArrays, grid, config);
    f.prim_p = &f.registry.allocate("p", ArrayClass::WkArrays, grid, config);
    f.prim_T = &f.registry.allocate("T", ArrayClass::WkArrays, grid, config);
    if (strategy == ResidualStrategy::Default) {
        static const char* gn[9] = {"dudx", "dudy", "dudz", "dvdx", "dvdy",
                                    "dvdz", "dwdx", "dwdy", "dwdz"};
        static const char* gt[3] = {"dTdx", "dTdy", "dTdz"};
        for (int i = 0; i < 9; ++i)
            f.grad_u[static_cast<std::size_t>(i)] =
                &f.registry.allocate(gn[i], ArrayClass::WkArrays, grid, config);
        for (int i = 0; i < 3; ++i)
            f.grad_T[static_cast<std::size_t>(i)] =
                &f.registry.allocate(gt[i], ArrayClass::WkArrays, grid, config);
    }
    return f;
}

ResidualEvaluator::ResidualEvaluator(SolverFields& fields, const FlowParams& params,
                                     const SplitCoefficients& split, const PrecisionConfig& config)
    : f_(fields), params_(params), split_(split), config_(config) {
    params_.validate();
    if (!split_.is_consistent())
        throw ConfigError("split coefficients violate the consistency constraints");
}

std::optional<DivergenceEvent> ResidualEvaluator::evaluate(int threads) {
    const KernelPlan plan = make_kernel_plan(config_);
    State& st = f_.state;
    for (const Field* q : st.q) assert(q->halos_fresh());

    std::array<const Field*, 5> qc;
    for (int i = 0; i < 5; ++i) qc[static_cast<std::size_t>(i)] = st.q[static_cast<std::size_t>(i)];

    // 1. stage primitives at wk compute precision
    if (auto ev = primitives_from_conservatives(qc, params_, plan.primitives, plan.mode,
                                                *f_.prim_u[0], *f_.prim_u[1], *f_.prim_u[2],
                                                *f_.prim_p, *f_.prim_T, nullptr, threads))
        return ev;
    for (Field* p : {f_.prim_u[0], f_.prim_u[1], f_.prim_u[2], f_.prim_p, f_.prim_T})
        fill_halos_periodic(*p);

    // 2. Default strategy, viscous runs: stage the 12 first-derivative work
    //    arrays and refresh their halos (they get re-differentiated).
    const bool staged = f_.strategy == ResidualStrategy::Default && params_.viscous;
    if (staged) {
        static constexpr Dir dirs[3] = {Dir::X, Dir::Y, Dir::Z};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                ddx1(*f_.prim_u[static_cast<std::size_t>(i)], dirs[j], plan.staging, plan.mode,
                     *f_.grad_u[static_cast<std::size_t>(i * 3 + j)]);
                fill_halos_periodic(*f_.grad_u[static_cast<std::size_t>(i * 3 + j)]);
            }
        for (int j = 0; j < 3; ++j) {
            ddx1(*f_.prim_T, dirs[j], plan.staging, plan.mode,
                 *f_.grad_T[static_cast<std::size_t>(j)]);
            fill_halos_periodic(*f_.grad_T[static_cast<std::size_t>(j)]);
        }
    }

    // 3. fused residual kernel at residual compute precision
    const GridSpec& g = st.q[0]->grid();
    const auto sy = st.q[0]->stride(1);
    const auto sz = st.q[0]->stride(2);
    std::array<double*, 5> out;
    for (int i = 0; i < 5; ++i)
        out[static_cast<std::size_t>(i)] = st.r[static_cast<std::size_t>(i)]->origin();

    const std::array<const Field*, 3> uc = {f_.prim_u[0], f_.prim_u[1], f_.prim_u[2]};

    with_arith(plan.residual, plan.mode, [&](auto a) {
        using A = decltype(a);
        auto fill_common = [&](auto& c) {
            c.conv = make_conv_ctx(a, qc, uc, split_);
            c.p = CView::of(*f_.prim_p, A::compute);
            c.viscous = params_.viscous;
            for (int i = 0; i < 5; ++i)
                c.store_kind[i] = st.r[static_cast<std::size_t>(i)]->storage();
            c.visc.r = c.conv.r;
            const double h = g.spacing();
            c.visc.r2 = A::cvt(1.0 / (12.0 * h * h));
            c.visc.inv_re = A::cvt(1.0 / params_.reynolds);
            c.visc.third = A::cvt(1.0 / 3.0);
            c.visc.two_thirds = A::cvt(2.0 / 3.0);
            c.visc.kappa = A::cvt(1.0 / ((params_.gamma - 1.0) * params_.mach * params_.mach *
                                         params_.reynolds * params_.prandtl));
            for (int i = 0; i < 3; ++i) {
                c.visc.u[i] = CView::of(*f_.prim_u[static_cast<std::size_t>(i)], A::compute);
                c.visc.s[i] = st.q[0]->stride(i);
            }
        };
        if (staged) {
            RCtx<StagedGrads> c;
            fill_common(c);
            for (int i = 0; i < 9; ++i)
                c.visc.grads.du[i] = CView::of(*f_.grad_u[static_cast<std::size_t>(i)], A::compute);
            for (int i = 0; i < 3; ++i)
                c.visc.grads.dT[i] = CView::of(*f_.grad_T[static_cast<std::size_t>(i)], A::compute);
            parallel_slabs(g.n, threads,
                           [&](int k0, int k1) { residual_slab(a, c, g, sy, sz, out, k0, k1); });
        } else {
            RCtx<InlineGrads> c;
            fill_common(c);
            for (int i = 0; i < 3; ++i)
                c.visc.grads.u[i] = CView::of(*f_.prim_u[static_cast<std::size_t>(i)], A::compute);
            c.visc.grads.T = CView::of(*f_.prim_T, A::compute);
            for (int i = 0; i < 3; ++i) c.visc.grads.s[i] = st.q[0]->stride(i);
            c.visc.grads.r = c.conv.r;
            parallel_slabs(g.n, threads,
                           [&](int k0, int k1) { residual_slab(a, c, g, sy, sz, out, k0, k1); });
        }
    });
    for (Field* r : st.r) r->note_interior_write();

    // 4. divergence signal on nonfinite residuals
    for (int c = 0; c < 5; ++c) {
        Field& r = *st.r[static_cast<std::size_t>(c)];
        if (!interior_all_finite(r, threads)) {
            for (int k = 0; k < g.n; ++k)
                for (int j = 0; j < g.n; ++j)
                    for (int i = 0; i < g.n; ++i)
                        if (!std::isfinite(r(i, j, k)))
                            return DivergenceEvent{"nonfinite residual", i, j, k};
        }
    }
    return std::nullopt;
}

}  // namespace mpfd
