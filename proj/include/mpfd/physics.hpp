#pragma once
// Residual evaluation for the non-dimensional compressible Navier-Stokes
// equations: selectable convective split form, viscous/inviscid switch, and
// the two work-array staging strategies whose storage rounding differs under
// mixed precision.
//
// Governing form (constant viscosity mu = 1 absorbed into 1/Re):
//   R_rho   = -C(1)
//   R_rhoui = -C(u_i) - dp/dx_i + (1/Re)[sum_j d2(u_i)/dx_j^2 + (1/3) d(div u)/dx_i]
//   R_rhoE  = -C(E) - d(p u_j)/dx_j + d(u_i tau_ij)/dx_j - d(q_j)/dx_j
//   tau_ij  = (1/Re)(du_i/dx_j + du_j/dx_i - (2/3) delta_ij du_k/dx_k)
//   q_j     = -(1/((gamma-1) M^2 Re Pr)) dT/dx_j
// Split treatment applies only to the convective form C = d(rho u_j phi)/dx_j.

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "mpfd/field.hpp"
#include "mpfd/registry.hpp"
#include "mpfd/stencil.hpp"

namespace mpfd {

struct FlowParams {
    double mach = 0.5;
    double reynolds = 800.0;
    double prandtl = 0.72;
    double gamma = 1.4;
    bool viscous = true;

    void validate() const;  // throws ConfigError
};

/// Seven-coefficient triple-product expansion of C = d(rho u_j phi)/dx_j:
///   alpha*d(r u p) + beta_rho*r*d(u p) + beta_u*u*d(r p) + beta_phi*p*d(r u)
///   + gamma_rho*u p*d(r) + gamma_u*r p*d(u) + gamma_phi*r u*d(p)
/// (r = rho, u = u_j, p = phi, d = d/dx_j).
struct SplitCoefficients {
    double alpha = 1.0;
    double beta_rho = 0.0;
    double beta_u = 0.0;
    double beta_phi = 0.0;
    double gamma_rho = 0.0;
    double gamma_u = 0.0;
    double gamma_phi = 0.0;

    /// The three product-rule consistency sums; each must equal 1 exactly.
    std::array<double, 3> consistency_sums() const {
        return {alpha + beta_u + beta_phi + gamma_rho,
                alpha + beta_rho + beta_phi + gamma_u,
                alpha + beta_rho + beta_u + gamma_phi};
    }
    bool is_consistent() const {
        const auto s = consistency_sums();
        return s[0] == 1.0 && s[1] == 1.0 && s[2] == 1.0;
    }
};

/// Presets: Divergence, Feiereisen (pair rho u | phi), Blaisdell (pair
/// rho phi | u), Kok (pair rho | u phi), KGP (all seven 1/4).
SplitCoefficients split_preset(std::string_view name);

enum class ResidualStrategy : std::uint8_t {
    Default = 0,    // stage primitives and all needed first derivatives as wk arrays
    Storesome = 1,  // stage only u, v, w, p, T; derivatives inline
};

const char* to_string(ResidualStrategy s);
ResidualStrategy parse_strategy(std::string_view s);  // "default" | "storesome"

/// phi selector for the convective form; enum values equal the index of the
/// conservative field holding rho*phi.
enum class PhiSelector : int { One = 0, U = 1, V = 2, W = 3, E = 4 };

/// Conservative vector Q = (rho, rho u, rho v, rho w, rho E), low-storage RK
/// temporaries, and residuals.
struct State {
    std::array<Field*, 5> q{};
    std::array<Field*, 5> qt{};
    std::array<Field*, 5> r{};
};

struct DivergenceEvent {
    std::string what;
    int i = 0, j = 0, k = 0;
    double time = -1.0;
    long iteration = -1;
    int substep = -1;
};

/// Resolved compute precision of every kernel under a configuration (each
/// kernel computes at the storage precision of its output class).
struct KernelPlan {
    PrecisionKind primitives;
    PrecisionKind staging;
    PrecisionKind residual;
    PrecisionKind qt_update;
    PrecisionKind q_update;
    EmulationMode mode;
};

inline KernelPlan make_kernel_plan(const PrecisionConfig& c) {
    return {c.wk_arrays, c.wk_arrays, c.residuals, c.rk_arrays, c.q_vector, c.emulation};
}

/// u_i = (rho u_i)/rho, e = E - k, p = (gamma-1) rho e, T = gamma M^2 p / rho.
/// Computes at `compute` under `mode`; outputs round to their own storage.
/// Nonpositive or nonfinite density is reported as a divergence signal (with
/// the first detection location in scan order), not an exception.
std::optional<DivergenceEvent> primitives_from_conservatives(
    const std::array<const Field*, 5>& q, const FlowParams& params, PrecisionKind compute,
    EmulationMode mode, Field& u, Field& v, Field& w, Field& p, Field& T, Field* e_out = nullptr,
    int threads = 1);

struct ConvectiveInputs {
    std::array<const Field*, 5> q{};
    std::array<const Field*, 3> u{};  // staged velocity primitives
};

/// One direction's contribution to C for the selected phi, written to `out`.
/// For phi = 1 the terms degenerate (d(phi) = 0, phi = 1) and the continuity
/// equation uses the same machinery. Inconsistent coefficients raise
/// ConfigError.
void convective_split(Dir j, PhiSelector phi, const SplitCoefficients& coeffs,
                      const ConvectiveInputs& in, PrecisionKind compute, EmulationMode mode,
                      Field& out, int threads = 1);

/// The solver's field set: state vectors plus the strategy's work arrays,
/// all registered in one census-carrying registry.
struct SolverFields {
    FieldRegistry registry;
    State state;
    std::array<Field*, 3> prim_u{};
    Field* prim_p = nullptr;
    Field* prim_T = nullptr;
    std::array<Field*, 9> grad_u{};  // Default strategy only: du_i/dx_j, row-major i*3+j
    std::array<Field*, 3> grad_T{};  // Default strategy only
    ResidualStrategy strategy = ResidualStrategy::Default;
};

SolverFields make_solver_fields(const GridSpec& grid, const PrecisionConfig& config,
                                ResidualStrategy strategy);

/// Full residual pipeline: primitives staging, halo refresh, optional
/// derivative staging (Default), then the fused residual kernel writing R.
/// Pre: Q halos fresh. Returns a divergence signal if primitives fail or a
/// nonfinite value lands in R.
class ResidualEvaluator {
  public:
    ResidualEvaluator(SolverFields& fields, const FlowParams& params,
                      const SplitCoefficients& split, const PrecisionConfig& config);

    std::optional<DivergenceEvent> evaluate(int threads = 1);

    const FlowParams& params() const { return params_; }
    const SplitCoefficients& split() const { return split_; }
    const PrecisionConfig& precision() const { return config_; }

  private:
    SolverFields& f_;
    FlowParams params_;
    SplitCoefficients split_;
    PrecisionConfig config_;
};

}  // namespace mpfd
