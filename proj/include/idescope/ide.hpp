#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "idescope/model.hpp"
#include "idescope/quadrature.hpp"

namespace idescope {

/// Nemytskii (pointwise growth) operator G_t(u)(x) = g_t(x, u(x)) with the
/// declared envelope |g_t(x, z)| <= gamma_t and Lipschitz constant ell_t.
struct GrowthSpec {
    std::function<double(std::int64_t, double, double)> g;  // (t, x, z)
    std::function<double(std::int64_t)> gamma;
    std::function<double(std::int64_t)> ell;
};

/// Urysohn integral operator K_t(u)(x) = int k_t(x, y, u(y)) dmu(y).
///
/// Catalog kernels are separable, k_t(x, y, z) = base(x, y) psi_t(y, z) plus
/// an additive source term src_t(x) / mu(Omega). The base factor may carry a
/// derivative kink on the diagonal (Laplace kernels); its node rows are then
/// integrated with cell-splitting product weights so that discretized row
/// sums agree with the analytic kernel integrals.
struct KernelSpec {
    // separable form
    std::function<double(double, double)> base;              // (x, y)
    bool base_diagonal_kink = false;
    std::function<double(std::int64_t, double, double)> psi; // (t, y, z)
    std::function<double(std::int64_t, double)> source;      // (t, x), may be null
    // fully general form (plain Nystrom sum); used when base is null
    std::function<double(std::int64_t, double, double, double)> k;  // (t, x, y, z)

    // envelopes: |psi_t(y, z)| <= psi_env_t * envelope_weight(y) and
    // |psi_t(y,z) - psi_t(y,zbar)| <= psi_lip_t * envelope_weight(y) |z-zbar|
    std::function<double(std::int64_t)> psi_env;
    std::function<double(std::int64_t)> psi_lip;
    std::function<double(double)> envelope_weight;            // defaults to 1

    // closed form x -> int_a^b base(x, y) dy, when one exists; enables the
    // analytic row-bound flavour in hypothesis_bounds
    std::function<double(double)> base_row_integral;
};

/// Kernel matrix W with rows W(i, j) ~ int base(x_i, y) hat_j(y) dy built by
/// product integration against the hat basis of the node grid; cells crossed
/// by the diagonal kink are split there. Row sums reproduce the analytic row
/// integrals of `base` up to the smoothness of the remaining factors.
Eigen::MatrixXd kernel_matrix(const KernelSpec& kernel, const Quadrature& q);

State nemytskii_apply(const GrowthSpec& g, const Quadrature& q, std::int64_t t, const State& u);

/// Discretized Urysohn operator; `w` must be kernel_matrix(kernel, q) for
/// separable kernels and is ignored for general ones.
State urysohn_apply(const KernelSpec& kernel, const Quadrature& q, const Eigen::MatrixXd& w,
                    std::int64_t t, const State& u);

struct IdeParts {
    std::shared_ptr<const GrowthSpec> growth;     // may be null
    std::shared_ptr<const KernelSpec> kernel;
    std::shared_ptr<const Quadrature> quadrature;
    std::shared_ptr<const Eigen::MatrixXd> matrix;
};

/// Assembles u_{t+1} = G_t(u_t) + K_t(u_t) over the node grid as a ModelSpec
/// with nonnegative-cone domain.
ModelSpec ide_model(std::string name, const GrowthSpec* growth, KernelSpec kernel,
                    Quadrature quadrature);

/// Hypothesis constants of the discretized operators at time t.
struct HypothesisBounds {
    double gamma = 0.0;        // sup |g_t|
    double ell = 0.0;          // Lipschitz constant of g_t
    double rho = 0.0;          // max_i int kappa_t(x_i, y) dy (split-rule rows)
    double lambda_sup = 0.0;   // max_i int lambda_t(x_i, y) dy
    double rho_plain = 0.0;    // max_i sum_j w_j kappa_t(x_i, x_j) (bare weights)
    std::optional<double> rho_analytic;  // closed form, when the kernel has one
};

HypothesisBounds hypothesis_bounds(const ModelSpec& ide, std::int64_t t);

enum class AbsorbingVariant {
    /// Dissipative growth: fibre radius gamma_{t-1} + rho_{t-1}, absorption
    /// time one.
    GrowthBall,
    /// Vanishing growth (pure Urysohn): radius R = sup_t rho_t over the
    /// window, absorption time two; rho_t is evaluated from the assembled
    /// kernel matrix rows so the bound holds for the discretized iteration.
    ImageBall
};

/// Absorbing-set radius at time t for the requested variant, computed over
/// the time window [window_lo, window_hi] for the sup in the ImageBall case.
double absorbing_bound(const ModelSpec& ide, std::int64_t t, AbsorbingVariant variant,
                       std::int64_t window_lo = 0, std::int64_t window_hi = 0);

struct FixedPointResult {
    State u_star;
    std::vector<double> diffs;     // ||u_{k+1} - u_k||
    std::vector<double> ratios;    // successive diff ratios above noise floor
    int iterations = 0;
    bool converged = false;
};

/// Picard iteration of an autonomous model from u0; ratios are recorded while
/// the previous difference exceeds `ratio_floor`.
FixedPointResult fixed_point_iterate(const ModelSpec& model, const State& u0, double tol,
                                     int max_iter, double ratio_floor = 1e-11);

/// Contraction smallness test 2 (1 + e^{-2}) alpha K < 1 - alpha with the
/// default K = exp(1 / (1 - alpha)).
bool ricker_smallness_check(double alpha);
bool ricker_smallness_check(double alpha, double K);

/// Slack (1 - alpha) - 2 (1 + e^{-2}) alpha K of the smallness condition;
/// positive iff the check passes, approaching 1 as alpha -> 0.
double ricker_smallness_margin(double alpha);
double ricker_smallness_margin(double alpha, double K);

struct RefineRow {
    int n = 0;
    double value = 0.0;
    std::optional<double> diff;  // |value - previous value|
};

/// Quadrature refinement study of a scalar observable.
std::vector<RefineRow> refine_and_compare(const std::function<double(int)>& observable,
                                          const std::vector<int>& n_values);

} // namespace idescope
