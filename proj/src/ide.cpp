#include "idescope/ide.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "idescope/errors.hpp"

namespace idescope {

namespace {

// 8-point Gauss-Legendre nodes/weights on [-1, 1]; plenty for the smooth
// kernel pieces once every cell is split at the diagonal kink.
constexpr int kSubOrder = 8;
constexpr double kGlNode[kSubOrder] = {
    -0.96028985649753623, -0.79666647741362674, -0.52553240991632899,
    -0.18343464249564980, 0.18343464249564980,  0.52553240991632899,
    0.79666647741362674,  0.96028985649753623};
constexpr double kGlWeight[kSubOrder] = {
    0.10122853629037626, 0.22238103445337447, 0.31370664587788729,
    0.36268378337836198, 0.36268378337836198, 0.31370664587788729,
    0.22238103445337447, 0.10122853629037626};

double hat_value(double y, double left, double center, double right) {
    if (y <= center) {
        if (center == left) return 1.0;
        return (y - left) / (center - left);
    }
    if (center == right) return 1.0;
    return (right - y) / (right - center);
}

// Accumulates int_{lo}^{hi} base(x, y) * hat_j(y) dy onto the two hats that
// are supported on the cell [lo, hi] = [x_j, x_{j+1}].
void accumulate_cell(const KernelSpec& kernel, double x, double lo, double hi, double node_lo,
                     double node_hi, double& w_lo, double& w_hi) {
    if (hi <= lo) return;
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    for (int g = 0; g < kSubOrder; ++g) {
        const double y = mid + half * kGlNode[g];
        const double v = kernel.base(x, y) * half * kGlWeight[g];
        const double frac = (node_hi == node_lo) ? 1.0 : (y - node_lo) / (node_hi - node_lo);
        w_hi += v * frac;
        w_lo += v * (1.0 - frac);
    }
}

// Edge strips [a, x_0] and [x_{n-1}, b] that no hat covers (midpoint and
// Gauss grids); the interpolant is extended by the nearest node value there.
void accumulate_strip(const KernelSpec& kernel, double x, double lo, double hi, double& w) {
    if (hi <= lo) return;
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    for (int g = 0; g < kSubOrder; ++g) {
        const double y = mid + half * kGlNode[g];
        w += kernel.base(x, y) * half * kGlWeight[g];
    }
}

void split_at_kink(const KernelSpec& kernel, double x, double lo, double hi, double node_lo,
                   double node_hi, double& w_lo, double& w_hi) {
    if (kernel.base_diagonal_kink && x > lo && x < hi) {
        accumulate_cell(kernel, x, lo, x, node_lo, node_hi, w_lo, w_hi);
        accumulate_cell(kernel, x, x, hi, node_lo, node_hi, w_lo, w_hi);
    } else {
        accumulate_cell(kernel, x, lo, hi, node_lo, node_hi, w_lo, w_hi);
    }
}

const KernelSpec& require_kernel(const ModelSpec& model) {
    if (!model.ide || !model.ide->kernel)
        throw SchemaError("model '" + model.name + "' has no integral kernel attached");
    return *model.ide->kernel;
}

double envelope_at(const KernelSpec& kernel, double y) {
    return kernel.envelope_weight ? kernel.envelope_weight(y) : 1.0;
}

// max_i sum_j W(i, j) * envelope_weight(x_j), the discrete row integral of
// the kernel envelope. Summed left to right like the operator apply.
double max_enveloped_row(const KernelSpec& kernel, const Quadrature& q,
                         const Eigen::MatrixXd& w) {
    const int n = q.size();
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += w(i, j) * envelope_at(kernel, q.nodes[j]);
        worst = std::max(worst, row);
    }
    return worst;
}

double max_enveloped_row_plain(const KernelSpec& kernel, const Quadrature& q) {
    const int n = q.size();
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j)
            row += q.weights[j] * kernel.base(q.nodes[i], q.nodes[j]) *
                   envelope_at(kernel, q.nodes[j]);
        worst = std::max(worst, row);
    }
    return worst;
}

double source_norm(const KernelSpec& kernel, const Quadrature& q, std::int64_t t) {
    if (!kernel.source) return 0.0;
    double worst = 0.0;
    for (double x : q.nodes) worst = std::max(worst, std::abs(kernel.source(t, x)));
    return worst;
}

double weight_sum(const Quadrature& q) {
    double s = 0.0;
    for (double w : q.weights) s += w;
    return s;
}

}  // namespace

Eigen::MatrixXd kernel_matrix(const KernelSpec& kernel, const Quadrature& q) {
    if (!kernel.base) throw SchemaError("kernel_matrix requires a separable kernel base");
    const int n = q.size();
    if (n < 2) throw SchemaError("kernel_matrix requires at least two nodes");
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    const auto& x = q.nodes;
    for (int i = 0; i < n; ++i) {
        double edge_lo = 0.0, edge_hi = 0.0;
        accumulate_strip(kernel, x[i], q.a, x[0], edge_lo);
        accumulate_strip(kernel, x[i], x[n - 1], q.b, edge_hi);
        w(i, 0) += edge_lo;
        w(i, n - 1) += edge_hi;
        for (int j = 0; j + 1 < n; ++j) {
            double w_lo = 0.0, w_hi = 0.0;
            split_at_kink(kernel, x[i], x[j], x[j + 1], x[j], x[j + 1], w_lo, w_hi);
            w(i, j) += w_lo;
            w(i, j + 1) += w_hi;
        }
    }
    return w;
}

State nemytskii_apply(const GrowthSpec& g, const Quadrature& q, std::int64_t t, const State& u) {
    if (u.size() != q.size()) throw SchemaError("state/grid size mismatch in growth operator");
    State out(u.size());
    for (int i = 0; i < q.size(); ++i) out[i] = g.g(t, q.nodes[i], u[i]);
    return out;
}

State urysohn_apply(const KernelSpec& kernel, const Quadrature& q, const Eigen::MatrixXd& w,
                    std::int64_t t, const State& u) {
    const int n = q.size();
    if (u.size() != n) throw SchemaError("state/grid size mismatch in integral operator");
    State out = State::Zero(n);
    if (kernel.base) {
        State f(n);
        for (int j = 0; j < n; ++j) f[j] = kernel.psi(t, q.nodes[j], u[j]);
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += w(i, j) * f[j];
            out[i] = acc;
        }
    } else if (kernel.k) {
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j)
                acc += q.weights[j] * kernel.k(t, q.nodes[i], q.nodes[j], u[j]);
            out[i] = acc;
        }
    } else {
        throw SchemaError("kernel spec has neither a separable base nor a general kernel");
    }
    if (kernel.source) {
        const double scale = weight_sum(q) / q.length();
        for (int i = 0; i < n; ++i) out[i] += kernel.source(t, q.nodes[i]) * scale;
    }
    return out;
}

ModelSpec ide_model(std::string name, const GrowthSpec* growth, KernelSpec kernel,
                    Quadrature quadrature) {
    auto parts = std::make_shared<IdeParts>();
    if (growth) parts->growth = std::make_shared<GrowthSpec>(*growth);
    parts->quadrature = std::make_shared<Quadrature>(std::move(quadrature));
    auto kernel_ptr = std::make_shared<KernelSpec>(std::move(kernel));
    parts->kernel = kernel_ptr;
    if (kernel_ptr->base)
        parts->matrix =
            std::make_shared<Eigen::MatrixXd>(kernel_matrix(*kernel_ptr, *parts->quadrature));
    else
        parts->matrix = std::make_shared<Eigen::MatrixXd>(
            Eigen::MatrixXd::Zero(parts->quadrature->size(), parts->quadrature->size()));

    ModelSpec model;
    model.name = std::move(name);
    model.dim = parts->quadrature->size();
    model.domain = Domain::NonnegativeCone;
    model.quadrature = parts->quadrature;
    model.ide = parts;
    auto shared = std::shared_ptr<const IdeParts>(parts);
    model.rhs = [shared](std::int64_t t, const State& u) {
        State out = urysohn_apply(*shared->kernel, *shared->quadrature, *shared->matrix, t, u);
        if (shared->growth) out += nemytskii_apply(*shared->growth, *shared->quadrature, t, u);
        return out;
    };
    return model;
}

HypothesisBounds hypothesis_bounds(const ModelSpec& ide, std::int64_t t) {
    const KernelSpec& kernel = require_kernel(ide);
    const Quadrature& q = *ide.ide->quadrature;
    HypothesisBounds out;
    if (ide.ide->growth) {
        out.gamma = ide.ide->growth->gamma ? ide.ide->growth->gamma(t) : 0.0;
        out.ell = ide.ide->growth->ell ? ide.ide->growth->ell(t) : 0.0;
    }
    if (!kernel.base) {
        if (!kernel.psi_env || !kernel.psi_lip)
            throw SchemaError("general kernels need declared envelope constants");
        // No separable structure: fall back to declared constants against the
        // bare quadrature weights.
        double row = 0.0;
        for (int j = 0; j < q.size(); ++j)
            row += q.weights[j] * envelope_at(kernel, q.nodes[j]);
        out.rho = kernel.psi_env(t) * row;
        out.rho_plain = out.rho;
        out.lambda_sup = kernel.psi_lip(t) * row;
        return out;
    }
    if (!kernel.psi_env || !kernel.psi_lip)
        throw SchemaError("kernel spec lacks envelope constants for bound computation");
    const double env = kernel.psi_env(t);
    const double lip = kernel.psi_lip(t);
    const double row_max = max_enveloped_row(kernel, q, *ide.ide->matrix);
    const double row_max_plain = max_enveloped_row_plain(kernel, q);
    const double src = source_norm(kernel, q, t);
    const double src_scale = weight_sum(q) / q.length();
    out.rho = env * row_max + src * src_scale;
    out.rho_plain = env * row_max_plain + src * src_scale;
    out.lambda_sup = lip * row_max;
    if (kernel.base_row_integral) {
        const int m = 4096;
        double sup = 0.0;
        for (int i = 0; i <= m; ++i) {
            const double x = q.a + (q.b - q.a) * static_cast<double>(i) / m;
            double val = env * kernel.base_row_integral(x);
            if (kernel.source) val += std::abs(kernel.source(t, x));
            sup = std::max(sup, val);
        }
        out.rho_analytic = sup;
    }
    return out;
}

double absorbing_bound(const ModelSpec& ide, std::int64_t t, AbsorbingVariant variant,
                       std::int64_t window_lo, std::int64_t window_hi) {
    switch (variant) {
        case AbsorbingVariant::GrowthBall: {
            if (!ide.time_domain.step_admissible(t - 1))
                throw ConstraintError("absorbing bound needs the step into time t");
            HypothesisBounds hb = hypothesis_bounds(ide, t - 1);
            return hb.gamma + hb.rho;
        }
        case AbsorbingVariant::ImageBall: {
            if (window_hi < window_lo)
                throw SchemaError("absorbing bound window is empty");
            double sup = 0.0;
            for (std::int64_t s = window_lo; s <= window_hi; ++s)
                sup = std::max(sup, hypothesis_bounds(ide, s).rho);
            return sup;
        }
    }
    throw SchemaError("unknown absorbing-set variant");
}

FixedPointResult fixed_point_iterate(const ModelSpec& model, const State& u0, double tol,
                                     int max_iter, double ratio_floor) {
    FixedPointResult out;
    State u = u0;
    for (int k = 0; k < max_iter; ++k) {
        State next = step(model, 0, u);
        const double diff = (next - u).lpNorm<Eigen::Infinity>();
        if (!out.diffs.empty() && out.diffs.back() > ratio_floor)
            out.ratios.push_back(diff / out.diffs.back());
        out.diffs.push_back(diff);
        u = std::move(next);
        out.iterations = k + 1;
        if (diff < tol) {
            out.converged = true;
            break;
        }
    }
    out.u_star = u;
    if (!out.converged)
        throw ConvergenceError("fixed point iteration did not reach tol " + std::to_string(tol),
                               out.diffs.empty() ? 0.0 : out.diffs.back());
    return out;
}

bool ricker_smallness_check(double alpha, double K) {
    if (!(alpha > 0.0) || !(K > 0.0)) throw SchemaError("smallness check needs alpha, K > 0");
    const double lhs = 2.0 * (1.0 + std::exp(-2.0)) * alpha * K;
    return lhs < 1.0 - alpha;
}

bool ricker_smallness_check(double alpha) {
    if (!(alpha > 0.0)) throw SchemaError("smallness check needs alpha > 0");
    if (alpha >= 1.0) return false;
    return ricker_smallness_check(alpha, std::exp(1.0 / (1.0 - alpha)));
}

double ricker_smallness_margin(double alpha, double K) {
    if (!(alpha > 0.0) || !(K > 0.0)) throw SchemaError("smallness check needs alpha, K > 0");
    return (1.0 - alpha) - 2.0 * (1.0 + std::exp(-2.0)) * alpha * K;
}

double ricker_smallness_margin(double alpha) {
    if (!(alpha > 0.0)) throw SchemaError("smallness check needs alpha > 0");
    if (alpha >= 1.0) return -std::numeric_limits<double>::infinity();
    return ricker_smallness_margin(alpha, std::exp(1.0 / (1.0 - alpha)));
}

std::vector<RefineRow> refine_and_compare(const std::function<double(int)>& observable,
                                          const std::vector<int>& n_values) {
    std::vector<RefineRow> rows;
    rows.reserve(n_values.size());
    for (int n : n_values) {
        RefineRow row;
        row.n = n;
        row.value = observable(n);
        if (!rows.empty()) row.diff = std::abs(row.value - rows.back().value);
        rows.push_back(row);
    }
    return rows;
}

} // namespace idescope
