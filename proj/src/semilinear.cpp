#include "idescope/semilinear.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "idescope/errors.hpp"

namespace idescope {

Eigen::MatrixXd transition_matrix(const LinearPart& lin, std::int64_t t, std::int64_t tau) {
    if (tau > t) throw SchemaError("transition_matrix requires tau <= t");
    Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(lin.dim, lin.dim);
    for (std::int64_t s = tau; s < t; ++s) phi = lin.matrix(s) * phi;
    return phi;
}

ModelSpec semilinear_model(const LinearPart& lin, NonlinearPart nonlin, std::string name,
                           Domain domain) {
    ModelSpec model;
    model.name = std::move(name);
    model.dim = lin.dim;
    model.domain = domain;
    model.rhs = [matrix = lin.matrix, nonlin = std::move(nonlin)](std::int64_t t, const State& u) {
        State v = matrix(t) * u;
        if (nonlin) v += nonlin(t, u);
        return v;
    };
    return model;
}

State voc_evolve(const LinearPart& lin, const NonlinearPart& nonlin, std::int64_t tau,
                 std::int64_t t, const State& u) {
    if (tau > t) throw SchemaError("voc_evolve requires tau <= t");
    State acc = transition_matrix(lin, t, tau) * u;
    if (nonlin) {
        State phi_s = u;
        for (std::int64_t s = tau; s < t; ++s) {
            acc += transition_matrix(lin, t, s + 1) * nonlin(s, phi_s);
            if (s + 1 < t) phi_s = lin.matrix(s) * phi_s + nonlin(s, phi_s);
        }
    }
    return acc;
}

double gronwall_bound(const SemilinearParams& p, std::int64_t tau, std::int64_t t, double norm_u) {
    if (tau > t) throw SchemaError("gronwall_bound requires tau <= t");
    if (!(p.K >= 1.0)) throw SchemaError("gronwall_bound requires K >= 1");
    // The closed form unrolls the recursion r <- (alpha + K a) r + K b with
    // r(tau) = K ||u||, so evaluate the recursion directly.
    double r = p.K * norm_u;
    for (std::int64_t s = tau; s < t; ++s) {
        r = (p.alpha(s) + p.K * p.a(s)) * r + p.K * p.b(s);
    }
    return r;
}

double absorbing_radius(const SemilinearParams& p, std::int64_t tau, double rho, Direction dir,
                        int truncation, double tol) {
    if (!(p.K >= 1.0)) throw SchemaError("absorbing_radius requires K >= 1");
    if (truncation < 1) throw SchemaError("absorbing_radius requires truncation >= 1");
    double sum = 0.0;
    double product = 1.0;  // running decay product
    if (dir == Direction::Pullback) {
        // R_tau = K sum_{s < tau} b_s prod_{r=s+1}^{tau-1} (alpha_r + K a_r),
        // accumulated from s = tau - 1 downward.
        for (int k = 1; k <= truncation; ++k) {
            const std::int64_t s = tau - k;
            const double increment = p.b(s) * product;
            sum += increment;
            product *= p.alpha(s) + p.K * p.a(s);
            if (p.K * increment < tol && product < 1.0) return rho + p.K * sum;
        }
    } else {
        // Forward radius: S_{t+1} = (alpha_t + K a_t) S_t + b_t converges to
        // the limit superior of the inhomogeneous sums.
        double prev = 0.0;
        for (int k = 0; k < truncation; ++k) {
            const std::int64_t s = tau + k;
            const double factor = p.alpha(s) + p.K * p.a(s);
            sum = factor * sum + p.b(s);
            product *= factor;
            if (p.K * std::abs(sum - prev) < tol && product < 1.0) return rho + p.K * sum;
            prev = sum;
        }
    }
    throw ConvergenceError("absorbing_radius: series did not settle within truncation",
                           rho + p.K * sum);
}

double darbo_bound(const ModelSpec& model, std::int64_t tau, std::int64_t t) {
    if (tau > t) throw SchemaError("darbo_bound requires tau <= t");
    if (!model.darbo) {
        throw SchemaError(model.name + ": model declares no Darbo constants");
    }
    double product = 1.0;
    for (std::int64_t s = tau; s < t; ++s) product *= model.darbo(s);
    return product;
}

SpectralEstimate spectral_radius_estimate(const Eigen::MatrixXd& m, int max_iter, double tol) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw SchemaError("spectral_radius_estimate requires a nonempty square matrix");
    }
    SpectralEstimate est;
    Eigen::VectorXd x = Eigen::VectorXd::Ones(m.rows());
    double lambda = 0.0;
    for (int k = 1; k <= max_iter; ++k) {
        Eigen::VectorXd y = m * x;
        const double norm = y.lpNorm<Eigen::Infinity>();
        est.iterations = k;
        if (norm == 0.0) {
            est.value = 0.0;
            est.converged = true;
            return est;
        }
        const double next = norm / x.lpNorm<Eigen::Infinity>();
        x = y / norm;
        if (k > 1 && std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next))) {
            est.value = next;
            est.converged = true;
            return est;
        }
        lambda = next;
    }
    est.value = lambda;
    est.converged = false;
    return est;
}

} // namespace idescope
