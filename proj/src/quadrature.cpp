#include "idescope/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "idescope/errors.hpp"

namespace idescope {

namespace {

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
// Legendre recurrence.
void gauss_legendre_reference(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        const double weight = 2.0 / ((1.0 - z * z) * pp * pp);
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    if (n % 2 == 1) x[n / 2] = 0.0;
}

} // namespace

Quadrature build_quadrature(double a, double b, int n, QuadratureRule rule) {
    if (!(a < b)) throw SchemaError("quadrature requires a < b");
    if (n < 1 || (rule == QuadratureRule::Trapezoid && n < 2)) {
        throw SchemaError("quadrature requires n >= 1 (>= 2 for trapezoid)");
    }
    Quadrature q;
    q.rule = rule;
    q.a = a;
    q.b = b;
    q.nodes.resize(n);
    q.weights.resize(n);
    const double length = b - a;
    switch (rule) {
        case QuadratureRule::Midpoint: {
            const double h = length / n;
            for (int i = 0; i < n; ++i) {
                q.nodes[i] = a + h * (i + 0.5);
                q.weights[i] = h;
            }
            break;
        }
        case QuadratureRule::Trapezoid: {
            const double h = length / (n - 1);
            for (int i = 0; i < n; ++i) {
                q.nodes[i] = a + h * i;
                q.weights[i] = (i == 0 || i == n - 1) ? h / 2.0 : h;
            }
            q.nodes[n - 1] = b;
            break;
        }
        case QuadratureRule::GaussLegendre: {
            std::vector<double> x, w;
            gauss_legendre_reference(n, x, w);
            const double mid = 0.5 * (a + b);
            const double half = 0.5 * length;
            for (int i = 0; i < n; ++i) {
                q.nodes[i] = mid + half * x[i];
                q.weights[i] = half * w[i];
            }
            break;
        }
        case QuadratureRule::Explicit:
            throw SchemaError("explicit rule requires explicit_quadrature");
    }
    return q;
}

Quadrature explicit_quadrature(std::vector<double> nodes, std::vector<double> weights) {
    if (nodes.empty() || nodes.size() != weights.size()) {
        throw SchemaError("explicit quadrature needs matching nonempty nodes and weights");
    }
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        if (!(nodes[i] < nodes[i + 1])) {
            throw SchemaError("explicit quadrature nodes must be strictly increasing");
        }
    }
    for (double w : weights) {
        if (!(w > 0.0)) throw SchemaError("explicit quadrature weights must be positive");
    }
    Quadrature q;
    q.rule = QuadratureRule::Explicit;
    q.a = nodes.front();
    q.b = nodes.back();
    q.nodes = std::move(nodes);
    q.weights = std::move(weights);
    return q;
}

QuadratureRule parse_rule(const std::string& name) {
    if (name == "midpoint") return QuadratureRule::Midpoint;
    if (name == "trapezoid") return QuadratureRule::Trapezoid;
    if (name == "gauss_legendre") return QuadratureRule::GaussLegendre;
    if (name == "explicit") return QuadratureRule::Explicit;
    throw SchemaError("unknown quadrature rule: " + name);
}

std::string rule_name(QuadratureRule rule) {
    switch (rule) {
        case QuadratureRule::Midpoint: return "midpoint";
        case QuadratureRule::Trapezoid: return "trapezoid";
        case QuadratureRule::GaussLegendre: return "gauss_legendre";
        case QuadratureRule::Explicit: return "explicit";
    }
    return "unknown";
}

} // namespace idescope
