#pragma once

#include <string>
#include <vector>

namespace idescope {

enum class QuadratureRule { Midpoint, Trapezoid, GaussLegendre, Explicit };

/// Weighted node set on a one dimensional habitat [a, b]. Weights are
/// analytically normalized so they sum to the habitat length.
struct Quadrature {
    QuadratureRule rule = QuadratureRule::Trapezoid;
    double a = -1.0;
    double b = 1.0;
    std::vector<double> nodes;
    std::vector<double> weights;

    int size() const { return static_cast<int>(nodes.size()); }
    double length() const { return b - a; }
};

Quadrature build_quadrature(double a, double b, int n, QuadratureRule rule);

/// Explicit weighted node set (nodes need not be uniform; weights must be
/// positive). The habitat bounds are taken from the extreme nodes.
Quadrature explicit_quadrature(std::vector<double> nodes, std::vector<double> weights);

QuadratureRule parse_rule(const std::string& name);
std::string rule_name(QuadratureRule rule);

} // namespace idescope
