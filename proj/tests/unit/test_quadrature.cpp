#include "doctest.h"

#include <cmath>
#include <functional>

#include "idescope/errors.hpp"
#include "idescope/quadrature.hpp"

using namespace idescope;

namespace {

double integrate(const Quadrature& q, const std::function<double(double)>& f) {
    double sum = 0.0;
    for (int i = 0; i < q.size(); ++i) sum += q.weights[i] * f(q.nodes[i]);
    return sum;
}

} // namespace

TEST_CASE("two-point Gauss-Legendre rule") {
    const Quadrature q = build_quadrature(-1.0, 1.0, 2, QuadratureRule::GaussLegendre);
    REQUIRE(q.size() == 2);
    const double node = 1.0 / std::sqrt(3.0);
    CHECK(q.nodes[0] == doctest::Approx(-node).epsilon(1e-15));
    CHECK(q.nodes[1] == doctest::Approx(node).epsilon(1e-15));
    CHECK(q.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(q.weights[1] == doctest::Approx(1.0).epsilon(1e-15));
    // Exact through degree three.
    CHECK(integrate(q, [](double x) { return x * x; }) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(std::abs(integrate(q, [](double x) { return x * x * x; })) <= 1e-16);
}

TEST_CASE("Gauss-Legendre converges fast on smooth integrands") {
    const Quadrature q = build_quadrature(0.0, 1.0, 20, QuadratureRule::GaussLegendre);
    CHECK(integrate(q, [](double x) { return std::exp(x); }) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
}

TEST_CASE("trapezoid rule weights") {
    const Quadrature q2 = build_quadrature(-1.0, 1.0, 2, QuadratureRule::Trapezoid);
    CHECK(q2.weights[0] == 1.0);
    CHECK(q2.weights[1] == 1.0);
    CHECK(q2.nodes[0] == -1.0);
    CHECK(q2.nodes[1] == 1.0);

    const Quadrature q5 = build_quadrature(0.0, 2.0, 5, QuadratureRule::Trapezoid);
    double total = 0.0;
    for (double w : q5.weights) total += w;
    CHECK(total == doctest::Approx(q5.length()).epsilon(1e-15));
    CHECK(q5.weights[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(q5.weights[2] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("midpoint rule centres the cells") {
    const Quadrature q = build_quadrature(0.0, 2.0, 4, QuadratureRule::Midpoint);
    REQUIRE(q.size() == 4);
    CHECK(q.nodes[0] == 0.25);
    CHECK(q.nodes[3] == 1.75);
    for (double w : q.weights) CHECK(w == 0.5);
    // Exact for affine integrands.
    CHECK(integrate(q, [](double x) { return 3.0 * x - 1.0; }) ==
          doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("explicit rules validate their data") {
    const Quadrature q = explicit_quadrature({0.0, 0.5, 2.0}, {0.1, 0.2, 0.3});
    CHECK(q.a == 0.0);
    CHECK(q.b == 2.0);
    CHECK(q.length() == 2.0);

    CHECK_THROWS_AS(explicit_quadrature({0.5, 0.0}, {0.1, 0.1}), SchemaError);
    CHECK_THROWS_AS(explicit_quadrature({0.0, 1.0}, {0.1, 0.0}), SchemaError);
    CHECK_THROWS_AS(explicit_quadrature({0.0, 1.0}, {0.1}), SchemaError);
}

TEST_CASE("rule construction validates interval and node count") {
    CHECK_THROWS_AS(build_quadrature(1.0, 1.0, 4, QuadratureRule::Trapezoid), SchemaError);
    CHECK_THROWS_AS(build_quadrature(0.0, 1.0, 0, QuadratureRule::Midpoint), SchemaError);
}

TEST_CASE("rule names round-trip through the parser") {
    for (QuadratureRule r : {QuadratureRule::Midpoint, QuadratureRule::Trapezoid,
                             QuadratureRule::GaussLegendre})
        CHECK(parse_rule(rule_name(r)) == r);
    CHECK_THROWS_AS(parse_rule("simpson"), SchemaError);
}
