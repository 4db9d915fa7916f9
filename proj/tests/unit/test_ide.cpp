#include "doctest.h"

#include <cmath>

#include "idescope/errors.hpp"
#include "idescope/ide.hpp"
#include "idescope/models.hpp"

using namespace idescope;

namespace {

// Truncated Laplace dispersal on [-L, L] with unit habitat retention.
KernelSpec laplace_kernel(double a, double L) {
    KernelSpec kernel;
    kernel.base = [a](double x, double y) { return 0.5 * a * std::exp(-a * std::abs(x - y)); };
    kernel.base_diagonal_kink = true;
    kernel.base_row_integral = [a, L](double x) {
        return 1.0 - 0.5 * (std::exp(-a * (L - x)) + std::exp(-a * (L + x)));
    };
    return kernel;
}

ModelSpec saturating_ide(int n) {
    GrowthSpec growth;
    growth.g = [](std::int64_t, double, double z) { return 3.0 * z / (1.0 + z); };
    growth.gamma = [](std::int64_t) { return 3.0; };
    growth.ell = [](std::int64_t) { return 3.0; };

    KernelSpec kernel = laplace_kernel(2.0, 10.0);
    kernel.psi = [](std::int64_t, double, double z) { return z / (1.0 + z); };
    kernel.psi_env = [](std::int64_t) { return 1.0; };
    kernel.psi_lip = [](std::int64_t) { return 1.0; };

    return ide_model("saturating", &growth, std::move(kernel),
                     build_quadrature(-10.0, 10.0, n, QuadratureRule::Trapezoid));
}

} // namespace

TEST_CASE("product-integration rows reproduce the analytic kernel integrals") {
    const ModelSpec m = spatial_bh({});
    REQUIRE(m.ide);
    REQUIRE(m.ide->kernel->base_row_integral);
    const Quadrature& q = *m.ide->quadrature;
    const Eigen::MatrixXd& w = *m.ide->matrix;
    double worst = 0.0;
    for (int i = 0; i < q.size(); ++i)
        worst = std::max(worst,
                         std::abs(w.row(i).sum() - m.ide->kernel->base_row_integral(q.nodes[i])));
    CHECK(worst <= 1e-12);
}

TEST_CASE("pointwise growth and integral operators evaluate directly") {
    const Quadrature q = build_quadrature(0.0, 2.0, 9, QuadratureRule::Trapezoid);

    GrowthSpec growth;
    growth.g = [](std::int64_t t, double x, double z) {
        return static_cast<double>(t) + x + 2.0 * z;
    };
    State u = State::Constant(q.size(), 1.5);
    const State gu = nemytskii_apply(growth, q, 2, u);
    for (int i = 0; i < q.size(); ++i) CHECK(gu[i] == 2.0 + q.nodes[i] + 3.0);

    KernelSpec flat;
    flat.k = [](std::int64_t, double, double, double) { return 1.0; };
    const State ku = urysohn_apply(flat, q, Eigen::MatrixXd(), 0, u);
    for (int i = 0; i < q.size(); ++i)
        CHECK(ku[i] == doctest::Approx(q.length()).epsilon(1e-14));
}

TEST_CASE("spatial Ricker source term switches on at t = 0") {
    const SpatialRickerParams p{};
    const ModelSpec m = spatial_ricker(p);
    const Quadrature& q = *m.quadrature;
    const State zero = State::Zero(m.dim);

    const State off = step(m, -5, zero);
    CHECK(off.lpNorm<Eigen::Infinity>() == 0.0);

    const State on = step(m, 1, zero);
    double worst = 0.0;
    for (int i = 0; i < q.size(); ++i)
        worst = std::max(worst, std::abs(on[i] - 5.0 * std::cos(q.nodes[i] / 8.0)));
    CHECK(worst <= 1e-12);
}

TEST_CASE("hypothesis constants of the spatial Beverton-Holt model") {
    const ModelSpec m = spatial_bh({});
    const HypothesisBounds hb = hypothesis_bounds(m, 0);
    CHECK(hb.gamma == 2.25);  // (1 - theta) * sup field = 0.75 * 3
    CHECK(hb.ell > 0.0);
    REQUIRE(hb.rho_analytic.has_value());
    CHECK(std::abs(hb.rho - *hb.rho_analytic) <= 1e-9);
    CHECK(hb.rho == hb.lambda_sup);
    CHECK(hb.rho <= hb.rho_plain + 1e-15);
    CHECK(hb.rho == doctest::Approx(0.74999999999998257).epsilon(1e-12));
}

TEST_CASE("growth-ball absorbing bound adds the hypothesis constants") {
    const ModelSpec m = saturating_ide(129);
    const HypothesisBounds hb = hypothesis_bounds(m, 0);
    const double bound = absorbing_bound(m, 1, AbsorbingVariant::GrowthBall);
    CHECK(bound == hb.gamma + hb.rho);
    CHECK(std::abs(bound - 4.0) <= 1e-8);
}

TEST_CASE("image-ball absorbing bound takes the sup over the window") {
    const SpatialRickerParams p{};
    const ModelSpec m = spatial_ricker(p);
    const double bound = absorbing_bound(m, 3, AbsorbingVariant::ImageBall, 0, 3);
    double manual = 0.0;
    for (std::int64_t t = 0; t <= 3; ++t)
        manual = std::max(manual, hypothesis_bounds(m, t).rho);
    CHECK(bound == manual);

    CHECK_THROWS_AS(absorbing_bound(m, 3, AbsorbingVariant::ImageBall, 3, 0), SchemaError);

    ModelSpec clipped = m;
    clipped.time_domain.start = 0;
    CHECK_THROWS_AS(absorbing_bound(clipped, 0, AbsorbingVariant::GrowthBall), ConstraintError);
}

TEST_CASE("fixed point iteration contracts at the decay rate") {
    SpatialRickerParams p{};
    p.n = 128;
    const ModelSpec limit = ricker_limit(p);
    const FixedPointResult r = fixed_point_iterate(limit, State::Zero(limit.dim), 1e-12, 1000);
    CHECK(r.converged);
    CHECK(r.iterations == 8);
    CHECK(r.u_star.lpNorm<Eigen::Infinity>() ==
          doctest::Approx(5.0038540912931504).epsilon(1e-12));
    REQUIRE_FALSE(r.ratios.empty());
    for (double ratio : r.ratios) CHECK(ratio <= p.alpha_decay() + 1e-6);

    CHECK_THROWS_AS(fixed_point_iterate(limit, State::Zero(limit.dim), 1e-12, 2),
                    ConvergenceError);
}

TEST_CASE("contraction smallness test and its margin") {
    CHECK(ricker_smallness_check(0.01));
    CHECK_FALSE(ricker_smallness_check(1.5));
    CHECK(ricker_smallness_margin(0.01) == doctest::Approx(0.92765014823246406).epsilon(1e-12));
    CHECK(ricker_smallness_margin(1.5) == -std::numeric_limits<double>::infinity());
    for (double alpha : {0.02, 0.05, 0.1, 0.2, 0.5})
        CHECK(ricker_smallness_check(alpha) == (ricker_smallness_margin(alpha) > 0.0));
    CHECK_THROWS_AS(ricker_smallness_check(0.0), SchemaError);
}

TEST_CASE("refinement study reports successive differences") {
    const auto observable = [](int n) { return 1.0 + 1.0 / static_cast<double>(n); };
    const std::vector<RefineRow> rows = refine_and_compare(observable, {16, 32, 64});
    REQUIRE(rows.size() == 3);
    CHECK_FALSE(rows[0].diff.has_value());
    REQUIRE(rows[1].diff.has_value());
    CHECK(*rows[1].diff == doctest::Approx(1.0 / 16 - 1.0 / 32).epsilon(1e-14));
    CHECK(rows[2].n == 64);
}
