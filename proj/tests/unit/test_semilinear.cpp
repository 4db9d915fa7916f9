#include "doctest.h"

#include <cmath>

#include "idescope/errors.hpp"
#include "idescope/models.hpp"
#include "idescope/rng.hpp"
#include "idescope/semilinear.hpp"

#include "helpers.hpp"

using namespace idescope;
using idescope::testing::scalar;
using idescope::testing::value;

namespace {

LinearPart constant_linear(double factor) {
    LinearPart lin;
    lin.dim = 1;
    lin.matrix = [factor](std::int64_t) {
        Eigen::MatrixXd m(1, 1);
        m(0, 0) = factor;
        return m;
    };
    return lin;
}

LinearPart seeded_linear(int dim, std::uint64_t seed, double scale) {
    LinearPart lin;
    lin.dim = dim;
    lin.matrix = [dim, seed, scale](std::int64_t t) {
        const CounterRng rng{seed, static_cast<std::uint64_t>(t + 1000)};
        Eigen::MatrixXd m(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                m(i, j) = scale * rng.uniform(static_cast<std::uint64_t>(i * dim + j), -1.0, 1.0);
        return m;
    };
    return lin;
}

} // namespace

TEST_CASE("transition matrix folds the factors left to right") {
    const LinearPart half = constant_linear(0.5);
    CHECK(transition_matrix(half, 3, 0)(0, 0) == 0.125);
    CHECK(transition_matrix(half, 2, 2)(0, 0) == 1.0);

    // Folding extra factors onto a previously computed transition reproduces
    // the longer transition bit for bit.
    const LinearPart lin = seeded_linear(3, 21, 0.8);
    const Eigen::MatrixXd direct = transition_matrix(lin, 6, 2);
    Eigen::MatrixXd folded = transition_matrix(lin, 4, 2);
    folded = (lin.matrix(4) * folded).eval();
    folded = (lin.matrix(5) * folded).eval();
    CHECK((direct - folded).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("variation of constants reproduces plain iteration") {
    const LinearPart half = constant_linear(0.5);
    const NonlinearPart forcing = [](std::int64_t t, const State& u) {
        return State::Constant(u.size(), std::pow(0.5, static_cast<double>(t)));
    };
    CHECK(value(voc_evolve(half, forcing, 0, 2, scalar(0.0))) == 1.0);

    const LinearPart lin = seeded_linear(3, 9, 0.3);
    const NonlinearPart nonlin = [](std::int64_t t, const State& u) {
        State out(u.size());
        for (int i = 0; i < u.size(); ++i)
            out[i] = 0.2 * std::sin(u[i] + static_cast<double>(t));
        return out;
    };
    const ModelSpec model = semilinear_model(lin, nonlin, "seeded");
    const CounterRng rng{4, 2};
    for (int trial = 0; trial < 10; ++trial) {
        State u(3);
        for (int i = 0; i < 3; ++i)
            u[i] = rng.uniform(static_cast<std::uint64_t>(trial * 3 + i), -2.0, 2.0);
        const State a = evolve(model, -2, 6, u);
        const State b = voc_evolve(lin, nonlin, -2, 6, u);
        CHECK((a - b).lpNorm<Eigen::Infinity>() <= 1e-12);
    }
}

TEST_CASE("a-priori growth bound is tight for the linear catalog model") {
    const ModelSpec lin = linear_inhomogeneous(0.5);
    REQUIRE(lin.semilinear);
    const Trajectory traj = orbit(lin, 0, 30, scalar(1.0));
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const double bound = gronwall_bound(*lin.semilinear, 0, traj.time_at(k), 1.0);
        CHECK(traj.states[k].lpNorm<Eigen::Infinity>() == bound);
    }
    CHECK_THROWS_AS(gronwall_bound(*lin.semilinear, 5, 2, 1.0), SchemaError);
}

TEST_CASE("absorbing radius sums the forcing series in both directions") {
    SemilinearParams p;
    p.K = 1.0;
    p.alpha = [](std::int64_t) { return 0.5; };
    p.a = [](std::int64_t) { return 0.0; };
    p.b = [](std::int64_t) { return 0.25; };
    const double fwd = absorbing_radius(p, 0, 0.0, Direction::Forward);
    const double pull = absorbing_radius(p, 0, 0.0, Direction::Pullback);
    CHECK(fwd == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(fwd == pull);
    CHECK(absorbing_radius(p, 0, 2.0, Direction::Pullback) == pull + 2.0);
}

TEST_CASE("a forcing series that grows into the past fails to settle") {
    SemilinearParams p;
    p.K = 1.0;
    p.alpha = [](std::int64_t) { return 0.5; };
    p.a = [](std::int64_t) { return 0.0; };
    p.b = [](std::int64_t t) { return std::pow(0.5, static_cast<double>(t)); };
    CHECK_THROWS_AS(absorbing_radius(p, 0, 0.0, Direction::Pullback, 200), ConvergenceError);
    try {
        absorbing_radius(p, 0, 0.0, Direction::Pullback, 200);
    } catch (const ConvergenceError& e) {
        CHECK(e.partial() > 0.0);
    }
}

TEST_CASE("condensing bounds multiply the declared constants") {
    ModelSpec m = bh_autonomous(2.0);
    m.darbo = [](std::int64_t) { return 3.0; };
    CHECK(darbo_bound(m, 0, 2) == 9.0);
    CHECK(darbo_bound(m, 5, 5) == 1.0);

    ModelSpec bare = bh_autonomous(2.0);
    bare.darbo = nullptr;
    CHECK_THROWS_AS(darbo_bound(bare, 0, 2), SchemaError);
}

TEST_CASE("power iteration finds the dominant eigenvalue") {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
    d(0, 0) = 0.3;
    d(1, 1) = 0.9;
    const SpectralEstimate est = spectral_radius_estimate(d);
    CHECK(est.converged);
    CHECK(est.value == doctest::Approx(0.9).epsilon(1e-10));

    const SpectralEstimate ones = spectral_radius_estimate(Eigen::MatrixXd::Ones(2, 2));
    CHECK(ones.converged);
    CHECK(ones.value == doctest::Approx(2.0).epsilon(1e-10));
}
