#include "doctest.h"

#include <cmath>

#include "idescope/errors.hpp"
#include "idescope/models.hpp"

#include "helpers.hpp"

using namespace idescope;
using idescope::testing::scalar;
using idescope::testing::value;

namespace {

double iterated(const BhPiecewiseParams& p, std::int64_t tau, std::int64_t t, double v) {
    return value(evolve(bh_piecewise(p), tau, t, scalar(v)));
}

} // namespace

TEST_CASE("piecewise closed form agrees with iteration") {
    struct Case {
        BhPiecewiseParams p;
        std::int64_t tau, t;
        double v, expected;
    };
    const Case cases[] = {
        {{2.0, 3.0}, -5, 10, 4.0, 1.9999677180099371},
        {{0.5, 3.0}, -2, 2, 1.0, 9.0 / 14.0},
        {{2.0, 3.0}, -3, 0, 4.0, 32.0 / 29.0},
        {{1.5, 3.0}, -1, 0, 4.0, 1.2},
    };
    for (const Case& c : cases) {
        const double closed = bh_closed_form(c.p, c.tau, c.t, c.v);
        CHECK(closed == doctest::Approx(c.expected).epsilon(1e-13));
        CHECK(closed == doctest::Approx(iterated(c.p, c.tau, c.t, c.v)).epsilon(1e-12));
    }
}

TEST_CASE("growth-sequence overload matches the piecewise overload") {
    const BhPiecewiseParams p{2.0, 3.0};
    const auto growth = [&p](std::int64_t t) { return t < 0 ? p.alpha_minus : p.alpha_plus; };
    for (std::int64_t tau : {-7LL, -2LL, 0LL, 3LL})
        CHECK(bh_closed_form(growth, tau, tau + 9, 2.5) == bh_closed_form(p, tau, tau + 9, 2.5));
}

TEST_CASE("log-space evaluation survives long horizons") {
    // 500 expanding steps would overflow a naive product of growth factors.
    const double far = bh_closed_form({3.0, 3.0}, -500, 0, 5.0);
    CHECK(std::isfinite(far));
    CHECK(far == doctest::Approx(2.0).epsilon(1e-9));

    // Contraction era first, expansion after: tiny values stay relative.
    const BhPiecewiseParams p{0.5, 3.0};
    const double deep = bh_closed_form(p, 64 - 200, 64, 4.0);
    CHECK(deep == doctest::Approx(1.7518558737970424e-11).epsilon(1e-6));
    CHECK(bh_closed_form(p, 57 - 200, 57, 4.0) < 1e-15);
}

TEST_CASE("asymptotically autonomous closed form agrees with iteration") {
    struct Case {
        BhAsyParams p;
        std::int64_t tau, elapsed;
        double a, expected;
    };
    const Case cases[] = {
        {{2.0, 10.0, 1}, 0, 30, 1.0, 1.0526315788957716},
        {{2.0, 1.0, 1}, 0, 40, 2.5, 1.051282051282017},
        {{3.0, 2.0, 3}, 1, 25, 0.7, 2.3518635079214052},
    };
    for (const Case& c : cases) {
        const double closed = bh_asy_closed_form(c.p, c.tau, c.elapsed, c.a);
        CHECK(closed == doctest::Approx(c.expected).epsilon(1e-13));
        const double iter = value(evolve(bh_asy(c.p), c.tau, c.tau + c.elapsed, scalar(c.a)));
        CHECK(closed == doctest::Approx(iter).epsilon(1e-12));
    }
}

TEST_CASE("growth factor of the asymptotically autonomous family") {
    CHECK(bh_asy_factor({2.0, 1.0, 1}, 1) == 3.0);  // (3/2) * 2
    CHECK(bh_asy_factor({2.0, 1.0, 0}, 7) == 2.0);  // constant f
}

TEST_CASE("series limit converges to the recorded values") {
    struct Case {
        BhAsyParams p;
        std::int64_t tau;
        double expected;
        std::int64_t t_used;
    };
    const Case cases[] = {
        {{2.0, 1.0, 1}, 0, 0.99993896670633842, 32768},
        {{2.0, 1.0, 2}, 0, 0.99993896717199993, 65536},
        {{2.0, 1.0, 3}, 0, 0.99990845285331842, 65536},
        {{2.0, 1.0, 4}, 0, 0.99993896740480559, 131072},
        {{3.0, 1.0, 2}, 5, 0.49990848636480901, 16384},
    };
    for (const Case& c : cases) {
        const SeriesResult r = bh_series_limit(c.p, c.tau, 1000000, 1e-4);
        CHECK(r.converged);
        CHECK(r.t_used == c.t_used);
        CHECK(r.value == doctest::Approx(c.expected).epsilon(1e-12));
    }

    const SeriesResult tight = bh_series_limit({2.0, 1.0, 1}, 0, 1024, 1e-16);
    CHECK_FALSE(tight.converged);
    CHECK_THROWS_AS(bh_series_limit({0.5, 1.0, 1}, 0, 1024, 1e-4), SchemaError);
}

TEST_CASE("limit-set table covers all five parameter constellations") {
    struct Case {
        BhPiecewiseParams p;
        int row;
        double star_hi, minus_hi, plus_hi;
    };
    const Case cases[] = {
        {{0.8, 0.9}, 1, 0.0, 0.0, 0.0},
        {{0.5, 3.0}, 2, 0.0, 0.0, 2.0},
        {{1.2, 0.9}, 3, 0.0, 0.0, 0.0},
        {{2.0, 3.0}, 4, 2.0, 1.0, 2.0},
        {{3.0, 2.0}, 5, 1.0, 1.0, 1.0},
    };
    for (const Case& c : cases) {
        const OmegaTableRow row = bh_omega_table(c.p);
        CHECK(row.row == c.row);
        CHECK_FALSE(row.condition.empty());
        CHECK(row.omega_star.lo == 0.0);
        CHECK(row.omega_minus.lo == 0.0);
        CHECK(row.omega_plus.lo == 0.0);
        CHECK(row.omega_star.hi == doctest::Approx(c.star_hi).epsilon(1e-14));
        CHECK(row.omega_minus.hi == doctest::Approx(c.minus_hi).epsilon(1e-14));
        CHECK(row.omega_plus.hi == doctest::Approx(c.plus_hi).epsilon(1e-14));
    }
}

TEST_CASE("forward fibre formula and absorbing top") {
    CHECK(bh_absorbing_top({2.0, 3.0}) == 4.0);
    const ScalarInterval f = bh_forward_fiber_formula({2.0, 3.0}, -3);
    CHECK(f.lo == 0.0);
    CHECK(f.hi == doctest::Approx(32.0 / 29.0).epsilon(1e-13));
}
