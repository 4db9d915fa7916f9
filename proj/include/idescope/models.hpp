#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "idescope/ide.hpp"
#include "idescope/model.hpp"

namespace idescope {

// ---------------------------------------------------------------------------
// scalar catalog

/// Linear equation u_{t+1} = alpha u + alpha^t on t >= 0, alpha in (0, 1).
ModelSpec linear_inhomogeneous(double alpha);

/// Autonomous Beverton-Holt v_{t+1} = alpha v / (1 + v) on the nonnegative
/// half line.
ModelSpec bh_autonomous(double alpha);

struct BhPiecewiseParams {
    double alpha_minus = 0.0;
    double alpha_plus = 0.0;
};

/// Piecewise autonomous Beverton-Holt: growth alpha_minus for t < 0 and
/// alpha_plus for t >= 0.
ModelSpec bh_piecewise(const BhPiecewiseParams& p);

struct BhAsyParams {
    double alpha = 0.0;  // alpha > 1
    double c = 1.0;      // f_t = (t + c)^n
    int n = 1;           // polynomial degree, 0..4 (0 = constant f)
};

double bh_asy_factor(const BhAsyParams& p, std::int64_t t);  // (f_{t+1} / f_t) alpha

/// Asymptotically autonomous Beverton-Holt with growth (f_{t+1} / f_t) alpha,
/// defined for t + c > 0.
ModelSpec bh_asy(const BhAsyParams& p);

/// Beverton-Holt with theta-periodic growth 3 - sin(2 pi (t mod theta) / theta).
ModelSpec bh_periodic(std::int64_t theta);

// closed forms -------------------------------------------------------------

/// phi(t; tau, v) for v >= 0 under growth sequence a_r > 0, evaluated in log
/// space so long horizons neither overflow nor underflow.
double bh_closed_form(const std::function<double(std::int64_t)>& growth, std::int64_t tau,
                      std::int64_t t, double v);
double bh_closed_form(const BhPiecewiseParams& p, std::int64_t tau, std::int64_t t, double v);

/// phi(tau + t; tau, a) for the asymptotically autonomous model; t is the
/// elapsed time.
double bh_asy_closed_form(const BhAsyParams& p, std::int64_t tau, std::int64_t t, double a);

struct SeriesResult {
    double value = 0.0;
    bool converged = false;
    std::int64_t t_used = 0;
};

/// Limit of sum_{s=0}^{t-1} f_{tau+s} / f_{tau+t} alpha^{s-t} for t -> inf,
/// evaluated at doubling horizons until Cauchy within tol.
SeriesResult bh_series_limit(const BhAsyParams& p, std::int64_t tau, std::int64_t t_max,
                             double tol);

// limit-set table ----------------------------------------------------------

/// Scalar interval [lo, hi]; the degenerate case lo == hi encodes a point.
struct ScalarInterval {
    double lo = 0.0;
    double hi = 0.0;
};

struct OmegaTableRow {
    int row = 0;
    std::string condition;
    ScalarInterval omega_star, omega_minus, omega_plus;
};

/// Limit sets of the piecewise Beverton-Holt equation on the absorbing set
/// Z x [0, max(alpha_minus, alpha_plus) + 1], by parameter constellation.
OmegaTableRow bh_omega_table(const BhPiecewiseParams& p);

/// Forward limit fibre endpoints [0, top] for the constellation
/// 1 <= alpha_minus < alpha_plus.
ScalarInterval bh_forward_fiber_formula(const BhPiecewiseParams& p, std::int64_t tau);

/// Upper edge of the natural absorbing set for the piecewise equation.
double bh_absorbing_top(const BhPiecewiseParams& p);

// ---------------------------------------------------------------------------
// spatial catalog

struct SpatialBhParams {
    double theta = 0.25;   // dispersal fraction
    double a = 10.0;       // Laplace kernel decay
    double L = 3.14159265358979323846;  // habitat [-L, L]
    int n = 128;
    QuadratureRule rule = QuadratureRule::Trapezoid;
};

/// Spatial Beverton-Holt equation with growth field a_t(x) = 3 - sin(t x / 10)
/// and Laplace dispersal.
ModelSpec spatial_bh(const SpatialBhParams& p);

/// sup_x a_t(x) of the spatial Beverton-Holt growth field (closed form).
double spatial_bh_alpha(std::int64_t t);

struct SpatialRickerParams {
    double a = 2.0;
    double L = 10.0;
    double alpha_plus = 0.12;
    double alpha_minus = 14.0;
    int n = 128;
    QuadratureRule rule = QuadratureRule::Trapezoid;

    double gamma_analytic() const;        // 1 - exp(-a L)
    double alpha_decay() const;           // alpha = alpha_plus * gamma
    double alpha_at(std::int64_t t) const;  // alpha_minus (t<0), alpha_plus (1 + alpha^t)
};

/// Nonautonomous spatial Ricker equation: pure Urysohn operator with kernel
/// alpha_t k(x, y) z e^{-z} and source b_t(x) = 5 cos(x / 8) for t >= 0.
ModelSpec spatial_ricker(const SpatialRickerParams& p);

/// Autonomous limit equation of the spatial Ricker model (growth alpha_plus,
/// source b).
ModelSpec ricker_limit(const SpatialRickerParams& p);

// ---------------------------------------------------------------------------
// registry

struct CatalogEntry {
    std::string name;
    std::string summary;
    std::vector<std::string> parameters;
};

const std::vector<CatalogEntry>& catalog();

struct ParamMap {
    std::map<std::string, double> numbers;
    std::map<std::string, std::string> strings;
};

/// Instantiates a catalog model by name; unknown names or parameter keys
/// raise SchemaError. Missing parameters take the defaults listed by
/// `catalog()`.
ModelSpec catalog_instantiate(const std::string& name, const ParamMap& params);

} // namespace idescope
