#include "idescope/models.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>
#include <utility>

#include "idescope/errors.hpp"

namespace idescope {

namespace {

constexpr double kPi = 3.14159265358979323846;

ModelSpec make_bh(std::string name, std::function<double(std::int64_t)> growth,
                  DiscreteInterval domain = DiscreteInterval::all()) {
    ModelSpec model;
    model.name = std::move(name);
    model.dim = 1;
    model.time_domain = domain;
    model.domain = Domain::NonnegativeCone;
    model.interval_fibers = true;
    model.darbo = growth;
    model.rhs = [growth](std::int64_t t, const State& u) {
        State out(1);
        out[0] = growth(t) * u[0] / (1.0 + u[0]);
        return out;
    };
    return model;
}

double laplace_base(double a, double x, double y) {
    return 0.5 * a * std::exp(-a * std::abs(x - y));
}

double laplace_row_integral(double a, double L, double x) {
    return 1.0 - 0.5 * (std::exp(-a * (L - x)) + std::exp(-a * (L + x)));
}

double growth_field_sup(std::int64_t t, double L) {
    const double theta = std::abs(static_cast<double>(t)) * L / 10.0;
    return 3.0 + (theta >= 0.5 * kPi ? 1.0 : std::sin(theta));
}

}  // namespace

ModelSpec linear_inhomogeneous(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw SchemaError("linear model needs alpha in (0, 1)");
    ModelSpec model;
    model.name = "linear";
    model.dim = 1;
    model.time_domain = DiscreteInterval::from(0);
    model.interval_fibers = true;
    model.rhs = [alpha](std::int64_t t, const State& u) {
        State out(1);
        out[0] = alpha * u[0] + std::pow(alpha, static_cast<double>(t));
        return out;
    };
    auto sl = std::make_shared<SemilinearParams>();
    sl->K = 1.0;
    sl->alpha = [alpha](std::int64_t) { return alpha; };
    sl->a = [](std::int64_t) { return 0.0; };
    sl->b = [alpha](std::int64_t t) { return std::pow(alpha, static_cast<double>(t)); };
    model.semilinear = sl;
    return model;
}

ModelSpec bh_autonomous(double alpha) {
    if (!(alpha > 0.0)) throw SchemaError("Beverton-Holt growth must be positive");
    return make_bh("bh", [alpha](std::int64_t) { return alpha; });
}

ModelSpec bh_piecewise(const BhPiecewiseParams& p) {
    if (!(p.alpha_minus > 0.0) || !(p.alpha_plus > 0.0))
        throw SchemaError("Beverton-Holt growth must be positive");
    const double am = p.alpha_minus, ap = p.alpha_plus;
    return make_bh("bh_piecewise",
                   [am, ap](std::int64_t t) { return t < 0 ? am : ap; });
}

double bh_asy_factor(const BhAsyParams& p, std::int64_t t) {
    const double ft = std::pow(static_cast<double>(t) + p.c, p.n);
    const double ft1 = std::pow(static_cast<double>(t + 1) + p.c, p.n);
    return p.alpha * ft1 / ft;
}

ModelSpec bh_asy(const BhAsyParams& p) {
    if (!(p.alpha > 1.0)) throw SchemaError("asymptotic Beverton-Holt needs alpha > 1");
    if (p.n < 0 || p.n > 4) throw SchemaError("polynomial degree n must be in 0..4");
    const std::int64_t t0 = static_cast<std::int64_t>(std::floor(-p.c)) + 1;
    auto params = p;
    ModelSpec model = make_bh(
        "bh_asy", [params](std::int64_t t) { return bh_asy_factor(params, t); },
        DiscreteInterval::from(t0));
    return model;
}

ModelSpec bh_periodic(std::int64_t theta) {
    if (theta < 1) throw SchemaError("period must be at least 1");
    ModelSpec model = make_bh("bh_periodic", [theta](std::int64_t t) {
        const std::int64_t m = ((t % theta) + theta) % theta;
        return 3.0 - std::sin(2.0 * kPi * static_cast<double>(m) / static_cast<double>(theta));
    });
    model.period = theta;
    return model;
}

// -- closed forms ------------------------------------------------------------

double bh_closed_form(const std::function<double(std::int64_t)>& growth, std::int64_t tau,
                      std::int64_t t, double v) {
    if (t < tau) throw SchemaError("closed form needs tau <= t");
    if (!(v >= 0.0)) throw ConstraintError("Beverton-Holt states are nonnegative");
    if (t == tau || v == 0.0) return v;
    std::vector<double> prefix;  // prefix[s - tau] = sum_{r=tau}^{s-1} log a_r
    prefix.reserve(static_cast<std::size_t>(t - tau));
    double acc = 0.0;
    for (std::int64_t s = tau; s < t; ++s) {
        prefix.push_back(acc);
        const double a = growth(s);
        if (!(a > 0.0)) throw ConstraintError("growth sequence must be positive");
        acc += std::log(a);
    }
    const double lp = acc;
    const double m = *std::max_element(prefix.begin(), prefix.end());
    double denom_sum = 0.0;
    for (double ls : prefix) denom_sum += std::exp(ls - m);
    return v * std::exp(lp - m) / (std::exp(-m) + v * denom_sum);
}

double bh_closed_form(const BhPiecewiseParams& p, std::int64_t tau, std::int64_t t, double v) {
    const double am = p.alpha_minus, ap = p.alpha_plus;
    return bh_closed_form([am, ap](std::int64_t s) { return s < 0 ? am : ap; }, tau, t, v);
}

namespace {

double f_poly(const BhAsyParams& p, std::int64_t t) {
    return std::pow(static_cast<double>(t) + p.c, p.n);
}

// sum_{s=0}^{t-1} f_{tau+s} / f_{tau+t} alpha^{s-t}, accumulated from the
// dominant s = t-1 term downward.
double bh_asy_series(const BhAsyParams& p, std::int64_t tau, std::int64_t t) {
    const double ft = f_poly(p, tau + t);
    double sum = 0.0;
    double pw = 1.0 / p.alpha;
    for (std::int64_t s = t - 1; s >= 0; --s) {
        sum += pw * f_poly(p, tau + s) / ft;
        pw /= p.alpha;
        if (pw < 1e-18) break;
    }
    return sum;
}

}  // namespace

double bh_asy_closed_form(const BhAsyParams& p, std::int64_t tau, std::int64_t t, double a) {
    if (!(p.alpha > 1.0)) throw SchemaError("closed form needs alpha > 1");
    if (t < 0) throw SchemaError("elapsed time must be nonnegative");
    if (!(a >= 0.0)) throw ConstraintError("Beverton-Holt states are nonnegative");
    if (static_cast<double>(tau) + p.c <= 0.0)
        throw SchemaError("tau outside the model time domain");
    if (t == 0 || a == 0.0) return a;
    const double am1 = p.alpha - 1.0;
    const double lead =
        am1 * std::pow(p.alpha, -static_cast<double>(t)) * (f_poly(p, tau) / f_poly(p, tau + t));
    const double denom = lead + am1 * a * bh_asy_series(p, tau, t);
    return am1 * a / denom;
}

SeriesResult bh_series_limit(const BhAsyParams& p, std::int64_t tau, std::int64_t t_max,
                             double tol) {
    if (!(p.alpha > 1.0)) throw SchemaError("series limit needs alpha > 1");
    if (t_max < 2) throw SchemaError("series horizon too small");
    SeriesResult out;
    double prev = bh_asy_series(p, tau, 1);
    for (std::int64_t t = 2; t <= t_max; t *= 2) {
        const double cur = bh_asy_series(p, tau, t);
        out.value = cur;
        out.t_used = t;
        if (std::abs(cur - prev) < tol) {
            out.converged = true;
            return out;
        }
        prev = cur;
    }
    return out;
}

// -- limit-set table ---------------------------------------------------------

OmegaTableRow bh_omega_table(const BhPiecewiseParams& p) {
    const double am = p.alpha_minus, ap = p.alpha_plus;
    if (!(am > 0.0) || !(ap > 0.0)) throw SchemaError("growth rates must be positive");
    const ScalarInterval zero{0.0, 0.0};
    OmegaTableRow row;
    if (am <= 1.0 && ap <= 1.0) {
        row = {1, "alpha_minus <= 1 and alpha_plus <= 1", zero, zero, zero};
    } else if (am <= 1.0) {
        row = {2, "alpha_minus <= 1 < alpha_plus", zero, zero, {0.0, ap - 1.0}};
    } else if (ap <= 1.0) {
        row = {3, "alpha_plus <= 1 < alpha_minus", zero, zero, zero};
    } else if (am < ap) {
        row = {4, "1 < alpha_minus < alpha_plus",
               {0.0, ap - 1.0}, {0.0, am - 1.0}, {0.0, ap - 1.0}};
    } else {
        row = {5, "1 < alpha_plus <= alpha_minus",
               {0.0, ap - 1.0}, {0.0, ap - 1.0}, {0.0, ap - 1.0}};
    }
    return row;
}

ScalarInterval bh_forward_fiber_formula(const BhPiecewiseParams& p, std::int64_t tau) {
    if (!(p.alpha_plus > 1.0))
        throw SchemaError("forward fibre formula applies for alpha_plus > 1");
    const double top = p.alpha_plus - 1.0;
    if (tau >= 0) return {0.0, top};
    const double dip = bh_closed_form(p, tau, 0, bh_absorbing_top(p));
    return {0.0, std::min(top, dip)};
}

double bh_absorbing_top(const BhPiecewiseParams& p) {
    return std::max(p.alpha_minus, p.alpha_plus) + 1.0;
}

// -- spatial catalog ----------------------------------------------------------

double spatial_bh_alpha(std::int64_t t) { return growth_field_sup(t, kPi); }

ModelSpec spatial_bh(const SpatialBhParams& p) {
    if (!(p.theta > 0.0) || !(p.theta < 1.0))
        throw SchemaError("dispersal fraction theta must be in (0, 1)");
    if (!(p.a > 0.0) || !(p.L > 0.0)) throw SchemaError("kernel needs a > 0 and L > 0");
    if (p.n < 2) throw SchemaError("grid needs at least two nodes");
    const double theta = p.theta, a = p.a, L = p.L;
    auto sup = [L](std::int64_t t) { return growth_field_sup(t, L); };
    auto field = [](std::int64_t t, double x) {
        return 3.0 - std::sin(static_cast<double>(t) * x / 10.0);
    };

    GrowthSpec growth;
    growth.g = [theta, field](std::int64_t t, double x, double z) {
        return (1.0 - theta) * field(t, x) * z / (1.0 + z);
    };
    growth.gamma = [theta, sup](std::int64_t t) { return (1.0 - theta) * sup(t); };
    growth.ell = growth.gamma;

    KernelSpec kernel;
    kernel.base = [a](double x, double y) { return laplace_base(a, x, y); };
    kernel.base_diagonal_kink = true;
    kernel.psi = [theta, field](std::int64_t t, double y, double z) {
        return theta * field(t, y) * z / (1.0 + z);
    };
    kernel.psi_env = [theta, sup](std::int64_t t) { return theta * sup(t); };
    kernel.psi_lip = kernel.psi_env;
    kernel.base_row_integral = [a, L](double x) { return laplace_row_integral(a, L, x); };

    ModelSpec model = ide_model("spatial_bh", &growth, std::move(kernel),
                                build_quadrature(-L, L, p.n, p.rule));
    auto ell = growth.gamma;
    model.darbo = [ell](std::int64_t t) { return ell(t); };
    return model;
}

double SpatialRickerParams::gamma_analytic() const { return 1.0 - std::exp(-a * L); }

double SpatialRickerParams::alpha_decay() const { return alpha_plus * gamma_analytic(); }

double SpatialRickerParams::alpha_at(std::int64_t t) const {
    if (t < 0) return alpha_minus;
    return alpha_plus * (1.0 + std::pow(alpha_decay(), static_cast<double>(t)));
}

namespace {

KernelSpec ricker_kernel(const SpatialRickerParams& p, bool autonomous) {
    const double a = p.a, L = p.L;
    auto params = p;
    KernelSpec kernel;
    kernel.base = [a](double x, double y) { return laplace_base(a, x, y); };
    kernel.base_diagonal_kink = true;
    kernel.base_row_integral = [a, L](double x) { return laplace_row_integral(a, L, x); };
    auto alpha = [params, autonomous](std::int64_t t) {
        return autonomous ? params.alpha_plus : params.alpha_at(t);
    };
    kernel.psi = [alpha](std::int64_t t, double, double z) {
        return alpha(t) * z * std::exp(-z);
    };
    kernel.psi_env = [alpha](std::int64_t t) { return alpha(t) * std::exp(-1.0); };
    kernel.psi_lip = alpha;
    kernel.source = [autonomous](std::int64_t t, double x) {
        if (!autonomous && t < 0) return 0.0;
        return 5.0 * std::cos(x / 8.0);
    };
    return kernel;
}

}  // namespace

ModelSpec spatial_ricker(const SpatialRickerParams& p) {
    if (!(p.a > 0.0) || !(p.L > 0.0)) throw SchemaError("kernel needs a > 0 and L > 0");
    if (p.n < 2) throw SchemaError("grid needs at least two nodes");
    ModelSpec model = ide_model("spatial_ricker", nullptr, ricker_kernel(p, false),
                                build_quadrature(-p.L, p.L, p.n, p.rule));
    model.darbo = [](std::int64_t) { return 0.0; };
    const double abar = p.alpha_decay();
    if (abar < 1.0) {
        // Linear/nonlinear split of the decaying regime t >= 0: the declared
        // transition bound K abar^{t-s} telescopes the (1 + abar^t) factors.
        auto params = p;
        const double gamma = p.gamma_analytic();
        auto sl = std::make_shared<SemilinearParams>();
        sl->K = std::exp(1.0 / (1.0 - abar));
        sl->alpha = [abar](std::int64_t) { return abar; };
        sl->a = [params, gamma](std::int64_t t) {
            return params.alpha_at(t) * (1.0 + std::exp(-2.0)) * gamma;
        };
        sl->b = [](std::int64_t t) { return t >= 0 ? 5.0 : 0.0; };
        model.semilinear = sl;
    }
    return model;
}

ModelSpec ricker_limit(const SpatialRickerParams& p) {
    if (!(p.a > 0.0) || !(p.L > 0.0)) throw SchemaError("kernel needs a > 0 and L > 0");
    if (p.n < 2) throw SchemaError("grid needs at least two nodes");
    ModelSpec model = ide_model("ricker_limit", nullptr, ricker_kernel(p, true),
                                build_quadrature(-p.L, p.L, p.n, p.rule));
    model.darbo = [](std::int64_t) { return 0.0; };
    return model;
}

// -- registry -----------------------------------------------------------------

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = {
        {"linear", "scalar linear equation u <- alpha u + alpha^t on t >= 0", {"alpha=0.5"}},
        {"bh", "autonomous Beverton-Holt v <- alpha v / (1 + v)", {"alpha=2"}},
        {"bh_piecewise", "Beverton-Holt with growth alpha_minus (t < 0) / alpha_plus (t >= 0)",
         {"alpha_minus=2", "alpha_plus=3"}},
        {"bh_asy",
         "asymptotically autonomous Beverton-Holt with growth (f_{t+1}/f_t) alpha, "
         "f_t = (t + c)^n",
         {"alpha=2", "c=1", "n=1"}},
        {"bh_periodic", "Beverton-Holt with theta-periodic growth 3 - sin(2 pi t / theta)",
         {"theta=6"}},
        {"spatial_bh",
         "spatial Beverton-Holt with growth field 3 - sin(t x / 10) and Laplace dispersal",
         {"theta=0.25", "a=10", "L=3.141592653589793", "n=128", "rule=trapezoid"}},
        {"spatial_ricker", "nonautonomous spatial Ricker equation with switched-on source",
         {"a=2", "L=10", "alpha_plus=0.12", "alpha_minus=14", "n=128", "rule=trapezoid"}},
        {"ricker_limit", "autonomous limit equation of the spatial Ricker model",
         {"a=2", "L=10", "alpha_plus=0.12", "n=128", "rule=trapezoid"}},
    };
    return entries;
}

namespace {

class ParamReader {
  public:
    explicit ParamReader(const ParamMap& params) : params_(params) {}

    double number(const std::string& key, double fallback) {
        seen_.insert(key);
        auto it = params_.numbers.find(key);
        return it == params_.numbers.end() ? fallback : it->second;
    }

    int integer(const std::string& key, int fallback) {
        const double v = number(key, static_cast<double>(fallback));
        if (v != std::floor(v)) throw SchemaError("parameter '" + key + "' must be an integer");
        return static_cast<int>(v);
    }

    std::string text(const std::string& key, const std::string& fallback) {
        seen_.insert(key);
        auto it = params_.strings.find(key);
        return it == params_.strings.end() ? fallback : it->second;
    }

    void finish(const std::string& model) const {
        for (const auto& [key, value] : params_.numbers)
            if (!seen_.count(key))
                throw SchemaError("model '" + model + "' has no parameter '" + key + "'");
        for (const auto& [key, value] : params_.strings)
            if (!seen_.count(key))
                throw SchemaError("model '" + model + "' has no parameter '" + key + "'");
    }

  private:
    const ParamMap& params_;
    std::set<std::string> seen_;
};

}  // namespace

ModelSpec catalog_instantiate(const std::string& name, const ParamMap& params) {
    ParamReader reader(params);
    ModelSpec model;
    if (name == "linear") {
        model = linear_inhomogeneous(reader.number("alpha", 0.5));
    } else if (name == "bh") {
        model = bh_autonomous(reader.number("alpha", 2.0));
    } else if (name == "bh_piecewise") {
        BhPiecewiseParams p;
        p.alpha_minus = reader.number("alpha_minus", 2.0);
        p.alpha_plus = reader.number("alpha_plus", 3.0);
        model = bh_piecewise(p);
    } else if (name == "bh_asy") {
        BhAsyParams p;
        p.alpha = reader.number("alpha", 2.0);
        p.c = reader.number("c", 1.0);
        p.n = reader.integer("n", 1);
        model = bh_asy(p);
    } else if (name == "bh_periodic") {
        model = bh_periodic(reader.integer("theta", 6));
    } else if (name == "spatial_bh") {
        SpatialBhParams p;
        p.theta = reader.number("theta", p.theta);
        p.a = reader.number("a", p.a);
        p.L = reader.number("L", p.L);
        p.n = reader.integer("n", p.n);
        p.rule = parse_rule(reader.text("rule", "trapezoid"));
        model = spatial_bh(p);
    } else if (name == "spatial_ricker" || name == "ricker_limit") {
        SpatialRickerParams p;
        p.a = reader.number("a", p.a);
        p.L = reader.number("L", p.L);
        p.alpha_plus = reader.number("alpha_plus", p.alpha_plus);
        if (name == "spatial_ricker") p.alpha_minus = reader.number("alpha_minus", p.alpha_minus);
        p.n = reader.integer("n", p.n);
        p.rule = parse_rule(reader.text("rule", "trapezoid"));
        model = name == "spatial_ricker" ? spatial_ricker(p) : ricker_limit(p);
    } else {
        throw SchemaError("unknown catalog model '" + name + "'");
    }
    reader.finish(name);
    return model;
}

} // namespace idescope
