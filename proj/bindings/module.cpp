#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "idescope/config.hpp"
#include "idescope/errors.hpp"
#include "idescope/ide.hpp"
#include "idescope/model.hpp"
#include "idescope/models.hpp"
#include "idescope/runner.hpp"
#include "idescope/semilinear.hpp"
#include "idescope/serialize.hpp"

namespace py = pybind11;
using namespace idescope;

namespace {

ParamMap params_from_dict(const py::dict& d) {
    ParamMap out;
    for (const auto& item : d) {
        const std::string key = py::cast<std::string>(item.first);
        if (py::isinstance<py::str>(item.second))
            out.strings[key] = py::cast<std::string>(item.second);
        else
            out.numbers[key] = py::cast<double>(item.second);
    }
    return out;
}

std::string domain_name(Domain d) {
    return d == Domain::NonnegativeCone ? "nonnegative" : "unconstrained";
}

}  // namespace

PYBIND11_MODULE(_idescope, m) {
    m.doc() = "simulation and limit-set toolkit for nonautonomous difference and "
              "integrodifference equations";
    m.attr("__version__") = artifact_version();

    py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<ConstraintError>(m, "ConstraintError", PyExc_ValueError);

    py::class_<ModelSpec>(m, "Model")
        .def_readonly("name", &ModelSpec::name)
        .def_readonly("dim", &ModelSpec::dim)
        .def_property_readonly("period",
                               [](const ModelSpec& s) {
                                   return s.period ? py::cast(*s.period) : py::none();
                               })
        .def_property_readonly("domain",
                               [](const ModelSpec& s) { return domain_name(s.domain); })
        .def_property_readonly("time_start",
                               [](const ModelSpec& s) {
                                   return s.time_domain.start ? py::cast(*s.time_domain.start)
                                                              : py::none();
                               })
        .def_property_readonly("time_end",
                               [](const ModelSpec& s) {
                                   return s.time_domain.end ? py::cast(*s.time_domain.end)
                                                            : py::none();
                               })
        .def_property_readonly("nodes",
                               [](const ModelSpec& s) {
                                   return s.quadrature ? py::cast(s.quadrature->nodes)
                                                       : py::none();
                               })
        .def("__repr__", [](const ModelSpec& s) {
            return "<Model '" + s.name + "' dim=" + std::to_string(s.dim) + ">";
        });

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("model_id", &Trajectory::model_id)
        .def_readonly("start_time", &Trajectory::start_time)
        .def_readonly("states", &Trajectory::states)
        .def("time_at", &Trajectory::time_at);

    py::class_<SeriesResult>(m, "SeriesResult")
        .def_readonly("value", &SeriesResult::value)
        .def_readonly("converged", &SeriesResult::converged)
        .def_readonly("t_used", &SeriesResult::t_used);

    py::class_<HypothesisBounds>(m, "HypothesisBounds")
        .def_readonly("gamma", &HypothesisBounds::gamma)
        .def_readonly("ell", &HypothesisBounds::ell)
        .def_readonly("rho", &HypothesisBounds::rho)
        .def_readonly("lambda_sup", &HypothesisBounds::lambda_sup)
        .def_readonly("rho_plain", &HypothesisBounds::rho_plain)
        .def_property_readonly("rho_analytic", [](const HypothesisBounds& b) {
            return b.rho_analytic ? py::cast(*b.rho_analytic) : py::none();
        });

    py::class_<FixedPointResult>(m, "FixedPointResult")
        .def_readonly("u_star", &FixedPointResult::u_star)
        .def_readonly("diffs", &FixedPointResult::diffs)
        .def_readonly("ratios", &FixedPointResult::ratios)
        .def_readonly("iterations", &FixedPointResult::iterations)
        .def_readonly("converged", &FixedPointResult::converged);

    m.def("catalog", [] {
        py::list out;
        for (const CatalogEntry& e : catalog()) {
            py::dict d;
            d["name"] = e.name;
            d["summary"] = e.summary;
            d["parameters"] = e.parameters;
            out.append(std::move(d));
        }
        return out;
    });
    m.def(
        "make_model",
        [](const std::string& name, const py::dict& params) {
            return catalog_instantiate(name, params_from_dict(params));
        },
        py::arg("name"), py::arg("params") = py::dict());

    m.def("step", &step, py::arg("model"), py::arg("t"), py::arg("u"));
    m.def("evolve", &evolve, py::arg("model"), py::arg("tau"), py::arg("t"), py::arg("u"));
    m.def("orbit", &orbit, py::arg("model"), py::arg("tau"), py::arg("horizon"), py::arg("u0"));
    m.def("verify_process_property", &verify_process_property, py::arg("model"), py::arg("tau"),
          py::arg("s"), py::arg("t"), py::arg("u"));

    m.def(
        "bh_closed_form",
        [](double alpha_minus, double alpha_plus, std::int64_t tau, std::int64_t t, double v) {
            return bh_closed_form(BhPiecewiseParams{alpha_minus, alpha_plus}, tau, t, v);
        },
        py::arg("alpha_minus"), py::arg("alpha_plus"), py::arg("tau"), py::arg("t"),
        py::arg("v"));
    m.def(
        "bh_asy_closed_form",
        [](double alpha, double c, int n, std::int64_t tau, std::int64_t elapsed, double a) {
            return bh_asy_closed_form(BhAsyParams{alpha, c, n}, tau, elapsed, a);
        },
        py::arg("alpha"), py::arg("c"), py::arg("n"), py::arg("tau"), py::arg("elapsed"),
        py::arg("a"));
    m.def(
        "bh_series_limit",
        [](double alpha, double c, int n, std::int64_t tau, std::int64_t t_max, double tol) {
            return bh_series_limit(BhAsyParams{alpha, c, n}, tau, t_max, tol);
        },
        py::arg("alpha"), py::arg("c"), py::arg("n"), py::arg("tau"),
        py::arg("t_max") = 1000000, py::arg("tol") = 1e-6);
    m.def(
        "bh_omega_table",
        [](double alpha_minus, double alpha_plus) {
            const OmegaTableRow row = bh_omega_table({alpha_minus, alpha_plus});
            py::dict d;
            d["row"] = row.row;
            d["condition"] = row.condition;
            d["omega_star"] = py::make_tuple(row.omega_star.lo, row.omega_star.hi);
            d["omega_minus"] = py::make_tuple(row.omega_minus.lo, row.omega_minus.hi);
            d["omega_plus"] = py::make_tuple(row.omega_plus.lo, row.omega_plus.hi);
            return d;
        },
        py::arg("alpha_minus"), py::arg("alpha_plus"));

    m.def("hypothesis_bounds", &hypothesis_bounds, py::arg("model"), py::arg("t"));
    m.def(
        "absorbing_bound",
        [](const ModelSpec& model, std::int64_t t, const std::string& variant,
           std::int64_t window_lo, std::int64_t window_hi) {
            if (variant == "growth")
                return absorbing_bound(model, t, AbsorbingVariant::GrowthBall);
            if (variant == "image")
                return absorbing_bound(model, t, AbsorbingVariant::ImageBall, window_lo,
                                       window_hi);
            throw SchemaError("unknown absorbing variant '" + variant + "'");
        },
        py::arg("model"), py::arg("t"), py::arg("variant") = "growth",
        py::arg("window_lo") = 0, py::arg("window_hi") = 0);
    m.def("fixed_point_iterate", &fixed_point_iterate, py::arg("model"), py::arg("u0"),
          py::arg("tol") = 1e-12, py::arg("max_iter") = 1000, py::arg("ratio_floor") = 1e-11);
    m.def("ricker_smallness_check", py::overload_cast<double>(&ricker_smallness_check),
          py::arg("alpha"));
    m.def("ricker_smallness_margin", py::overload_cast<double>(&ricker_smallness_margin),
          py::arg("alpha"));
    m.def(
        "gronwall_bound",
        [](const ModelSpec& model, std::int64_t tau, std::int64_t t, double norm_u) {
            if (!model.semilinear)
                throw SchemaError("model declares no semilinear structure");
            return gronwall_bound(*model.semilinear, tau, t, norm_u);
        },
        py::arg("model"), py::arg("tau"), py::arg("t"), py::arg("norm_u"));

    m.def(
        "run_config",
        [](const std::string& text) {
            const RunOutput out = run_experiment(parse_config(text));
            py::dict d;
            d["files"] = out.files;
            d["converged"] = out.converged;
            d["report_path"] = out.report_path;
            return d;
        },
        py::arg("config_text"));
    m.def(
        "compare_reports",
        [](const std::string& report, const std::string& golden, double tol) {
            const CompareResult res = compare_golden(report, golden, tol);
            py::dict d;
            d["match"] = res.match;
            d["compared"] = res.compared;
            d["mismatches"] = res.mismatches;
            return d;
        },
        py::arg("report_path"), py::arg("golden_path"), py::arg("tol") = 1e-9);
}
