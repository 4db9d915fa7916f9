#include "idescope/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <utility>
#include <vector>

#include "idescope/cloud.hpp"
#include "idescope/errors.hpp"
#include "idescope/ide.hpp"
#include "idescope/models.hpp"
#include "idescope/rng.hpp"
#include "idescope/semilinear.hpp"
#include "idescope/serialize.hpp"
#include "idescope/setdyn.hpp"

namespace idescope {

namespace {

ParamMap collect_params(const ExperimentConfig& cfg, const char* section) {
    ParamMap out;
    if (!cfg.data.contains(section)) return out;
    for (const auto& [key, value] : cfg.data.at(section).items()) {
        if (std::string(section) == "model" && key == "name") continue;
        if (value.is_number())
            out.numbers[key] = value.get<double>();
        else if (value.is_string())
            out.strings[key] = value.get<std::string>();
        else
            throw SchemaError("parameter '" + std::string(section) + "." + key +
                              "' must be a number or a string");
    }
    return out;
}

ModelSpec model_from_config(const ExperimentConfig& cfg) {
    const std::string name = cfg.text("model", "name");
    ParamMap params = collect_params(cfg, "model");
    const ParamMap quad = collect_params(cfg, "quadrature");
    for (const auto& [key, value] : quad.numbers) params.numbers[key] = value;
    for (const auto& [key, value] : quad.strings) params.strings[key] = value;
    return catalog_instantiate(name, params);
}

ModelSpec limit_model_from_config(const ExperimentConfig& cfg) {
    if (!cfg.data.contains("limit")) throw SchemaError("autonomy check needs a [limit] section");
    const std::string name = cfg.text("limit", "name");
    return catalog_instantiate(name, collect_params(cfg, "limit"));
}

State broadcast(const std::vector<double>& values, int dim, const std::string& what) {
    if (static_cast<int>(values.size()) == dim)
        return Eigen::Map<const State>(values.data(), dim);
    if (values.size() == 1) return State::Constant(dim, values[0]);
    throw SchemaError(what + " must have 1 or " + std::to_string(dim) + " entries");
}

SetDescriptor set_from_config(const ExperimentConfig& cfg, const std::string& section, int dim) {
    if (!cfg.data.contains(section))
        throw SchemaError("this task needs a [" + section + "] section describing a set");
    const std::string kind = cfg.text_or(section, "kind", "box");
    if (kind == "interval") {
        return SetDescriptor::interval(cfg.number(section, "lo"), cfg.number(section, "hi"));
    }
    if (kind == "box") {
        return SetDescriptor::box(broadcast(cfg.numbers(section, "lo"), dim, section + ".lo"),
                                  broadcast(cfg.numbers(section, "hi"), dim, section + ".hi"));
    }
    if (kind == "ball") {
        return SetDescriptor::ball(
            broadcast(cfg.numbers(section, "center"), dim, section + ".center"),
            cfg.number(section, "radius"));
    }
    throw SchemaError("unknown set kind '" + kind + "'");
}

nlohmann::json interval_json(const DiscreteInterval& domain) {
    nlohmann::json j;
    j["start"] = domain.start ? nlohmann::json(*domain.start) : nlohmann::json();
    j["end"] = domain.end ? nlohmann::json(*domain.end) : nlohmann::json();
    return j;
}

nlohmann::json bounds_json(const FiberCloud& cloud) {
    nlohmann::json j;
    j["count"] = cloud.points.size();
    if (cloud.empty()) return j;
    const auto [lo, hi] = cloud.bounds();
    if (cloud.dim() == 1) {
        j["lo"] = lo[0];
        j["hi"] = hi[0];
    } else {
        j["lo_min"] = lo.minCoeff();
        j["hi_max"] = hi.maxCoeff();
        j["sup_norm"] = cloud.sup_norm();
    }
    return j;
}

nlohmann::json state_json(const State& u) {
    auto arr = nlohmann::json::array();
    for (int i = 0; i < u.size(); ++i) arr.push_back(u[i]);
    return arr;
}

struct TaskContext {
    const ExperimentConfig& cfg;
    ModelSpec model;
    std::filesystem::path dir;
    std::string prefix;
    nlohmann::json results;
    nlohmann::json outputs = nlohmann::json::object();
    std::vector<std::string> files;
    bool converged = true;

    std::string write_csv(const std::string& suffix, const std::string& payload) {
        const std::string name = prefix + "_" + suffix + ".csv";
        const std::string path = (dir / name).string();
        write_text_file(path, payload);
        files.push_back(path);
        outputs[suffix] = name;
        return path;
    }
};

const Quadrature* model_quadrature(const ModelSpec& model) {
    return model.quadrature ? model.quadrature.get() : nullptr;
}

void run_simulate(TaskContext& ctx) {
    const std::int64_t tau = ctx.cfg.integer_or("task", "tau", 0);
    const std::int64_t horizon = ctx.cfg.integer("task", "horizon");
    if (horizon < 0) throw SchemaError("task.horizon must be nonnegative");
    const State u0 = broadcast(ctx.cfg.numbers("task", "u0"), ctx.model.dim, "task.u0");
    const Trajectory traj = orbit(ctx.model, tau, horizon, u0);
    ctx.write_csv("trajectory", trajectory_csv(traj));
    const State& last = traj.states.back();
    ctx.results["start_time"] = tau;
    ctx.results["steps"] = horizon;
    ctx.results["final_sup_norm"] = last.lpNorm<Eigen::Infinity>();
    if (ctx.model.dim <= 16) ctx.results["final_state"] = state_json(last);
    if (const Quadrature* q = model_quadrature(ctx.model)) {
        FiberCloud final_cloud;
        final_cloud.time = tau + horizon;
        final_cloud.provenance = Provenance::Iterated;
        final_cloud.points = {last};
        ctx.write_csv("fiber", fiber_csv(final_cloud, q));
    }
}

void run_pullback(TaskContext& ctx) {
    const std::int64_t tau = ctx.cfg.integer_or("task", "tau", 0);
    const int s_max = static_cast<int>(ctx.cfg.integer_or("task", "s_max", 64));
    const double tol = ctx.cfg.number_or("task", "tol", 1e-6);
    const double resolution = ctx.cfg.number_or("task", "resolution", 1e-3);
    const std::uint64_t seed = static_cast<std::uint64_t>(ctx.cfg.integer_or("task", "seed", 0));
    const SetDescriptor set = set_from_config(ctx.cfg, "set", ctx.model.dim);

    std::vector<std::int64_t> grid(static_cast<std::size_t>(s_max));
    for (int s = 1; s <= s_max; ++s) grid[static_cast<std::size_t>(s - 1)] = s;
    FiberSource source = [&](std::int64_t t) {
        return sample_set(set, resolution,
                          CounterRng::mix(seed ^ static_cast<std::uint64_t>(t)), t);
    };
    const LimitFiberResult result = pullback_limit_fiber(ctx.model, source, tau, grid, tol);
    ctx.write_csv("fiber", fiber_csv(result.fiber, model_quadrature(ctx.model)));
    ctx.write_csv("trace", trace_csv(result.trace));
    ctx.results["tau"] = tau;
    ctx.results["fiber"] = bounds_json(result.fiber);
    ctx.results["converged"] = result.trace.converged;
    ctx.converged = result.trace.converged;
}

void run_forward(TaskContext& ctx) {
    const std::int64_t tau = ctx.cfg.integer_or("task", "tau", 0);
    const int s_max = static_cast<int>(ctx.cfg.integer_or("task", "s_max", 100));
    const double tol = ctx.cfg.number_or("task", "tol", 1e-6);
    const double resolution = ctx.cfg.number_or("task", "resolution", 1e-3);
    const double member_tol = ctx.cfg.number_or("task", "member_tol", 0.0);
    const std::uint64_t seed = static_cast<std::uint64_t>(ctx.cfg.integer_or("task", "seed", 0));
    const SetDescriptor set = set_from_config(ctx.cfg, "set", ctx.model.dim);

    const FiberCloud start =
        sample_set(set, resolution, CounterRng::mix(seed ^ static_cast<std::uint64_t>(tau)), tau);
    const LimitFiberResult result =
        forward_limit_fiber(ctx.model, start, tau, s_max, tol, member_tol);
    ctx.write_csv("fiber", fiber_csv(result.fiber, model_quadrature(ctx.model)));
    ctx.write_csv("trace", trace_csv(result.trace));
    ctx.results["tau"] = tau;
    ctx.results["fiber"] = bounds_json(result.fiber);
    ctx.results["converged"] = result.trace.converged;
    ctx.converged = result.trace.converged;
}

void run_omega(TaskContext& ctx) {
    const std::int64_t tau_lo = ctx.cfg.integer("task", "tau_lo");
    const std::int64_t tau_hi = ctx.cfg.integer("task", "tau_hi");
    const std::uint64_t seed = static_cast<std::uint64_t>(ctx.cfg.integer_or("task", "seed", 0));
    const SetDescriptor set = set_from_config(ctx.cfg, "set", ctx.model.dim);
    const DescriptorFamily family = [&set](std::int64_t) { return set; };

    AttractorParams ap;
    ap.resolution = ctx.cfg.number_or("task", "resolution", 1e-2);
    ap.seed = seed;
    ap.s_max = static_cast<int>(ctx.cfg.integer_or("task", "s_max", 200));
    ap.tol = ctx.cfg.number_or("task", "tol", 1e-6);
    const AttractorFibersResult astar =
        attractor_star_fibers(ctx.model, family, tau_lo, tau_hi, ap);

    const double star_tol = ctx.cfg.number_or("task", "star_tol", 1e-3);
    const OmegaStarResult star = omega_star(astar.fibers, star_tol, 1e-12);

    OmegaForwardParams fp;
    fp.resolution = ctx.cfg.number_or("task", "forward_resolution", ap.resolution);
    fp.seed = seed;
    fp.s_max = ap.s_max;
    fp.tol = ap.tol;
    fp.member_tol = ctx.cfg.number_or("task", "member_tol", 0.0);
    const OmegaForwardResult of = omega_forward(ctx.model, family, tau_lo, tau_hi, fp);

    const double inv_tol = ctx.cfg.number_or("task", "invariance_tol", 10.0 * ap.resolution);
    const InvarianceReport inv = check_invariance(ctx.model, astar.fibers, inv_tol);
    double max_forward_defect = 0.0;
    for (const auto& row : inv.rows)
        max_forward_defect = std::max(max_forward_defect, row.forward_defect);

    AttractionParams atp;
    const std::int64_t att_tau = ctx.cfg.integer_or("task", "attraction_tau", tau_lo);
    for (std::int64_t s = 0; s <= tau_hi - att_tau; ++s) atp.s_grid.push_back(s);
    atp.tol = ctx.cfg.number_or("task", "attraction_tol", 1e-3);
    const FiberCloud att_start = sample_set(
        set, ap.resolution, CounterRng::mix(seed ^ static_cast<std::uint64_t>(att_tau)), att_tau);
    const AttractionResult attraction =
        verify_forward_attraction(ctx.model, astar.fibers, att_start, att_tau, atp);

    const double match_tol = ctx.cfg.number_or("task", "match_tol", 1e-3);
    const bool sets_match = hausdorff_distance(of.omega_plus, star.omega_star) <= match_tol;

    const Quadrature* q = model_quadrature(ctx.model);
    ctx.write_csv("omega_star", fiber_csv(star.omega_star, q));
    ctx.write_csv("omega_minus", fiber_csv(of.omega_minus, q));
    ctx.write_csv("omega_plus", fiber_csv(of.omega_plus, q));
    ctx.write_csv("attraction", trace_csv(attraction.trace));

    ctx.results["tau_lo"] = tau_lo;
    ctx.results["tau_hi"] = tau_hi;
    ctx.results["omega_star"] = bounds_json(star.omega_star);
    ctx.results["omega_minus"] = bounds_json(of.omega_minus);
    ctx.results["omega_plus"] = bounds_json(of.omega_plus);
    ctx.results["pullback_converged"] = astar.converged;
    ctx.results["star_converged"] = star.trace.converged;
    ctx.results["max_forward_invariance_defect"] = max_forward_defect;
    ctx.results["positively_invariant"] = inv.positively_invariant;
    ctx.results["forward_attracting"] = attraction.attracting;
    ctx.results["omega_plus_matches_omega_star"] = sets_match;
    ctx.converged = astar.converged && star.trace.converged;
}

void run_verify(TaskContext& ctx) {
    const std::string check = ctx.cfg.text("task", "check");
    ctx.results["check"] = check;
    const std::uint64_t seed = static_cast<std::uint64_t>(ctx.cfg.integer_or("task", "seed", 0));

    if (check == "process") {
        const std::int64_t samples = ctx.cfg.integer_or("task", "samples", 100);
        const std::int64_t tau_lo = ctx.cfg.integer_or("task", "tau_lo", -10);
        const std::int64_t tau_hi = ctx.cfg.integer_or("task", "tau_hi", 10);
        const std::int64_t span = ctx.cfg.integer_or("task", "span", 20);
        const double lo = ctx.cfg.number_or("task", "state_lo",
                                            ctx.model.domain == Domain::NonnegativeCone ? 0.0
                                                                                        : -1.0);
        const double hi = ctx.cfg.number_or("task", "state_hi", 1.0);
        const CounterRng rng{seed, 0x70c5};
        double worst = 0.0;
        for (std::int64_t i = 0; i < samples; ++i) {
            const std::uint64_t base = static_cast<std::uint64_t>(i) * 8;
            std::int64_t tau = tau_lo + static_cast<std::int64_t>(rng.uniform(base) *
                                                                  static_cast<double>(
                                                                      tau_hi - tau_lo + 1));
            tau = std::min(tau, tau_hi);
            if (ctx.model.time_domain.start)
                tau = std::max(tau, *ctx.model.time_domain.start);
            const std::int64_t len1 =
                1 + static_cast<std::int64_t>(rng.uniform(base + 1) * (span / 2));
            const std::int64_t len2 =
                1 + static_cast<std::int64_t>(rng.uniform(base + 2) * (span / 2));
            State u(ctx.model.dim);
            for (int c = 0; c < ctx.model.dim; ++c)
                u[c] = rng.uniform(base + 3 + static_cast<std::uint64_t>(c), lo, hi);
            worst = std::max(worst, verify_process_property(ctx.model, tau, tau + len1,
                                                            tau + len1 + len2, u));
        }
        ctx.results["samples"] = samples;
        ctx.results["max_defect"] = worst;
        ctx.results["pass"] = worst == 0.0;
        return;
    }

    if (check == "periodicity") {
        if (!ctx.model.period) throw SchemaError("model declares no period");
        const std::int64_t theta = *ctx.model.period;
        const std::int64_t samples = ctx.cfg.integer_or("task", "samples", 100);
        const CounterRng rng{seed, 0x9e10};
        std::vector<PeriodicitySample> set;
        for (std::int64_t i = 0; i < samples; ++i) {
            const std::uint64_t base = static_cast<std::uint64_t>(i) * 4;
            PeriodicitySample s;
            s.tau = static_cast<std::int64_t>(rng.uniform(base, -50.0, 50.0));
            s.t = s.tau + 1 + static_cast<std::int64_t>(rng.uniform(base + 1) * 30.0);
            s.u = State::Constant(ctx.model.dim, rng.uniform(base + 2, 0.0, 3.0));
            set.push_back(std::move(s));
        }
        const double defect = verify_periodicity(ctx.model, theta, set);
        ctx.results["theta"] = theta;
        ctx.results["max_defect"] = defect;
        ctx.results["pass"] = defect == 0.0;
        return;
    }

    if (check == "bounds") {
        const std::int64_t t_lo = ctx.cfg.integer_or("task", "tau_lo", 0);
        const std::int64_t t_hi = ctx.cfg.integer_or("task", "tau_hi", t_lo);
        const std::string variant_name = ctx.cfg.text_or("task", "variant", "growth");
        auto rows = nlohmann::json::array();
        for (std::int64_t t = t_lo; t <= t_hi; ++t) {
            const HypothesisBounds hb = hypothesis_bounds(ctx.model, t);
            nlohmann::json row;
            row["t"] = t;
            row["gamma"] = hb.gamma;
            row["ell"] = hb.ell;
            row["rho"] = hb.rho;
            row["lambda_sup"] = hb.lambda_sup;
            row["rho_plain"] = hb.rho_plain;
            if (hb.rho_analytic) row["rho_analytic"] = *hb.rho_analytic;
            rows.push_back(std::move(row));
        }
        ctx.results["rows"] = std::move(rows);
        if (variant_name == "growth") {
            ctx.results["absorbing_bound"] =
                absorbing_bound(ctx.model, t_hi + 1, AbsorbingVariant::GrowthBall);
        } else if (variant_name == "image") {
            ctx.results["absorbing_bound"] =
                absorbing_bound(ctx.model, t_hi + 1, AbsorbingVariant::ImageBall, t_lo, t_hi);
        } else {
            throw SchemaError("unknown absorbing variant '" + variant_name + "'");
        }
        return;
    }

    if (check == "smallness") {
        const double alpha = ctx.cfg.number("task", "alpha");
        const bool ok = ctx.cfg.has("task", "K")
                            ? ricker_smallness_check(alpha, ctx.cfg.number("task", "K"))
                            : ricker_smallness_check(alpha);
        ctx.results["alpha"] = alpha;
        ctx.results["pass"] = ok;
        return;
    }

    if (check == "gronwall") {
        if (!ctx.model.semilinear)
            throw SchemaError("model declares no semilinear structure");
        const std::int64_t tau = ctx.cfg.integer_or("task", "tau", 0);
        const std::int64_t horizon = ctx.cfg.integer("task", "horizon");
        const State u0 = broadcast(ctx.cfg.numbers("task", "u0"), ctx.model.dim, "task.u0");
        const Trajectory traj = orbit(ctx.model, tau, horizon, u0);
        const double norm0 = u0.lpNorm<Eigen::Infinity>();
        double worst_excess = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < traj.states.size(); ++i) {
            const double bound =
                gronwall_bound(*ctx.model.semilinear, tau, traj.time_at(i), norm0);
            worst_excess = std::max(worst_excess,
                                    traj.states[i].lpNorm<Eigen::Infinity>() - bound);
        }
        ctx.results["horizon"] = horizon;
        ctx.results["max_excess"] = worst_excess;
        ctx.results["pass"] = worst_excess <= 0.0;
        return;
    }

    if (check == "autonomy") {
        const ModelSpec limit = limit_model_from_config(ctx.cfg);
        if (limit.dim != ctx.model.dim)
            throw SchemaError("limit model dimension does not match");
        const SetDescriptor set = set_from_config(ctx.cfg, "set", ctx.model.dim);
        const double resolution = ctx.cfg.number_or("task", "resolution", 0.25);
        AutonomyParams params;
        for (double p : ctx.cfg.numbers("task", "probes"))
            params.tau_probes.push_back(static_cast<std::int64_t>(p));
        params.horizon = static_cast<int>(ctx.cfg.integer_or("task", "horizon", 200));
        const FiberCloud start = sample_set(set, resolution, CounterRng::mix(seed), 0);
        const AutonomyReport report =
            verify_asymptotic_autonomy(ctx.model, limit, start, params);
        auto rows = nlohmann::json::array();
        for (const auto& trace : report.traces) {
            nlohmann::json row;
            row["tau"] = trace.tau;
            row["final"] = trace.sup_dist.back();
            row["slope"] = std::isfinite(trace.slope) ? nlohmann::json(trace.slope)
                                                      : nlohmann::json();
            row["exponential"] = trace.exponential;
            rows.push_back(std::move(row));
        }
        ctx.results["traces"] = std::move(rows);
        ctx.results["pass"] = report.exponential;
        return;
    }

    throw SchemaError("unknown verify check '" + check + "'");
}

}  // namespace

RunOutput run_experiment(const ExperimentConfig& config) {
    const std::string kind = config.text("task", "kind");
    TaskContext ctx{config, model_from_config(config), {}, {}, nlohmann::json::object()};
    ctx.dir = config.text_or("output", "dir", "out");
    ctx.prefix = config.text_or("output", "prefix", kind);
    std::filesystem::create_directories(ctx.dir);

    if (kind == "simulate")
        run_simulate(ctx);
    else if (kind == "pullback")
        run_pullback(ctx);
    else if (kind == "forward")
        run_forward(ctx);
    else if (kind == "omega")
        run_omega(ctx);
    else if (kind == "verify")
        run_verify(ctx);
    else
        throw SchemaError("unknown task kind '" + kind + "'");

    nlohmann::json report;
    report["artifact"] = {{"name", "idescope"}, {"version", artifact_version()}};
    report["config"] = {{"hash", fnv1a_hex(config.source_bytes)}, {"sections", config.data}};
    nlohmann::json model_info;
    model_info["name"] = ctx.model.name;
    model_info["dim"] = ctx.model.dim;
    model_info["time_domain"] = interval_json(ctx.model.time_domain);
    model_info["period"] = ctx.model.period ? nlohmann::json(*ctx.model.period)
                                            : nlohmann::json();
    report["model"] = std::move(model_info);
    report["task"] = {{"kind", kind}};
    report["results"] = std::move(ctx.results);
    report["outputs"] = std::move(ctx.outputs);
    report["converged"] = ctx.converged;

    const std::string report_path = (ctx.dir / (ctx.prefix + "_report.json")).string();
    write_text_file(report_path, canonical_json(report));

    RunOutput out;
    out.report_path = report_path;
    out.files.push_back(report_path);
    for (const std::string& f : ctx.files) out.files.push_back(f);
    out.converged = ctx.converged;
    return out;
}

namespace {

bool numeric_match(double a, double b, double tol) {
    if (a == b) return true;
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= tol * scale;
}

void compare_nodes(const nlohmann::json& got, const nlohmann::json& want,
                   const std::string& path, double tol, CompareResult& out) {
    if (got.is_number() && want.is_number()) {
        ++out.compared;
        const double a = got.get<double>();
        const double b = want.get<double>();
        if (!numeric_match(a, b, tol))
            out.mismatches.push_back(path + ": got " + format_double(a) + " expected " +
                                     format_double(b) + " (|diff| = " +
                                     format_double(std::abs(a - b)) + ")");
        return;
    }
    if (got.type() != want.type()) {
        out.mismatches.push_back(path + ": type mismatch");
        return;
    }
    if (got.is_object()) {
        for (const auto& [key, value] : want.items()) {
            if (key == "wall_time_ms") continue;
            if (!got.contains(key)) {
                out.mismatches.push_back(path + "/" + key + ": missing in report");
                continue;
            }
            compare_nodes(got.at(key), value, path + "/" + key, tol, out);
        }
        for (const auto& [key, value] : got.items())
            if (key != "wall_time_ms" && !want.contains(key))
                out.mismatches.push_back(path + "/" + key + ": not in golden file");
        return;
    }
    if (got.is_array()) {
        if (got.size() != want.size()) {
            out.mismatches.push_back(path + ": array length " + std::to_string(got.size()) +
                                     " vs " + std::to_string(want.size()));
            return;
        }
        for (std::size_t i = 0; i < got.size(); ++i)
            compare_nodes(got[i], want[i], path + "/" + std::to_string(i), tol, out);
        return;
    }
    if (got != want) out.mismatches.push_back(path + ": value mismatch");
}

}  // namespace

CompareResult compare_golden(const std::string& report_path, const std::string& golden_path,
                             double tol) {
    nlohmann::json got, want;
    try {
        got = nlohmann::json::parse(read_text_file(report_path));
        want = nlohmann::json::parse(read_text_file(golden_path));
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("report comparison needs valid JSON: ") + e.what());
    } catch (const std::runtime_error& e) {
        throw SchemaError(e.what());
    }
    CompareResult out;
    compare_nodes(got, want, "", tol, out);
    out.match = out.mismatches.empty();
    return out;
}

std::string artifact_version() { return "0.1.0"; }

} // namespace idescope
