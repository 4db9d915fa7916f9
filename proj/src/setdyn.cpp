#include "idescope/setdyn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include "idescope/errors.hpp"
#include "idescope/rng.hpp"

namespace idescope {

namespace {

std::uint64_t time_seed(std::uint64_t seed, std::int64_t time) {
    return CounterRng::mix(seed ^ (static_cast<std::uint64_t>(time) * 0x9e3779b97f4a7c15ULL));
}

FiberCloud evolve_cloud(const ModelSpec& model, FiberCloud cloud, std::int64_t t) {
    while (cloud.time < t) cloud = step_cloud(model, cloud.time, cloud);
    return cloud;
}

// Deepest admissible pullback depth below tau, capped at s_max.
int pullback_depth(const ModelSpec& model, std::int64_t tau, int s_max) {
    if (!model.time_domain.start) return s_max;
    const std::int64_t depth = tau - *model.time_domain.start;
    return static_cast<int>(std::min<std::int64_t>(s_max, std::max<std::int64_t>(depth, 0)));
}

FiberCloud subsample_cloud(const FiberCloud& cloud, std::size_t cap) {
    if (cap == 0 || cloud.points.size() <= cap) return cloud;
    FiberCloud out = cloud;
    out.points.clear();
    const std::size_t n = cloud.points.size();
    for (std::size_t i = 0; i < cap; ++i)
        out.points.push_back(cloud.points[cap == 1 ? 0 : (i * (n - 1)) / (cap - 1)]);
    return out;
}

double tail_fit_slope(const std::vector<std::pair<double, double>>& samples) {
    const double n = static_cast<double>(samples.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : samples) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double var = sxx - sx * sx / n;
    if (var <= 0.0) return 0.0;
    return (sxy - sx * sy / n) / var;
}

}  // namespace

LimitFiberResult pullback_limit_fiber(const ModelSpec& model, const FiberSource& source,
                                      std::int64_t tau, const std::vector<std::int64_t>& s_grid,
                                      double tol) {
    if (s_grid.empty()) throw SchemaError("pullback grid must not be empty");
    std::vector<std::int64_t> grid = s_grid;
    std::sort(grid.begin(), grid.end());
    if (grid.front() < 0) throw SchemaError("pullback depths must be nonnegative");

    LimitFiberResult out;
    bool have_prev = false;
    FiberCloud prev;
    for (std::int64_t s : grid) {
        FiberCloud start = source(tau - s);
        start.time = tau - s;
        FiberCloud cur = evolve_cloud(model, start, tau);
        if (have_prev) {
            const double d = hausdorff_distance(prev, cur);
            out.trace.entries.emplace_back(s, d);
            prev = std::move(cur);
            if (d < tol) {
                out.trace.converged = true;
                break;
            }
        } else {
            prev = std::move(cur);
            have_prev = true;
        }
    }
    out.fiber = std::move(prev);
    return out;
}

namespace {

// Samples a handful of fibres of the family, steps them once and requires the
// images to stay inside the next fibre up to the given slack.
void precheck_positive_invariance(const ModelSpec& model, const DescriptorFamily& absorbing,
                                  std::int64_t tau_lo, std::int64_t tau_hi,
                                  const AttractorParams& params) {
    std::set<std::int64_t> probes{tau_lo, (tau_lo + tau_hi) / 2, tau_hi};
    for (int back : {params.s_max, params.s_max / 2, 7, 1})
        probes.insert(tau_lo - static_cast<std::int64_t>(back));
    for (std::int64_t tau : probes) {
        if (!model.time_domain.step_admissible(tau)) continue;
        const SetDescriptor set = absorbing(tau);
        const auto [lo, hi] = set.bounding_box();
        const double span = (hi - lo).maxCoeff();
        const double res = std::max(span / 16.0, 1e-9);
        const FiberCloud cloud = sample_set(set, res, time_seed(params.seed, tau) ^ 0x1, tau);
        const SetDescriptor next = absorbing(tau + 1);
        for (const State& p : cloud.points) {
            const State image = step(model, tau, p);
            if (!next.contains(image, params.invariance_slack)) {
                std::ostringstream msg;
                msg << "absorbing family is not positively invariant at t = " << tau
                    << ": image component left the next fibre by "
                    << params.invariance_slack;
                throw ConstraintError(msg.str());
            }
        }
    }
}

}  // namespace

AttractorFibersResult attractor_star_fibers(const ModelSpec& model,
                                            const DescriptorFamily& absorbing,
                                            std::int64_t tau_lo, std::int64_t tau_hi,
                                            const AttractorParams& params) {
    if (tau_hi < tau_lo) throw SchemaError("fibre range is empty");
    if (!(params.resolution > 0.0)) throw SchemaError("resolution must be positive");
    if (params.s_max < 1) throw SchemaError("pullback horizon must be positive");
    precheck_positive_invariance(model, absorbing, tau_lo, tau_hi, params);

    AttractorFibersResult out;
    out.converged = true;
    for (std::int64_t tau = tau_lo; tau <= tau_hi; ++tau) {
        FiberCloud prev =
            sample_set(absorbing(tau), params.resolution, time_seed(params.seed, tau), tau);
        FiberTrace trace;
        const int depth = pullback_depth(model, tau, params.s_max);
        for (int s = 1; s <= depth; s = s < depth ? std::min(2 * s, depth) : depth + 1) {
            const std::int64_t t0 = tau - s;
            FiberCloud start =
                sample_set(absorbing(t0), params.resolution, time_seed(params.seed, t0), t0);
            FiberCloud cur = evolve_cloud(model, start, tau);
            const double d = hausdorff_distance(prev, cur);
            trace.entries.emplace_back(s, d);
            prev = std::move(cur);
        }
        trace.converged = trace.entries.empty() || trace.entries.back().second < params.tol;
        out.converged = out.converged && trace.converged;
        out.fibers.emplace(tau, std::move(prev));
        out.traces.emplace(tau, std::move(trace));
    }
    return out;
}

LimitFiberResult forward_limit_fiber(const ModelSpec& model, const FiberCloud& start,
                                     std::int64_t tau, int s_max, double tol,
                                     double membership_tol) {
    if (s_max < 1) throw SchemaError("forward horizon must be positive");
    if (start.empty()) throw SchemaError("start cloud is empty");
    const double mtol =
        membership_tol > 0.0 ? membership_tol : std::max(tol, start.resolution);

    FiberCloud candidates = start;
    candidates.time = tau;
    FiberCloud images = start;
    images.time = tau;
    LimitFiberResult out;
    const int window = std::max(5, s_max / 10);
    int quiet_run = 0;
    for (int s = 1; s <= s_max; ++s) {
        if (!model.time_domain.step_admissible(tau + s - 1)) break;
        images = step_cloud(model, tau + s - 1, images);
        FiberCloud kept = filter_within(candidates, images, mtol);
        if (kept.empty()) {
            // No start point survives near the current image: the clouds
            // drift instead of nesting. The limit object is then carried by
            // the image tail, so restart the representation from it.
            kept = images;
            kept.provenance = Provenance::Closure;
        }
        const double d = hausdorff_semidistance(candidates, kept);
        out.trace.entries.emplace_back(s, d);
        quiet_run = d < tol ? quiet_run + 1 : 0;
        kept.time = tau;
        candidates = std::move(kept);
        if (quiet_run >= window) break;
    }
    out.trace.converged =
        !out.trace.entries.empty() &&
        quiet_run >= std::min<int>(window, static_cast<int>(out.trace.entries.size()));
    out.fiber = std::move(candidates);
    return out;
}

OmegaForwardResult omega_forward(const ModelSpec& model, const DescriptorFamily& absorbing,
                                 std::int64_t tau_lo, std::int64_t tau_hi,
                                 const OmegaForwardParams& params) {
    if (tau_hi < tau_lo) throw SchemaError("fibre range is empty");
    if (!(params.resolution > 0.0)) throw SchemaError("resolution must be positive");
    const double mtol =
        params.member_tol > 0.0 ? params.member_tol : std::max(params.resolution, params.tol);

    OmegaForwardResult out;
    for (std::int64_t tau = tau_lo; tau <= tau_hi; ++tau) {
        FiberCloud start =
            sample_set(absorbing(tau), params.resolution, time_seed(params.seed, tau), tau);
        LimitFiberResult fiber =
            forward_limit_fiber(model, start, tau, params.s_max, params.tol, mtol);
        out.fibers.emplace(tau, std::move(fiber.fiber));
    }

    std::vector<FiberCloud> all;
    all.reserve(out.fibers.size());
    for (const auto& [tau, fiber] : out.fibers) all.push_back(fiber);
    out.omega_plus = merge_clouds(all);
    out.omega_plus.provenance = Provenance::Closure;
    out.omega_plus.time = 0;
    out.omega_plus.resolution = params.resolution;

    FiberCloud common = out.omega_plus;
    for (const auto& [tau, fiber] : out.fibers) {
        common = filter_within(common, fiber, mtol);
        if (common.empty()) break;
    }
    common.provenance = Provenance::Intersected;
    common.time = 0;
    common.resolution = params.resolution;
    out.omega_minus = std::move(common);
    return out;
}

OmegaStarResult omega_star(const FiberMap& attractor_fibers, double tol, double member_tol) {
    if (attractor_fibers.empty()) throw SchemaError("attractor fibre map is empty");
    std::vector<const FiberCloud*> fibers;
    fibers.reserve(attractor_fibers.size());
    std::vector<std::int64_t> keys;
    for (const auto& [tau, fiber] : attractor_fibers) {
        keys.push_back(tau);
        fibers.push_back(&fiber);
    }
    const std::size_t n = fibers.size();
    const std::size_t window =
        std::max<std::size_t>(2, std::min<std::size_t>(8, n / 4 + 1));

    OmegaStarResult out;
    FiberCloud suffix = *fibers.back();
    std::vector<std::pair<std::int64_t, double>> reversed;
    for (std::size_t idx = n - 1; idx-- > 0;) {
        FiberCloud next = merge_clouds({*fibers[idx], suffix}, member_tol);
        reversed.emplace_back(keys[idx], hausdorff_distance(next, suffix));
        suffix = std::move(next);
        if (n - idx == window) out.omega_star = suffix;
    }
    if (n <= window) out.omega_star = suffix;
    out.omega_star.provenance = Provenance::Closure;
    std::reverse(reversed.begin(), reversed.end());
    out.trace.entries = std::move(reversed);

    out.trace.converged = true;
    const std::size_t tail = std::min(out.trace.entries.size(), window - 1);
    for (std::size_t i = out.trace.entries.size() - tail; i < out.trace.entries.size(); ++i)
        out.trace.converged = out.trace.converged && out.trace.entries[i].second < tol;
    return out;
}

InvarianceReport check_invariance(const ModelSpec& model, const FiberMap& fibers, double tol) {
    InvarianceReport report;
    report.tol = tol;
    bool fwd_ok = true, bwd_ok = true;
    bool any = false;
    for (const auto& [tau, fiber] : fibers) {
        auto next = fibers.find(tau + 1);
        if (next == fibers.end()) continue;
        if (!model.time_domain.step_admissible(tau)) continue;
        const FiberCloud image = step_cloud(model, tau, fiber);
        InvarianceRow row;
        row.tau = tau;
        row.forward_defect = hausdorff_semidistance(image, next->second);
        row.backward_defect = hausdorff_semidistance(next->second, image);
        fwd_ok = fwd_ok && row.forward_defect <= tol;
        bwd_ok = bwd_ok && row.backward_defect <= tol;
        any = true;
        report.rows.push_back(row);
    }
    report.positively_invariant = any && fwd_ok;
    report.invariant = any && fwd_ok && bwd_ok;
    return report;
}

AttractionResult verify_forward_attraction(const ModelSpec& model, const FiberMap& targets,
                                           const FiberCloud& start, std::int64_t tau,
                                           const AttractionParams& params) {
    if (params.s_grid.empty()) throw SchemaError("attraction grid must not be empty");
    std::vector<std::int64_t> grid = params.s_grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (grid.front() < 0) throw SchemaError("attraction grid must be nonnegative");

    AttractionResult out;
    FiberCloud cloud = start;
    cloud.time = tau;
    std::size_t next = 0;
    for (std::int64_t s = 0; s <= grid.back(); ++s) {
        if (next < grid.size() && grid[next] == s) {
            auto it = targets.find(tau + s);
            if (it == targets.end())
                throw SchemaError("no target fibre at time " + std::to_string(tau + s));
            out.trace.entries.emplace_back(s, hausdorff_semidistance(cloud, it->second));
            ++next;
        }
        if (s < grid.back()) cloud = step_cloud(model, tau + s, cloud);
    }
    const auto& entries = out.trace.entries;
    const double final_dist = entries.back().second;
    const std::size_t q = entries.size() - 1 - (entries.size() - 1) / 4;
    out.attracting = final_dist < params.tol &&
                     final_dist <= entries[q].second + params.tol;
    out.trace.converged = final_dist < params.tol;
    return out;
}

AsymptoticInvarianceReport verify_asymptotic_invariance(
    const ModelSpec& model, const FiberCloud& omega_plus,
    const AsymptoticInvarianceParams& params) {
    if (omega_plus.empty()) throw SchemaError("limit set cloud is empty");
    if (params.eps_list.empty() || params.tau_probes.empty())
        throw SchemaError("asymptotic invariance check needs eps values and probe times");

    AsymptoticInvarianceReport report;
    report.mode = params.mode;
    std::vector<std::int64_t> probes = params.tau_probes;
    std::sort(probes.begin(), probes.end());
    const FiberCloud sub = subsample_cloud(omega_plus, params.max_probe_points);

    if (params.mode == AsymptoticMode::Positive) {
        std::vector<double> excursions;
        for (std::int64_t tau : probes) {
            FiberCloud cloud = sub;
            cloud.time = tau;
            double m = 0.0;
            for (int s = 1; s <= params.horizon; ++s) {
                if (!model.time_domain.step_admissible(tau + s - 1)) break;
                cloud = step_cloud(model, tau + s - 1, cloud);
                m = std::max(m, hausdorff_semidistance(cloud, omega_plus));
            }
            excursions.push_back(m);
        }
        std::vector<double> suffix(excursions.size());
        double running = 0.0;
        for (std::size_t i = excursions.size(); i-- > 0;) {
            running = std::max(running, excursions[i]);
            suffix[i] = running;
        }
        report.verified = true;
        for (double eps : params.eps_list) {
            std::optional<std::int64_t> threshold;
            for (std::size_t i = 0; i < suffix.size(); ++i)
                if (suffix[i] < eps) {
                    threshold = probes[i];
                    break;
                }
            report.verified = report.verified && threshold.has_value();
            report.thresholds.emplace_back(eps, threshold);
        }
        return report;
    }

    report.verified = true;
    for (std::int64_t tau : probes) {
        // Image clouds phi(tau + s; tau + s - lag, omega) for each s.
        std::vector<std::pair<std::int64_t, FiberCloud>> images;
        for (std::int64_t s = params.lag; s <= params.horizon; ++s) {
            const std::int64_t t0 = tau + s - params.lag;
            bool ok = true;
            for (std::int64_t r = t0; r < tau + s; ++r)
                ok = ok && model.time_domain.step_admissible(r);
            if (!ok) continue;
            FiberCloud cloud = sub;
            cloud.time = t0;
            images.emplace_back(s, evolve_cloud(model, std::move(cloud), tau + s));
        }
        if (images.empty())
            throw SchemaError("no admissible probe window for the witness search");
        for (double eps : params.eps_list) {
            for (const State& target : sub.points) {
                AsymptoticWitness w;
                w.eps = eps;
                w.tau = tau;
                w.u_star = target;
                w.distance = std::numeric_limits<double>::infinity();
                for (const auto& [s, cloud] : images) {
                    const double d = dist_point_to_cloud(target, cloud);
                    if (d < w.distance) {
                        w.distance = d;
                        w.s_star = s;
                    }
                    if (d <= eps) {
                        w.found = true;
                        break;
                    }
                }
                report.verified = report.verified && w.found;
                report.witnesses.push_back(std::move(w));
            }
        }
    }
    return report;
}

AutonomyReport verify_asymptotic_autonomy(const ModelSpec& model, const ModelSpec& limit_model,
                                          const FiberCloud& start_samples,
                                          const AutonomyParams& params) {
    if (start_samples.empty()) throw SchemaError("start cloud is empty");
    if (params.tau_probes.empty()) throw SchemaError("autonomy check needs probe times");
    if (!(params.fit_fraction > 0.0) || !(params.fit_fraction <= 1.0))
        throw SchemaError("fit fraction must lie in (0, 1]");

    AutonomyReport report;
    report.exponential = true;
    for (std::int64_t tau : params.tau_probes) {
        AutonomyTrace trace;
        trace.tau = tau;
        std::vector<State> p = start_samples.points;
        std::vector<State> q = start_samples.points;
        trace.sup_dist.push_back(0.0);
        for (int s = 1; s <= params.horizon; ++s) {
            const std::int64_t t = tau + s - 1;
            if (!model.time_domain.step_admissible(t) ||
                !limit_model.time_domain.step_admissible(t))
                break;
            double d = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i) {
                p[i] = step(model, t, p[i]);
                q[i] = step(limit_model, t, q[i]);
                d = std::max(d, (p[i] - q[i]).lpNorm<Eigen::Infinity>());
            }
            trace.sup_dist.push_back(d);
        }

        std::vector<std::pair<double, double>> logs;
        for (std::size_t s = 1; s < trace.sup_dist.size(); ++s)
            if (trace.sup_dist[s] > 0.0)
                logs.emplace_back(static_cast<double>(s), std::log(trace.sup_dist[s]));
        const double final_dist = trace.sup_dist.back();
        if (logs.size() < 3) {
            trace.exponential = final_dist == 0.0;
        } else if (final_dist == 0.0 ||
                   logs.back().first < static_cast<double>(trace.sup_dist.size()) - 1.5) {
            // The gap collapsed to exact zero before the horizon.
            trace.exponential = true;
            trace.slope = -std::numeric_limits<double>::infinity();
        } else {
            const std::size_t count = std::max<std::size_t>(
                3, static_cast<std::size_t>(std::ceil(params.fit_fraction *
                                                      static_cast<double>(logs.size()))));
            std::vector<std::pair<double, double>> tail(
                logs.end() - static_cast<std::ptrdiff_t>(std::min(count, logs.size())),
                logs.end());
            trace.slope = tail_fit_slope(tail);
            trace.exponential = trace.slope < params.slope_threshold;
        }
        report.exponential = report.exponential && trace.exponential;
        report.traces.push_back(std::move(trace));
    }
    return report;
}

} // namespace idescope
