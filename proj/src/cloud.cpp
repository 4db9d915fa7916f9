#include "idescope/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "idescope/errors.hpp"
#include "idescope/rng.hpp"

namespace idescope {

namespace {

// Sorted scalar view for fast nearest-point queries on 1-d clouds.
std::vector<double> sorted_values(const FiberCloud& cloud) {
    std::vector<double> v;
    v.reserve(cloud.points.size());
    for (const auto& p : cloud.points) v.push_back(p[0]);
    std::sort(v.begin(), v.end());
    return v;
}

double nearest_sorted(const std::vector<double>& sorted, double x) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
    double best = std::numeric_limits<double>::infinity();
    if (it != sorted.end()) best = std::min(best, std::abs(*it - x));
    if (it != sorted.begin()) best = std::min(best, std::abs(*(it - 1) - x));
    return best;
}

double nearest_brute(const State& p, const FiberCloud& cloud) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : cloud.points) {
        best = std::min(best, (p - q).lpNorm<Eigen::Infinity>());
        if (best == 0.0) break;
    }
    return best;
}

} // namespace

std::pair<State, State> FiberCloud::bounds() const {
    if (points.empty()) throw SchemaError("bounds of an empty cloud");
    State lo = points[0], hi = points[0];
    for (const auto& p : points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return {lo, hi};
}

double FiberCloud::sup_norm() const {
    double worst = 0.0;
    for (const auto& p : points) worst = std::max(worst, p.lpNorm<Eigen::Infinity>());
    return worst;
}

double hausdorff_semidistance(const FiberCloud& a, const FiberCloud& b) {
    if (a.empty() || b.empty()) throw SchemaError("hausdorff of an empty cloud");
    if (a.dim() != b.dim()) throw SchemaError("hausdorff of clouds with different dimensions");
    double worst = 0.0;
    if (a.dim() == 1) {
        const auto sorted = sorted_values(b);
        for (const auto& p : a.points) worst = std::max(worst, nearest_sorted(sorted, p[0]));
    } else {
        for (const auto& p : a.points) worst = std::max(worst, nearest_brute(p, b));
    }
    return worst;
}

double hausdorff_distance(const FiberCloud& a, const FiberCloud& b) {
    return std::max(hausdorff_semidistance(a, b), hausdorff_semidistance(b, a));
}

double dist_point_to_cloud(const State& p, const FiberCloud& cloud) {
    if (cloud.empty()) throw SchemaError("distance to an empty cloud");
    return nearest_brute(p, cloud);
}

int SetDescriptor::dim() const {
    switch (kind) {
        case Kind::Box: return static_cast<int>(lo.size());
        case Kind::Ball: return static_cast<int>(center.size());
        case Kind::Points: return points.empty() ? 0 : static_cast<int>(points[0].size());
    }
    return 0;
}

bool SetDescriptor::contains(const State& p, double slack) const {
    switch (kind) {
        case Kind::Box:
            for (Eigen::Index i = 0; i < lo.size(); ++i) {
                if (p[i] < lo[i] - slack || p[i] > hi[i] + slack) return false;
            }
            return true;
        case Kind::Ball:
            return (p - center).lpNorm<Eigen::Infinity>() <= radius + slack;
        case Kind::Points: {
            for (const auto& q : points) {
                if ((p - q).lpNorm<Eigen::Infinity>() <= slack) return true;
            }
            return false;
        }
    }
    return false;
}

std::pair<State, State> SetDescriptor::bounding_box() const {
    switch (kind) {
        case Kind::Box: return {lo, hi};
        case Kind::Ball: return {center.array() - radius, center.array() + radius};
        case Kind::Points: {
            if (points.empty()) throw SchemaError("bounding box of an empty point list");
            State l = points[0], h = points[0];
            for (const auto& p : points) {
                l = l.cwiseMin(p);
                h = h.cwiseMax(p);
            }
            return {l, h};
        }
    }
    throw SchemaError("unknown descriptor kind");
}

SetDescriptor SetDescriptor::interval(double lo, double hi) {
    State l(1), h(1);
    l[0] = lo;
    h[0] = hi;
    return box(l, h);
}

SetDescriptor SetDescriptor::box(State lo, State hi) {
    if (lo.size() != hi.size() || lo.size() == 0) throw SchemaError("box needs matching bounds");
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
        if (!(lo[i] <= hi[i])) throw SchemaError("box needs lo <= hi per axis");
    }
    SetDescriptor d;
    d.kind = Kind::Box;
    d.lo = std::move(lo);
    d.hi = std::move(hi);
    return d;
}

SetDescriptor SetDescriptor::ball(State center, double radius) {
    if (center.size() == 0 || !(radius >= 0.0)) throw SchemaError("ball needs a center and r >= 0");
    SetDescriptor d;
    d.kind = Kind::Ball;
    d.center = std::move(center);
    d.radius = radius;
    return d;
}

SetDescriptor SetDescriptor::explicit_points(std::vector<State> pts) {
    if (pts.empty()) throw SchemaError("explicit point set must be nonempty");
    SetDescriptor d;
    d.kind = Kind::Points;
    d.points = std::move(pts);
    return d;
}

namespace {

FiberCloud sample_box_grid(const State& lo, const State& hi, double resolution,
                           std::uint64_t seed, std::int64_t time) {
    const int dim = static_cast<int>(lo.size());
    std::vector<int> counts(dim);
    std::vector<double> spacing(dim);
    std::size_t total = 1;
    for (int i = 0; i < dim; ++i) {
        const double span = hi[i] - lo[i];
        counts[i] = span == 0.0 ? 1 : static_cast<int>(std::ceil(span / resolution)) + 1;
        spacing[i] = counts[i] > 1 ? span / (counts[i] - 1) : 0.0;
        total *= static_cast<std::size_t>(counts[i]);
    }
    if (total > 2000000) {
        throw SchemaError("sample_set: grid of " + std::to_string(total) +
                          " points exceeds the sampling budget; coarsen the resolution");
    }
    CounterRng rng{seed, 0x5e7d};
    FiberCloud cloud;
    cloud.time = time;
    cloud.resolution = resolution;
    cloud.provenance = Provenance::Sampled;
    cloud.points.reserve(total);
    std::vector<int> idx(dim, 0);
    for (std::size_t linear = 0; linear < total; ++linear) {
        State p(dim);
        for (int i = 0; i < dim; ++i) {
            const bool edge = idx[i] == 0 || idx[i] == counts[i] - 1;
            double x = lo[i] + spacing[i] * idx[i];
            if (!edge) {
                // jitter interior points by at most a quarter cell; the mesh
                // stays below the requested resolution and corners are exact
                const double j = rng.uniform(linear * static_cast<std::uint64_t>(dim) + i,
                                             -0.25, 0.25);
                x += j * spacing[i];
            }
            p[i] = x;
        }
        cloud.points.push_back(std::move(p));
        for (int i = 0; i < dim; ++i) {
            if (++idx[i] < counts[i]) break;
            idx[i] = 0;
        }
    }
    return cloud;
}

FiberCloud sample_box_high_dim(const State& lo, const State& hi, double resolution,
                               std::uint64_t seed, std::int64_t time) {
    const int dim = static_cast<int>(lo.size());
    FiberCloud cloud;
    cloud.time = time;
    cloud.resolution = resolution;
    cloud.provenance = Provenance::Sampled;
    const State mid = 0.5 * (lo + hi);
    cloud.points.push_back(lo);
    cloud.points.push_back(hi);
    cloud.points.push_back(mid);
    for (int i = 0; i < dim; ++i) {
        State a = mid, b = mid;
        a[i] = lo[i];
        b[i] = hi[i];
        cloud.points.push_back(std::move(a));
        cloud.points.push_back(std::move(b));
    }
    CounterRng rng{seed, 0x41d1};
    const int fill = 128;
    for (int k = 0; k < fill; ++k) {
        State p(dim);
        for (int i = 0; i < dim; ++i) {
            p[i] = rng.uniform(static_cast<std::uint64_t>(k) * dim + i, lo[i], hi[i]);
        }
        cloud.points.push_back(std::move(p));
    }
    return cloud;
}

} // namespace

FiberCloud sample_set(const SetDescriptor& set, double resolution, std::uint64_t seed,
                      std::int64_t time) {
    if (!(resolution > 0.0)) throw SchemaError("sample_set requires resolution > 0");
    if (set.kind == SetDescriptor::Kind::Points) {
        FiberCloud cloud;
        cloud.time = time;
        cloud.resolution = resolution;
        cloud.provenance = Provenance::Sampled;
        cloud.points = set.points;
        return cloud;
    }
    const auto [lo, hi] = set.bounding_box();
    if (lo.size() <= 3) return sample_box_grid(lo, hi, resolution, seed, time);
    return sample_box_high_dim(lo, hi, resolution, seed, time);
}

FiberCloud merge_clouds(const std::vector<FiberCloud>& clouds, double merge_tol) {
    if (clouds.empty()) throw SchemaError("merge of zero clouds");
    FiberCloud out;
    out.time = clouds.back().time;
    out.provenance = Provenance::Closure;
    out.resolution = 0.0;
    std::size_t total = 0;
    for (const auto& c : clouds) {
        out.resolution = std::max(out.resolution, c.resolution);
        total += c.points.size();
    }
    const int dim = clouds[0].dim();
    // lexicographic sweep: points within merge_tol share first coordinates
    std::vector<const State*> all;
    all.reserve(total);
    for (const auto& c : clouds) {
        if (c.dim() != dim) throw SchemaError("merge of clouds with different dimensions");
        for (const auto& p : c.points) all.push_back(&p);
    }
    std::sort(all.begin(), all.end(), [](const State* a, const State* b) {
        for (Eigen::Index i = 0; i < a->size(); ++i) {
            if ((*a)[i] != (*b)[i]) return (*a)[i] < (*b)[i];
        }
        return false;
    });
    out.points.reserve(total);
    for (const State* p : all) {
        bool dup = false;
        for (auto it = out.points.rbegin(); it != out.points.rend(); ++it) {
            if ((*p)[0] - (*it)[0] > merge_tol) break;
            if ((*p - *it).lpNorm<Eigen::Infinity>() <= merge_tol) {
                dup = true;
                break;
            }
        }
        if (!dup) out.points.push_back(*p);
    }
    return out;
}

FiberCloud filter_within(const FiberCloud& candidates, const FiberCloud& reference, double tol) {
    FiberCloud out;
    out.time = candidates.time;
    out.resolution = candidates.resolution;
    out.provenance = Provenance::Intersected;
    if (candidates.dim() == 1) {
        const auto sorted = sorted_values(reference);
        for (const auto& p : candidates.points) {
            if (nearest_sorted(sorted, p[0]) <= tol) out.points.push_back(p);
        }
    } else {
        for (const auto& p : candidates.points) {
            if (nearest_brute(p, reference) <= tol) out.points.push_back(p);
        }
    }
    return out;
}

FiberCloud resample_interval_hull(const FiberCloud& cloud, double resolution) {
    if (cloud.dim() != 1) throw SchemaError("interval hull resampling needs a scalar cloud");
    if (!(resolution > 0.0)) throw SchemaError("interval hull resampling needs resolution > 0");
    const auto [lo, hi] = cloud.bounds();
    FiberCloud out;
    out.time = cloud.time;
    out.resolution = resolution;
    out.provenance = Provenance::Closure;
    const double span = hi[0] - lo[0];
    const int count = span == 0.0 ? 1 : static_cast<int>(std::ceil(span / resolution)) + 1;
    out.points.reserve(count);
    for (int i = 0; i < count; ++i) {
        State p(1);
        p[0] = count == 1 ? lo[0] : lo[0] + span * i / (count - 1);
        out.points.push_back(std::move(p));
    }
    // keep the exact endpoints
    out.points.front()[0] = lo[0];
    out.points.back()[0] = hi[0];
    return out;
}

FiberCloud step_cloud(const ModelSpec& model, std::int64_t t, const FiberCloud& cloud) {
    FiberCloud out;
    out.time = t + 1;
    out.resolution = cloud.resolution;
    out.provenance = Provenance::Iterated;
    out.points.reserve(cloud.points.size());
    for (const auto& p : cloud.points) out.points.push_back(step(model, t, p));
    if (model.interval_fibers && model.dim == 1 && cloud.resolution > 0.0) {
        return resample_interval_hull(out, cloud.resolution);
    }
    return out;
}

} // namespace idescope
