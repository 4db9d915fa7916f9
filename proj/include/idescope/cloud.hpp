#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "idescope/model.hpp"

namespace idescope {

enum class Provenance { Sampled, Iterated, Intersected, Closure };

/// Finite point cloud approximating one fibre of a nonautonomous set.
/// `resolution` records the sampling mesh of the source set; all set claims
/// derived from clouds are only meaningful up to max(resolution, tol).
struct FiberCloud {
    std::int64_t time = 0;
    double resolution = 0.0;
    Provenance provenance = Provenance::Sampled;
    std::vector<State> points;

    int dim() const { return points.empty() ? 0 : static_cast<int>(points[0].size()); }
    bool empty() const { return points.empty(); }

    /// Componentwise bounding box; for scalar clouds this is the interval
    /// hull [min, max].
    std::pair<State, State> bounds() const;
    double sup_norm() const;
};

/// Hausdorff semidistance dist(a, b) = sup_{p in a} inf_{q in b} |p - q|_inf.
double hausdorff_semidistance(const FiberCloud& a, const FiberCloud& b);

/// Symmetric Hausdorff distance max(dist(a,b), dist(b,a)).
double hausdorff_distance(const FiberCloud& a, const FiberCloud& b);

double dist_point_to_cloud(const State& p, const FiberCloud& cloud);

/// Description of a samplable set: an axis box, a sup-norm ball, or an
/// explicit point list.
struct SetDescriptor {
    enum class Kind { Box, Ball, Points };
    Kind kind = Kind::Box;
    State lo, hi;                 // Box
    State center;                 // Ball
    double radius = 0.0;          // Ball
    std::vector<State> points;    // Points

    int dim() const;
    bool contains(const State& p, double slack) const;
    /// Box enclosing the set (balls become boxes; point lists their hull).
    std::pair<State, State> bounding_box() const;

    static SetDescriptor interval(double lo, double hi);
    static SetDescriptor box(State lo, State hi);
    static SetDescriptor ball(State center, double radius);
    static SetDescriptor explicit_points(std::vector<State> pts);
};

/// Deterministic sample of a descriptor. Dimensions up to three use a
/// grid-plus-jitter scheme with mesh <= resolution that contains every corner
/// of the bounding box exactly; higher dimensions fall back to the corners,
/// centre, axis midpoints and a seeded uniform fill, with `resolution`
/// recorded as nominal metadata only.
FiberCloud sample_set(const SetDescriptor& set, double resolution, std::uint64_t seed,
                      std::int64_t time = 0);

/// Union of clouds with duplicate points (sup-norm distance <= merge_tol)
/// removed.
FiberCloud merge_clouds(const std::vector<FiberCloud>& clouds, double merge_tol = 1e-12);

/// Points of `candidates` lying within `tol` of `reference`.
FiberCloud filter_within(const FiberCloud& candidates, const FiberCloud& reference, double tol);

/// Evenly resample the interval hull of a scalar cloud at the given
/// resolution (keeping the exact endpoints). Only valid when the underlying
/// set is known to be an interval.
FiberCloud resample_interval_hull(const FiberCloud& cloud, double resolution);

/// Image cloud under one application of F_t; resamples the interval hull
/// afterwards for models with `interval_fibers` set.
FiberCloud step_cloud(const ModelSpec& model, std::int64_t t, const FiberCloud& cloud);

} // namespace idescope
