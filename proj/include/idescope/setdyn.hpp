#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "idescope/cloud.hpp"
#include "idescope/model.hpp"

namespace idescope {

using FiberMap = std::map<std::int64_t, FiberCloud>;
using FiberSource = std::function<FiberCloud(std::int64_t)>;
using DescriptorFamily = std::function<SetDescriptor(std::int64_t)>;

/// Cauchy trace of an iterated-set computation: per grid value s the change
/// max(dist(prev, cur), dist(cur, prev)) between successive approximations.
struct FiberTrace {
    std::vector<std::pair<std::int64_t, double>> entries;
    bool converged = false;
};

struct LimitFiberResult {
    FiberCloud fiber;
    FiberTrace trace;
};

/// Pullback approximation of the limit-set fibre at tau: iterates the clouds
/// phi(tau; tau - s, source(tau - s)) over the increasing grid and stops when
/// successive clouds are Cauchy under both semidistances.
LimitFiberResult pullback_limit_fiber(const ModelSpec& model, const FiberSource& source,
                                      std::int64_t tau, const std::vector<std::int64_t>& s_grid,
                                      double tol);

struct AttractorParams {
    double resolution = 1e-3;
    std::uint64_t seed = 0;
    int s_max = 400;
    double tol = 1e-6;
    /// Numerical slack for the positive invariance precheck.
    double invariance_slack = 1e-9;
};

struct AttractorFibersResult {
    FiberMap fibers;
    std::map<std::int64_t, FiberTrace> traces;
    bool converged = false;  // every fibre was Cauchy-stopped below tol
};

/// Fibres A*(tau) = intersection_s phi(tau; tau - s, A(tau - s)) of the
/// maximal invariant set inside a positively invariant absorbing family.
/// The nested intersection is evaluated by restarted pullback clouds at
/// geometrically spaced depths up to s_max. All scheduled depths are
/// evaluated: pullback sequences through sign-changing growth can plateau
/// far from their limit for O(tau) steps, so a gap-triggered early stop
/// would freeze the plateau value. The trace records the gaps between
/// consecutive scheduled depths and a fibre counts as converged when the
/// final gap is below tol. Positive invariance is verified on samples
/// first; a violating point raises ConstraintError.
AttractorFibersResult attractor_star_fibers(const ModelSpec& model,
                                            const DescriptorFamily& absorbing,
                                            std::int64_t tau_lo, std::int64_t tau_hi,
                                            const AttractorParams& params);

/// Forward limit fibre at tau. Iterates the start cloud forward and forms the
/// running intersection over s of the iterated clouds, matching the nested
/// representation that holds for positively invariant families. When the
/// intersection would empty out (image clouds that drift instead of nesting,
/// e.g. under inhomogeneous forcing) the fibre representation restarts from
/// the current image cloud, so the result tracks the tail limit points of the
/// image sequence instead of failing. The trace records how far the
/// representation moved each step; convergence is Cauchy stopping.
LimitFiberResult forward_limit_fiber(const ModelSpec& model, const FiberCloud& start,
                                     std::int64_t tau, int s_max, double tol,
                                     double membership_tol = 0.0);

struct OmegaForwardParams {
    double resolution = 1e-3;
    std::uint64_t seed = 0;
    int s_max = 400;
    double tol = 1e-6;
    /// Tolerance for the membership tests that realize intersections over
    /// tau; defaults to max(resolution, tol) when zero.
    double member_tol = 0.0;
};

struct OmegaForwardResult {
    FiberMap fibers;          // Omega_A(tau) per tau
    FiberCloud omega_minus;   // points present in every fibre
    FiberCloud omega_plus;    // closure of the union of all fibres
};

OmegaForwardResult omega_forward(const ModelSpec& model, const DescriptorFamily& absorbing,
                                 std::int64_t tau_lo, std::int64_t tau_hi,
                                 const OmegaForwardParams& params);

struct OmegaStarResult {
    FiberCloud omega_star;
    FiberTrace trace;
};

/// omega* = intersection over tau of the closed union of attractor fibres
/// A*(tau + s), s >= 0. The suffix unions are nested, so the intersection is
/// approximated by the union over a short terminal window of the supplied
/// fibre range; the trace records successive suffix-union distances and
/// `member_tol` is the merge tolerance of the union.
OmegaStarResult omega_star(const FiberMap& attractor_fibers, double tol,
                           double member_tol);

struct InvarianceRow {
    std::int64_t tau = 0;
    double forward_defect = 0.0;   // dist(F_tau(fiber(tau)), fiber(tau+1))
    double backward_defect = 0.0;  // dist(fiber(tau+1), F_tau(fiber(tau)))
};

struct InvarianceReport {
    std::vector<InvarianceRow> rows;
    double tol = 0.0;
    bool positively_invariant = false;
    bool invariant = false;
};

InvarianceReport check_invariance(const ModelSpec& model, const FiberMap& fibers, double tol);

struct AttractionParams {
    std::vector<std::int64_t> s_grid;
    double tol = 1e-3;
};

struct AttractionResult {
    FiberTrace trace;          // (s, dist(phi(tau+s; tau, A(tau)), target(tau+s)))
    bool attracting = false;
};

/// Forward attraction test: evolves the start cloud and measures the
/// semidistance to the target fibres along the grid. Attracting verdict
/// requires the final distance below tol and a nonincreasing trend over the
/// last quartile of the grid.
AttractionResult verify_forward_attraction(const ModelSpec& model, const FiberMap& targets,
                                           const FiberCloud& start, std::int64_t tau,
                                           const AttractionParams& params);

enum class AsymptoticMode { Positive, Negative };

struct AsymptoticInvarianceParams {
    AsymptoticMode mode = AsymptoticMode::Positive;
    std::vector<double> eps_list;
    std::vector<std::int64_t> tau_probes;
    int horizon = 64;
    /// Lag T for the negative mode witnesses.
    std::int64_t lag = 1;
    /// Cap on the number of cloud points probed as witnesses/targets.
    std::size_t max_probe_points = 64;
};

struct AsymptoticWitness {
    double eps = 0.0;
    std::int64_t tau = 0;
    bool found = false;
    std::int64_t s_star = 0;
    State u_star;
    double distance = 0.0;
};

struct AsymptoticInvarianceReport {
    AsymptoticMode mode = AsymptoticMode::Positive;
    /// Positive mode: per eps the smallest probed tau T with
    /// sup_{s <= horizon} dist(phi(tau+s; tau, omega), omega) < eps for all
    /// probed tau >= T. Negative mode unused.
    std::vector<std::pair<double, std::optional<std::int64_t>>> thresholds;
    /// Negative mode: witness search results per (eps, probe point).
    std::vector<AsymptoticWitness> witnesses;
    bool verified = false;
};

AsymptoticInvarianceReport verify_asymptotic_invariance(const ModelSpec& model,
                                                        const FiberCloud& omega_plus,
                                                        const AsymptoticInvarianceParams& params);

struct AutonomyParams {
    std::vector<std::int64_t> tau_probes;
    int horizon = 200;
    /// Fraction of the positive trace tail used for the log-linear fit.
    double fit_fraction = 0.5;
    double slope_threshold = -1e-3;
};

struct AutonomyTrace {
    std::int64_t tau = 0;
    std::vector<double> sup_dist;  // index s
    double slope = 0.0;            // log-linear fit over the positive tail
    bool exponential = false;
};

struct AutonomyReport {
    std::vector<AutonomyTrace> traces;
    bool exponential = false;
};

/// Asymptotic autonomy check: sup over the sampled start set of
/// |phi(tau+s; tau, a) - F^s(a)| along s, where F is the autonomous limit
/// model. Verdict "exponential" when the log-linear tail fit of every trace
/// has slope below the threshold (traces that hit exact zero count as
/// converged).
AutonomyReport verify_asymptotic_autonomy(const ModelSpec& model, const ModelSpec& limit_model,
                                          const FiberCloud& start_samples,
                                          const AutonomyParams& params);

} // namespace idescope
