#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "idescope/interval.hpp"
#include "idescope/quadrature.hpp"

namespace idescope {

using State = Eigen::VectorXd;

/// Admissible state region U. Constraint violations abort the run instead of
/// being clamped, so simulated orbits are exactly the orbits of the map.
enum class Domain { Unconstrained, NonnegativeCone };

/// State vector tagged with the constraint region it is supposed to satisfy.
struct StateVector {
    State values;
    Domain domain_tag = Domain::Unconstrained;
};

/// Declared semilinear growth data: ||Phi(t,s)|| <= K prod alpha_r and
/// ||N_t(u)|| <= b_t + a_t ||u||. Used by the a-priori bound routines.
struct SemilinearParams {
    double K = 1.0;
    std::function<double(std::int64_t)> alpha;
    std::function<double(std::int64_t)> a;
    std::function<double(std::int64_t)> b;
};

struct IdeParts;

/// Nonautonomous difference equation u_{t+1} = F_t(u_t) on a discrete time
/// interval. The right hand side must be deterministic: repeated evaluation
/// at the same (t, u) yields bit-identical results, which is what makes the
/// two-parameter process property hold exactly in floating point.
struct ModelSpec {
    std::string name;
    int dim = 1;
    DiscreteInterval time_domain = DiscreteInterval::all();
    std::optional<std::int64_t> period;
    Domain domain = Domain::Unconstrained;
    std::function<State(std::int64_t, const State&)> rhs;

    /// Optional declared structure used by bound verification.
    std::shared_ptr<const SemilinearParams> semilinear;
    /// Optional sequence t -> dar(G_t) of Darbo constants for the condensing
    /// part of an additive split F_t = G_t + K_t.
    std::function<double(std::int64_t)> darbo;
    /// Spatial discretization behind the state components, when present.
    std::shared_ptr<const Quadrature> quadrature;
    /// Integrodifference structure (growth/kernel split and the assembled
    /// kernel matrix), when the model came from ide_model().
    std::shared_ptr<const IdeParts> ide;
    /// Scalar models whose reachable sets are intervals (continuous scalar
    /// maps) may refresh point clouds by resampling the interval hull; this
    /// keeps interior coverage where iterated samples would concentrate at
    /// the endpoints.
    bool interval_fibers = false;
};

struct Trajectory {
    std::string model_id;
    std::int64_t start_time = 0;
    std::vector<State> states;

    std::int64_t time_at(std::size_t i) const {
        return start_time + static_cast<std::int64_t>(i);
    }
};

/// One application of F_t. Validates t against the model time domain and both
/// input and output against the constraint region.
State step(const ModelSpec& model, std::int64_t t, const State& u);

/// General solution phi(t; tau, u) evaluated by iterating the map; requires
/// tau <= t (the process is generally not invertible).
State evolve(const ModelSpec& model, std::int64_t tau, std::int64_t t, const State& u);

/// Full forward orbit phi(tau + k; tau, u0) for k = 0..horizon.
Trajectory orbit(const ModelSpec& model, std::int64_t tau, std::int64_t horizon, const State& u0);

/// Sup-norm defect of the two-parameter semigroup identity
/// phi(t; s, phi(s; tau, u)) = phi(t; tau, u). Exactly zero for deterministic
/// right hand sides because both sides execute the same operation sequence.
double verify_process_property(const ModelSpec& model, std::int64_t tau, std::int64_t s,
                               std::int64_t t, const State& u);

struct PeriodicitySample {
    std::int64_t tau = 0;
    std::int64_t t = 0;
    State u;
};

/// Max sup-norm defect of phi(t + theta; tau + theta, u) = phi(t; tau, u)
/// over the given samples.
double verify_periodicity(const ModelSpec& model, std::int64_t theta,
                          const std::vector<PeriodicitySample>& samples);

} // namespace idescope
