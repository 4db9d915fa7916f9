#include "idescope/model.hpp"

#include <cmath>
#include <string>

#include "idescope/errors.hpp"

namespace idescope {

namespace {

void check_state(const ModelSpec& model, std::int64_t t, const State& u, const char* role) {
    if (u.size() != model.dim) {
        throw SchemaError(model.name + ": " + role + " state has dimension " +
                          std::to_string(u.size()) + ", model expects " +
                          std::to_string(model.dim));
    }
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        const double v = u[i];
        if (!std::isfinite(v)) {
            throw ConstraintError(model.name + ": non-finite " + std::string(role) + " entry " +
                                  std::to_string(i) + " at t=" + std::to_string(t));
        }
        if (model.domain == Domain::NonnegativeCone && v < 0.0) {
            throw ConstraintError(model.name + ": " + role + " entry " + std::to_string(i) +
                                  " = " + std::to_string(v) + " leaves the nonnegative cone at t=" +
                                  std::to_string(t));
        }
    }
}

} // namespace

State step(const ModelSpec& model, std::int64_t t, const State& u) {
    if (!model.rhs) throw SchemaError(model.name + ": model has no right hand side");
    if (!model.time_domain.step_admissible(t)) {
        throw SchemaError(model.name + ": time " + std::to_string(t) +
                          " is outside the model time domain");
    }
    check_state(model, t, u, "input");
    State v = model.rhs(t, u);
    check_state(model, t + 1, v, "output");
    return v;
}

State evolve(const ModelSpec& model, std::int64_t tau, std::int64_t t, const State& u) {
    if (tau > t) {
        throw SchemaError(model.name + ": evolve requires tau <= t, got tau=" +
                          std::to_string(tau) + " t=" + std::to_string(t));
    }
    State v = u;
    for (std::int64_t s = tau; s < t; ++s) v = step(model, s, v);
    return v;
}

Trajectory orbit(const ModelSpec& model, std::int64_t tau, std::int64_t horizon, const State& u0) {
    if (horizon < 0) throw SchemaError(model.name + ": orbit horizon must be nonnegative");
    Trajectory traj;
    traj.model_id = model.name;
    traj.start_time = tau;
    traj.states.reserve(static_cast<std::size_t>(horizon) + 1);
    State v = u0;
    traj.states.push_back(v);
    for (std::int64_t s = tau; s < tau + horizon; ++s) {
        v = step(model, s, v);
        traj.states.push_back(v);
    }
    return traj;
}

double verify_process_property(const ModelSpec& model, std::int64_t tau, std::int64_t s,
                               std::int64_t t, const State& u) {
    if (tau > s || s > t) {
        throw SchemaError(model.name + ": process property requires tau <= s <= t");
    }
    const State mid = evolve(model, tau, s, u);
    const State two_leg = evolve(model, s, t, mid);
    const State direct = evolve(model, tau, t, u);
    return (two_leg - direct).lpNorm<Eigen::Infinity>();
}

double verify_periodicity(const ModelSpec& model, std::int64_t theta,
                          const std::vector<PeriodicitySample>& samples) {
    if (theta < 1) throw SchemaError(model.name + ": period must be >= 1");
    double worst = 0.0;
    for (const auto& sample : samples) {
        if (sample.tau > sample.t) {
            throw SchemaError(model.name + ": periodicity sample requires tau <= t");
        }
        const State base = evolve(model, sample.tau, sample.t, sample.u);
        const State shifted = evolve(model, sample.tau + theta, sample.t + theta, sample.u);
        worst = std::max(worst, (shifted - base).lpNorm<Eigen::Infinity>());
    }
    return worst;
}

} // namespace idescope
