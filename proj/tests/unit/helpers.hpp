#pragma once

#include <cmath>

#include "idescope/model.hpp"

namespace idescope::testing {

inline State scalar(double v) {
    State u(1);
    u[0] = v;
    return u;
}

inline double value(const State& u) { return u[0]; }

} // namespace idescope::testing
