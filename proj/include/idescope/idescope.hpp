#pragma once

// Umbrella header for the idescope library: simulation of nonautonomous
// difference equations and Nystrom-discretized integrodifference equations,
// point-cloud approximation of pullback and forward limit sets, and
// verification of the a-priori bounds attached to the model catalog.

#include "idescope/errors.hpp"
#include "idescope/interval.hpp"
#include "idescope/rng.hpp"
#include "idescope/quadrature.hpp"
#include "idescope/model.hpp"
#include "idescope/semilinear.hpp"
#include "idescope/cloud.hpp"
#include "idescope/setdyn.hpp"
#include "idescope/ide.hpp"
#include "idescope/models.hpp"
#include "idescope/serialize.hpp"
#include "idescope/config.hpp"
#include "idescope/runner.hpp"
