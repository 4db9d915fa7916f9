#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "idescope/cloud.hpp"
#include "idescope/model.hpp"
#include "idescope/setdyn.hpp"

namespace idescope {

using Json = nlohmann::ordered_json;

/// Shortest-exact decimal form of a double (17 significant digits), the
/// canonical float encoding of every numeric output file.
std::string format_double(double v);

/// Serializes with sorted keys and canonical floats; byte-identical for equal
/// inputs.
std::string canonical_json(const nlohmann::json& j);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// FNV-1a hash of a byte string, hex-encoded; used for config fingerprints.
std::string fnv1a_hex(const std::string& bytes);

// CSV payloads -------------------------------------------------------------

/// Trajectory: header "t,component_0,..." with one row per time.
std::string trajectory_csv(const Trajectory& traj);

/// Fibre cloud: "x,u" rows per point for spatial states (one block per
/// component against the habitat nodes), "index,value" rows otherwise.
std::string fiber_csv(const FiberCloud& cloud, const Quadrature* quadrature);

/// Cauchy trace: header "s,dist".
std::string trace_csv(const FiberTrace& trace);

// JSON fragments -----------------------------------------------------------

nlohmann::json cloud_to_json(const FiberCloud& cloud);
nlohmann::json trace_to_json(const FiberTrace& trace);

} // namespace idescope
