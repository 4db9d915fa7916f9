#pragma once

#include <string>
#include <vector>

#include "idescope/config.hpp"

namespace idescope {

struct RunOutput {
    std::vector<std::string> files;   // paths written, report first
    bool converged = true;
    std::string report_path;
};

/// Executes the task described by the config and writes the report JSON plus
/// CSV payloads into the configured output directory. All numeric payloads
/// are deterministic functions of (config, seed).
RunOutput run_experiment(const ExperimentConfig& config);

struct CompareResult {
    bool match = true;
    std::size_t compared = 0;
    std::vector<std::string> mismatches;  // "path: got ... expected ... (|diff|)"
};

/// Recursive numeric comparison of a report against a golden file. Numeric
/// leaves must agree within tol (absolute or relative); structural
/// differences are reported as mismatches.
CompareResult compare_golden(const std::string& report_path, const std::string& golden_path,
                             double tol);

std::string artifact_version();

} // namespace idescope
