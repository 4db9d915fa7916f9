#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "idescope/config.hpp"
#include "idescope/errors.hpp"
#include "idescope/models.hpp"
#include "idescope/runner.hpp"

namespace {

int do_run(const std::string& config_path) {
    const idescope::ExperimentConfig config = idescope::load_config(config_path);
    const idescope::RunOutput out = idescope::run_experiment(config);
    for (const std::string& file : out.files) std::cout << file << "\n";
    if (!out.converged) {
        std::cerr << "warning: task did not converge; see the report trace\n";
        return 3;
    }
    return 0;
}

int do_compare(const std::string& report, const std::string& golden, double tol) {
    const idescope::CompareResult result = idescope::compare_golden(report, golden, tol);
    std::cout << "compared " << result.compared << " numeric values, tol " << tol << "\n";
    if (result.match) {
        std::cout << "match\n";
        return 0;
    }
    for (const std::string& line : result.mismatches) std::cerr << line << "\n";
    std::cerr << result.mismatches.size() << " mismatch(es)\n";
    return 1;
}

int do_catalog() {
    for (const idescope::CatalogEntry& entry : idescope::catalog()) {
        std::cout << entry.name << "\n    " << entry.summary << "\n    parameters:";
        for (const std::string& p : entry.parameters) std::cout << ' ' << p;
        std::cout << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulation and limit-set toolkit for nonautonomous difference and "
                 "integrodifference equations"};
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* run = app.add_subcommand("run", "execute the task described by a config file");
    run->add_option("config", config_path, "experiment config (sectioned text or JSON)")
        ->required();

    std::string report_path, golden_path;
    double tol = 1e-9;
    CLI::App* compare =
        app.add_subcommand("compare", "compare a report JSON against a golden file");
    compare->add_option("report", report_path, "report written by 'run'")->required();
    compare->add_option("golden", golden_path, "golden report")->required();
    compare->add_option("--tol", tol, "numeric tolerance (absolute or relative)");

    CLI::App* catalog = app.add_subcommand("catalog", "list the built-in model catalog");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return do_run(config_path);
        if (compare->parsed()) return do_compare(report_path, golden_path, tol);
        if (catalog->parsed()) return do_catalog();
    } catch (const idescope::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
