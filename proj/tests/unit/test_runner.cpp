#include "doctest.h"

#include <filesystem>
#include <string>

#include "idescope/config.hpp"
#include "idescope/errors.hpp"
#include "idescope/runner.hpp"
#include "idescope/serialize.hpp"

using namespace idescope;

namespace {

std::string work_dir(const std::string& leaf) {
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "idescope_runner_tests" / leaf;
    std::filesystem::remove_all(dir);
    return dir.string();
}

nlohmann::json report_of(const RunOutput& out) {
    return nlohmann::json::parse(read_text_file(out.report_path));
}

} // namespace

TEST_CASE("simulate task writes a report and a trajectory") {
    const std::string dir = work_dir("simulate");
    const ExperimentConfig cfg = parse_config(
        "[model]\nname = bh\nalpha = 3\n\n"
        "[task]\nkind = simulate\ntau = 0\nhorizon = 60\nu0 = 4\n\n"
        "[output]\ndir = " + dir + "\nprefix = demo\n");
    const RunOutput out = run_experiment(cfg);
    CHECK(out.converged);
    REQUIRE(out.files.size() == 2);
    CHECK(out.report_path == out.files[0]);
    CHECK(std::filesystem::exists(out.files[1]));

    const nlohmann::json rep = report_of(out);
    CHECK(rep.at("results").at("final_sup_norm").get<double>() ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.at("results").at("steps") == 60);
    CHECK(rep.at("model").at("name") == "bh");
    CHECK(rep.at("config").at("hash") == fnv1a_hex(cfg.source_bytes));
    CHECK(rep.at("outputs").at("trajectory") == "demo_trajectory.csv");
}

TEST_CASE("reports and artifacts are byte-identical across reruns") {
    const std::string dir = work_dir("rerun");
    const ExperimentConfig cfg = parse_config(
        "[model]\nname = bh_piecewise\nalpha_minus = 2\nalpha_plus = 3\n\n"
        "[task]\nkind = pullback\ntau = 3\ns_max = 40\ntol = 1e-8\nresolution = 0.01\n"
        "seed = 1\n\n"
        "[set]\nkind = interval\nlo = 0\nhi = 8\n\n"
        "[output]\ndir = " + dir + "\n");
    const RunOutput first = run_experiment(cfg);
    std::vector<std::string> bytes;
    for (const std::string& f : first.files) bytes.push_back(read_text_file(f));
    const RunOutput second = run_experiment(cfg);
    REQUIRE(second.files == first.files);
    for (std::size_t i = 0; i < first.files.size(); ++i)
        CHECK(read_text_file(first.files[i]) == bytes[i]);

    const nlohmann::json rep = report_of(first);
    CHECK(rep.at("results").at("converged") == true);
    CHECK(rep.at("results").at("fiber").at("lo").get<double>() == 0.0);
    CHECK(rep.at("results").at("fiber").at("hi").get<double>() ==
          doctest::Approx(27.0 / 14.0).epsilon(1e-6));
}

TEST_CASE("verify tasks summarize their checks") {
    const std::string dir = work_dir("verify");
    const RunOutput process = run_experiment(parse_config(
        "[model]\nname = bh_piecewise\nalpha_minus = 2\nalpha_plus = 3\n\n"
        "[task]\nkind = verify\ncheck = process\nsamples = 50\n\n"
        "[output]\ndir = " + dir + "\nprefix = process\n"));
    const nlohmann::json prep = report_of(process);
    CHECK(prep.at("results").at("pass") == true);
    CHECK(prep.at("results").at("max_defect").get<double>() == 0.0);

    const RunOutput gronwall = run_experiment(parse_config(
        "[model]\nname = linear\nalpha = 0.5\n\n"
        "[task]\nkind = verify\ncheck = gronwall\ntau = 0\nhorizon = 25\nu0 = 1\n\n"
        "[output]\ndir = " + dir + "\nprefix = gronwall\n"));
    const nlohmann::json grep_ = report_of(gronwall);
    CHECK(grep_.at("results").at("pass") == true);
    CHECK(grep_.at("results").at("max_excess").get<double>() <= 0.0);

    const RunOutput period = run_experiment(parse_config(
        "[model]\nname = bh_periodic\ntheta = 6\n\n"
        "[task]\nkind = verify\ncheck = periodicity\nsamples = 40\n\n"
        "[output]\ndir = " + dir + "\nprefix = period\n"));
    CHECK(report_of(period).at("results").at("pass") == true);
}

TEST_CASE("schema violations in configs are rejected") {
    CHECK_THROWS_AS(run_experiment(parse_config("[task]\nkind = simulate\n")), SchemaError);
    CHECK_THROWS_AS(run_experiment(parse_config(
                        "[model]\nname = bh\n\n[task]\nkind = nonsense\n")),
                    SchemaError);
    CHECK_THROWS_AS(run_experiment(parse_config(
                        "[model]\nname = bh\nbogus = 1\n\n[task]\nkind = simulate\n"
                        "horizon = 1\nu0 = 1\n")),
                    SchemaError);
    CHECK_THROWS_AS(run_experiment(parse_config(
                        "[model]\nname = bh\n\n[task]\nkind = verify\ncheck = unknown\n")),
                    SchemaError);
}

TEST_CASE("comparison against a golden file tolerates noise keys only") {
    const std::string dir = work_dir("compare");
    const RunOutput out = run_experiment(parse_config(
        "[model]\nname = bh\nalpha = 3\n\n"
        "[task]\nkind = simulate\nhorizon = 10\nu0 = 0.5\n\n"
        "[output]\ndir = " + dir + "\n"));

    const CompareResult self = compare_golden(out.report_path, out.report_path, 1e-9);
    CHECK(self.match);
    CHECK(self.compared > 0);

    nlohmann::json golden = report_of(out);
    golden["results"]["final_sup_norm"] = golden["results"]["final_sup_norm"].get<double>() + 0.5;
    golden["results"]["wall_time_ms"] = 123456.0;
    const std::string golden_path = dir + "/golden.json";
    write_text_file(golden_path, canonical_json(golden));
    const CompareResult diff = compare_golden(out.report_path, golden_path, 1e-9);
    CHECK_FALSE(diff.match);
    REQUIRE(diff.mismatches.size() == 1);
    CHECK(diff.mismatches[0].find("final_sup_norm") != std::string::npos);

    write_text_file(golden_path, "not json");
    CHECK_THROWS_AS(compare_golden(out.report_path, golden_path, 1e-9), SchemaError);
}
