#include "polx/config.hpp"
#include "polx/error.hpp"
#include "polx/experiments.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>

using namespace polx;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("polx_test_" + name);
    fs::remove_all(p);
    return p;
}
}  // namespace

TEST_CASE("config text parsing") {
    const ExperimentConfig c = ExperimentConfig::from_text("# comment\nexperiment = fig3_breaktime\nN = 10, 20 # inline\n tol=1e-9\n");
    CHECK(c.experiment == "fig3_breaktime");
    CHECK(c.get_ints("N") == std::vector<int>{10, 20});
    CHECK(c.get_double("tol") == 1e-9);
    CHECK(c.get_double("t_end") == 4.0);
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(ExperimentConfig::from_text("N = 3\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_text("experiment = nope\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_text("experiment = rate_calc\nfoo = 1\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_text("experiment = rate_calc\njunk\n"), ConfigError);
    ExperimentConfig c = ExperimentConfig::defaults("rate_calc");
    CHECK_THROWS_AS(c.set_override("rho"), ConfigError);
    c.set_override("rho=abc");
    CHECK_THROWS_AS(c.get_double("rho"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_file("/nonexistent/polx.cfg"), ConfigError);
}

TEST_CASE("every experiment has defaults") {
    for (const std::string& name : experiment_names()) CHECK(ExperimentConfig::defaults(name).experiment == name);
}

TEST_CASE("a run writes its outputs and a manifest") {
    ExperimentConfig c = ExperimentConfig::defaults("rate_calc");
    const fs::path dir = scratch("rate");
    c.set("output_dir", dir.string());
    c.set("I1", "4");
    c.set("I2", "4");
    const RunResult r = run_experiment(c);
    CHECK(std::abs(r.summary.at("inverse_length") / 7.2e-7 - 1.0) < 1e-13);
    std::ifstream in(dir / "manifest.json");
    const nlohmann::json m = nlohmann::json::parse(in);
    CHECK(m["experiment"] == "rate_calc");
    CHECK(m["config"]["I1"] == "4");
    for (const auto& f : m["outputs"]) CHECK(fs::exists(dir / f.get<std::string>()));
}

TEST_CASE("a sweep keeps going past a failing value") {
    ExperimentConfig c = ExperimentConfig::defaults("fig2_mft_angles");
    const fs::path dir = scratch("sweep");
    c.set("output_dir", dir.string());
    c.set("t_end", "6");
    c.set("workers", "2");
    const SweepResult s = sweep(c, "one_minus_cos_theta", {"1e-1", "oops", "1e-3", "1e-5"});
    REQUIRE(s.entries.size() == 4);
    CHECK(s.entries[0].ok);
    CHECK_FALSE(s.entries[1].ok);
    CHECK(s.entries[3].ok);
    CHECK(s.fit.at("slope") > 0.2);
    CHECK(fs::exists(s.aggregate));
    CHECK_THROWS_AS(sweep(c, "bogus", {"1"}), ConfigError);
}
