// polx: run experiments, parameter sweeps and the acceptance suite.
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure,
// 3 completed but an inline or acceptance check failed.

#include "polx/acceptance.hpp"
#include "polx/config.hpp"
#include "polx/error.hpp"
#include "polx/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

polx::ExperimentConfig load(const std::string& path, const std::string& experiment, const std::vector<std::string>& sets) {
    polx::ExperimentConfig cfg =
        path.empty() ? polx::ExperimentConfig::defaults(experiment) : polx::ExperimentConfig::from_file(path);
    if (!path.empty() && !experiment.empty() && experiment != cfg.experiment)
        throw polx::ConfigError("config file is for '" + cfg.experiment + "', not '" + experiment + "'");
    for (const std::string& s : sets) cfg.set_override(s);
    return cfg;
}

int report(const polx::RunResult& r) {
    for (const std::string& m : r.messages) std::cout << m << '\n';
    for (const polx::InlineCheck& c : r.checks)
        std::cout << (c.pass ? "ok     " : "FAILED ") << c.name << " = " << c.value << " (threshold " << c.threshold << ")\n";
    std::cout << "outputs in " << r.output_dir.string() << '\n';
    return r.all_checks_pass() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Photon-photon polarization exchange simulations"};
    app.set_version_flag("--version", polx::code_version());
    app.require_subcommand(1);

    std::string config, experiment, axis;
    std::vector<std::string> sets, values;
    bool quiet = false;

    CLI::App* run = app.add_subcommand("run", "Run one experiment");
    run->add_option("config", config, "Config file (key = value)");
    run->add_option("-e,--experiment", experiment, "Experiment name when no config file is given");
    run->add_option("-s,--set", sets, "Override a config key: key=value")->allow_extra_args(false);

    CLI::App* sw = app.add_subcommand("sweep", "Run an experiment over values of one key");
    sw->add_option("config", config, "Config file (key = value)");
    sw->add_option("-e,--experiment", experiment, "Experiment name when no config file is given");
    sw->add_option("-s,--set", sets, "Override a config key: key=value")->allow_extra_args(false);
    sw->add_option("--axis", axis, "Key to sweep")->required();
    sw->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');

    CLI::App* chk = app.add_subcommand("check", "Run the acceptance suite");
    chk->add_flag("-q,--quiet", quiet, "Only print the per-criterion lines");

    app.add_subcommand("list", "List experiment names");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("list")) {
            for (const std::string& n : polx::experiment_names()) std::cout << n << '\n';
            return 0;
        }
        if (chk->parsed()) {
            const auto results = polx::run_acceptance(std::cout, !quiet);
            int passed = 0;
            for (const auto& r : results) passed += r.pass();
            std::cout << passed << "/" << results.size() << " criteria pass\n";
            return passed == static_cast<int>(results.size()) ? 0 : 3;
        }
        if (config.empty() && experiment.empty()) throw polx::ConfigError("give a config file or --experiment");
        const polx::ExperimentConfig cfg = load(config, experiment, sets);
        if (run->parsed()) return report(polx::run_experiment(cfg));

        const polx::SweepResult s = polx::sweep(cfg, axis, values);
        bool ok = true;
        for (const polx::SweepEntry& e : s.entries) {
            std::cout << axis << "=" << e.value << ": " << (e.ok ? "ok" : "FAILED " + e.error) << '\n';
            ok = ok && e.ok;
        }
        for (const auto& [k, v] : s.fit) std::cout << k << " = " << v << '\n';
        std::cout << "aggregate " << s.aggregate.string() << '\n';
        return ok ? 0 : 3;
    } catch (const polx::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const polx::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 2;
    }
}
