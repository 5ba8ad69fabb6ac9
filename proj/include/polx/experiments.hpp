#pragma once
// Named experiments, each writing CSV series plus a JSON run manifest.

#include "polx/config.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace polx {

struct InlineCheck {
    std::string name;
    bool pass;
    double value;
    double threshold;
};

struct RunResult {
    std::string experiment;
    std::filesystem::path output_dir;
    std::vector<std::string> outputs;  ///< file names relative to output_dir
    std::vector<InlineCheck> checks;
    std::map<std::string, double> summary;
    std::vector<std::string> messages;  ///< human-readable report lines

    bool all_checks_pass() const;
};

/// Runs one experiment, writing its files and manifest.json to cfg.output_dir().
RunResult run_experiment(const ExperimentConfig& cfg);

struct SweepEntry {
    std::string value;
    bool ok;
    std::string error;
    std::map<std::string, double> summary;
};

struct SweepResult {
    std::filesystem::path aggregate;  ///< sweep.csv
    std::vector<SweepEntry> entries;
    std::map<std::string, double> fit;  ///< scaling fit when the axis supports one
};

/// One sub-run per value (sub-directory axis=value), up to `workers` at a time.
/// Failures are recorded and the sweep continues. Throws ConfigError for an
/// unknown axis or an empty value list.
SweepResult sweep(const ExperimentConfig& base, const std::string& axis, const std::vector<std::string>& values);

std::string code_version();

}  // namespace polx
