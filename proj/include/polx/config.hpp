#pragma once
// Experiment configuration: a key = value text file, '#' starts a comment.
// Every experiment has a fixed key schema with defaults; unknown keys are rejected.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace polx {

struct ExperimentConfig {
    std::string experiment;
    std::map<std::string, std::string> values;  ///< defaults merged with overrides

    /// Defaults of the experiment's schema. Throws ConfigError for unknown experiments.
    static ExperimentConfig defaults(const std::string& experiment);
    /// Parses a config file; it must contain an `experiment` key.
    static ExperimentConfig from_file(const std::filesystem::path& path);
    static ExperimentConfig from_text(const std::string& text);

    /// Applies "key=value"; the key must belong to the schema.
    void set(const std::string& key, const std::string& value);
    void set_override(const std::string& assignment);

    std::string get_string(const std::string& key) const;
    double get_double(const std::string& key) const;
    int get_int(const std::string& key) const;
    std::vector<double> get_doubles(const std::string& key) const;
    std::vector<int> get_ints(const std::string& key) const;
    std::vector<std::string> get_strings(const std::string& key) const;

    /// Output directory: `output_dir` if set, else $POLX_OUTPUT_ROOT (or ./polx_out) / experiment.
    std::filesystem::path output_dir() const;
};

std::vector<std::string> experiment_names();

}  // namespace polx
