#include "polx/config.hpp"

#include "polx/error.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace polx {

namespace {

using Schema = std::map<std::string, std::string>;

const std::map<std::string, Schema>& schemas() {
    static const Schema common = {{"output_dir", ""}, {"workers", "1"}};
    static const Schema block = {{"N", "100,200,400,800,1600"}, {"t_end", "4"}, {"dt", "0.002"}, {"tol", "1e-8"},
                                 {"hold_level", "0.98"}};
    static const std::map<std::string, Schema> all = [] {
        std::map<std::string, Schema> s;
        s["fig2_mft_angles"] = {{"one_minus_cos_theta", "1e-1,1e-3,1e-5,1e-7"},
                                {"t_end", "20"},
                                {"tol", "1e-12"},
                                {"dt_out", "0.01"},
                                {"n1", "1"},
                                {"n2", "1"}};
        s["fig3_breaktime"] = block;
        s["fig4_zeta"] = block;
        s["fig5_entropy"] = block;
        s["fig6_zeta_rot"] = {{"N", "15,30,60"}, {"cos_theta", "0.96"}, {"t_end", "20"}, {"dt", "0.01"}, {"tol", "1e-8"}};
        s["fig7_plateau"] = {{"N", "15,30,60"}, {"cos_theta", "1"},          {"t_end", "60"},           {"dt", "0.01"},
                             {"tol", "1e-8"},   {"band", "0.05"},           {"rise_fraction", "0.9"}};
        s["fig8_pulse"] = {{"cos_theta", "0.99"}, {"L", "0.5"},        {"nz", "1001"},         {"cfl", "1"},
                           {"ramp", "0.05"},      {"t_max", "1"},      {"snapshot_dt", "0.05"}, {"steady_tol", "0.01"},
                           {"t_start", "0.6"}};
        s["rate_calc"] = {{"omega1", "1"}, {"omega2", "1"}, {"rho", "1"}, {"n_e", "0"},
                          {"I1", "1"},     {"I2", "1"},     {"volume", "1"}};
        s["oracle_check"] = {{"N", "1,2,3"},
                             {"theta", "0,0.2,1.5707963267948966"},
                             {"basis", "plane,circular"},
                             {"t_end", "5"},
                             {"dt", "0.05"},
                             {"threshold", "1e-8"}};
        for (auto& [name, schema] : s) schema.insert(common.begin(), common.end());
        return s;
    }();
    return all;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& key, const std::string& text) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': '" + text + "' is not a number");
    }
}

int parse_int(const std::string& key, const std::string& text) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': '" + text + "' is not an integer");
    }
}

}  // namespace

std::vector<std::string> experiment_names() {
    std::vector<std::string> out;
    for (const auto& [name, schema] : schemas()) out.push_back(name);
    return out;
}

ExperimentConfig ExperimentConfig::defaults(const std::string& experiment) {
    const auto it = schemas().find(experiment);
    if (it == schemas().end()) throw ConfigError("unknown experiment '" + experiment + "'");
    return ExperimentConfig{experiment, it->second};
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string experiment;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "experiment")
            experiment = value;
        else
            pairs.emplace_back(key, value);
    }
    if (experiment.empty()) throw ConfigError("config has no 'experiment' key");
    ExperimentConfig cfg = defaults(experiment);
    for (const auto& [k, v] : pairs) cfg.set(k, v);
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    if (!values.contains(key)) throw ConfigError("unknown key '" + key + "' for experiment " + experiment);
    values[key] = value;
}

void ExperimentConfig::set_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' must be key=value");
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::string ExperimentConfig::get_string(const std::string& key) const {
    const auto it = values.find(key);
    if (it == values.end()) throw ConfigError("missing key '" + key + "'");
    return it->second;
}

double ExperimentConfig::get_double(const std::string& key) const { return parse_double(key, get_string(key)); }
int ExperimentConfig::get_int(const std::string& key) const { return parse_int(key, get_string(key)); }

std::vector<double> ExperimentConfig::get_doubles(const std::string& key) const {
    std::vector<double> out;
    for (const std::string& s : split_list(get_string(key))) out.push_back(parse_double(key, s));
    if (out.empty()) throw ConfigError("key '" + key + "' is an empty list");
    return out;
}

std::vector<int> ExperimentConfig::get_ints(const std::string& key) const {
    std::vector<int> out;
    for (const std::string& s : split_list(get_string(key))) out.push_back(parse_int(key, s));
    if (out.empty()) throw ConfigError("key '" + key + "' is an empty list");
    return out;
}

std::vector<std::string> ExperimentConfig::get_strings(const std::string& key) const {
    auto out = split_list(get_string(key));
    if (out.empty()) throw ConfigError("key '" + key + "' is an empty list");
    return out;
}

std::filesystem::path ExperimentConfig::output_dir() const {
    const std::string dir = get_string("output_dir");
    if (!dir.empty()) return dir;
    const char* root = std::getenv("POLX_OUTPUT_ROOT");
    return std::filesystem::path(root && *root ? root : "polx_out") / experiment;
}

}  // namespace polx
