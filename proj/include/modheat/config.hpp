#pragma once

#include <cstdlib>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace modheat {

/// Run-wide numerical configuration. Precedence: defaults < config file <
/// MODHEAT_* environment variables < command-line flags.
struct RunConfig {
    double quad_tol = 1e-10;
    int oracle_window = 80;
    int oracle_terms = 65;
    int gamma_ball_radius = 24;
    double zero_threshold = 1e-8;
    std::string output_format = "csv";  // csv | json
    std::string inject_fault;           // test hook, e.g. "line-weight"

    void validate() const {
        if (!(quad_tol > 0)) throw std::invalid_argument("quad_tol must be > 0");
        if (oracle_window <= 0) throw std::invalid_argument("oracle_window must be > 0");
        if (oracle_terms <= 0) throw std::invalid_argument("oracle_terms must be > 0");
        if (gamma_ball_radius <= 0) throw std::invalid_argument("gamma_ball_radius must be > 0");
        if (!(zero_threshold > 0)) throw std::invalid_argument("zero_threshold must be > 0");
        if (output_format != "csv" && output_format != "json") {
            throw std::invalid_argument("output_format must be csv or json");
        }
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
    try {
        if (key == "quad_tol") {
            cfg.quad_tol = std::stod(value);
        } else if (key == "oracle_window") {
            cfg.oracle_window = std::stoi(value);
        } else if (key == "oracle_terms") {
            cfg.oracle_terms = std::stoi(value);
        } else if (key == "gamma_ball_radius") {
            cfg.gamma_ball_radius = std::stoi(value);
        } else if (key == "zero_threshold") {
            cfg.zero_threshold = std::stod(value);
        } else if (key == "output_format") {
            cfg.output_format = value;
        } else {
            throw std::invalid_argument("unknown config key: " + key);
        }
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad value for config key " + key + ": " + value);
    }
}

}  // namespace detail

/// Flat `key = value` configuration, one entry per line, '#' comments.
inline void load_config_stream(RunConfig& cfg, std::istream& is) {
    std::string line;
    while (std::getline(is, line)) {
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("config: missing '=': " + line);
        detail::apply_config_entry(cfg, detail::trim(line.substr(0, eq)),
                                   detail::trim(line.substr(eq + 1)));
    }
}

/// MODHEAT_-prefixed environment overrides (MODHEAT_QUAD_TOL and friends).
inline void apply_env_overrides(
    RunConfig& cfg, const std::function<const char*(const char*)>& getenv_fn = [](const char* k) {
        return std::getenv(k);
    }) {
    static const std::map<std::string, std::string> keys = {
        {"MODHEAT_QUAD_TOL", "quad_tol"},
        {"MODHEAT_ORACLE_WINDOW", "oracle_window"},
        {"MODHEAT_ORACLE_TERMS", "oracle_terms"},
        {"MODHEAT_GAMMA_BALL_RADIUS", "gamma_ball_radius"},
        {"MODHEAT_ZERO_THRESHOLD", "zero_threshold"},
        {"MODHEAT_OUTPUT_FORMAT", "output_format"},
    };
    for (const auto& [env, key] : keys) {
        if (const char* v = getenv_fn(env.c_str())) detail::apply_config_entry(cfg, key, v);
    }
}

}  // namespace modheat
