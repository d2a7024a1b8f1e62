#pragma once

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dsocs/errors.hpp"

namespace dsocs {

namespace detail {
inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}
} // namespace detail

/// Flat `key = value` settings with `#` comments and dotted key names
/// (e.g. `pendulum.rho = 2`).
using KeyValueMap = std::map<std::string, std::string>;

inline KeyValueMap parse_key_values(std::istream& in) {
    KeyValueMap kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        kv[key] = value;
    }
    return kv;
}

inline KeyValueMap parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_key_values(in);
}

inline double to_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double x = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw ConfigError(key + ": not a number: '" + value + "'");
    return x;
}

inline long to_int(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const long x = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0')
        throw ConfigError(key + ": not an integer: '" + value + "'");
    return x;
}

inline std::vector<double> to_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(to_double(key, detail::trim(cell)));
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
}

/// The keys a run configuration understands. Anything else is rejected so
/// typos fail loudly instead of being silently ignored.
inline const std::set<std::string>& known_config_keys() {
    static const std::set<std::string> keys = {
        "system", "h", "steps", "t_end", "h_list", "seed_q", "seed_qdot", "seed_q0", "seed_q1",
        "out", "selection", "scan_lo", "scan_hi", "scan_points", "tolerance", "max_iterations",
        "fd_epsilon", "generic_stepper", "coordinate",
        "particle.m", "particle.k",
        "pendulum.I", "pendulum.J", "pendulum.M", "pendulum.d", "pendulum.e", "pendulum.chi",
        "pendulum.n", "pendulum.rho",
        "free.dim",
    };
    return keys;
}

inline void reject_unknown_keys(const KeyValueMap& kv) {
    for (const auto& [key, value] : kv)
        if (!known_config_keys().count(key))
            throw ConfigError("unknown configuration key: " + key);
}

} // namespace dsocs
