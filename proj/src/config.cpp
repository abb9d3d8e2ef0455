#include "fvem/config.hpp"

#include "fvem/error.hpp"
#include "fvem/problems.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

namespace fvem {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& key, const std::string& msg) {
    std::string where = line > 0 ? "config line " + std::to_string(line) + ": " : "";
    throw ConfigError(where + "'" + key + "': " + msg);
}

double parse_double(const std::string& key, const std::string& value, std::size_t line) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE || !std::isfinite(v))
        fail(line, key, "malformed number '" + value + "'");
    return v;
}

std::size_t parse_count(const std::string& key, const std::string& value, std::size_t line) {
    if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos)
        fail(line, key, "malformed integer '" + value + "'");
    errno = 0;
    const unsigned long long v = std::strtoull(value.c_str(), nullptr, 10);
    if (errno == ERANGE)
        fail(line, key, "integer out of range '" + value + "'");
    return static_cast<std::size_t>(v);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::stringstream ss(value);
    for (std::string item; std::getline(ss, item, ',');)
        items.push_back(trim(item));
    return items;
}

bool parse_bool(const std::string& key, const std::string& value, std::size_t line) {
    if (value == "true" || value == "1" || value == "yes" || value == "on")
        return true;
    if (value == "false" || value == "0" || value == "no" || value == "off")
        return false;
    fail(line, key, "expected a boolean, got '" + value + "'");
}

} // namespace

std::string to_string(StepRule rule) {
    switch (rule) {
    case StepRule::fixed:
        return "fixed";
    case StepRule::proportional:
        return "proportional";
    case StepRule::automatic:
        return "auto";
    }
    return "?";
}

void apply_setting(StudyConfig& config, const std::string& key, const std::string& value,
                   std::size_t line) {
    if (key == "problem") {
        const auto names = available_problems();
        if (std::find(names.begin(), names.end(), value) == names.end()) {
            std::string msg = "unknown problem '" + value + "'; available:";
            for (const auto& n : names)
                msg += " " + n;
            fail(line, key, msg);
        }
        config.problem = value;
    } else if (key == "levels") {
        std::vector<std::size_t> levels;
        for (const auto& item : split_list(value))
            levels.push_back(parse_count(key, item, line));
        if (levels.empty())
            fail(line, key, "needs at least one level");
        for (std::size_t i = 0; i < levels.size(); ++i) {
            if (levels[i] == 0)
                fail(line, key, "levels must be positive");
            if (i > 0 && levels[i] <= levels[i - 1])
                fail(line, key, "levels must be strictly increasing");
        }
        config.levels = std::move(levels);
    } else if (key == "k_rule") {
        if (value == "fixed")
            config.step_rule = StepRule::fixed;
        else if (value == "proportional")
            config.step_rule = StepRule::proportional;
        else if (value == "auto")
            config.step_rule = StepRule::automatic;
        else
            fail(line, key, "expected fixed, proportional or auto, got '" + value + "'");
    } else if (key == "k") {
        config.k = parse_double(key, value, line);
        if (!(config.k > 0.0))
            fail(line, key, "must be positive");
    } else if (key == "c") {
        config.c = parse_double(key, value, line);
        if (!(config.c > 0.0))
            fail(line, key, "must be positive");
    } else if (key == "safety") {
        config.safety = parse_double(key, value, line);
        if (!(config.safety > 0.0) || config.safety > 1.0)
            fail(line, key, "must lie in (0, 1]");
    } else if (key == "T" || key == "final_time") {
        config.final_time = parse_double(key, value, line);
        if (!(config.final_time > 0.0))
            fail(line, key, "must be positive");
    } else if (key == "norms") {
        NormSelection sel{false, false, false};
        for (const auto& item : split_list(value)) {
            if (item == "max")
                sel.max = true;
            else if (item == "l2")
                sel.l2 = true;
            else if (item == "h1")
                sel.h1 = true;
            else if (item == "all")
                sel = {};
            else
                fail(line, key, "unknown norm '" + item + "' (max, l2, h1, all)");
        }
        config.norms = sel;
    } else if (key == "quadrature") {
        if (value == "exact")
            config.quadrature = FluxQuadrature::exact;
        else if (value == "endpoint")
            config.quadrature = FluxQuadrature::endpoint;
        else
            fail(line, key, "expected exact or endpoint, got '" + value + "'");
    } else if (key == "output") {
        config.output = value;
    } else if (key == "reproducible") {
        config.reproducible = parse_bool(key, value, line);
    } else {
        fail(line, key, "unknown key");
    }
}

void StudyConfig::validate() const {
    if (levels.empty())
        throw ConfigError("levels: needs at least one level");
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (levels[i] == 0 || (i > 0 && levels[i] <= levels[i - 1]))
            throw ConfigError("levels: must be positive and strictly increasing");
    if (!(final_time > 0.0))
        throw ConfigError("T: must be positive");
    if (step_rule == StepRule::fixed && !(k > 0.0))
        throw ConfigError("k: fixed step rule needs k > 0");
    if (step_rule == StepRule::proportional && !(c > 0.0))
        throw ConfigError("c: must be positive");
    if (!(safety > 0.0) || safety > 1.0)
        throw ConfigError("safety: must lie in (0, 1]");
    problem_by_name(problem);
}

StudyConfig parse_config(std::istream& in) {
    StudyConfig config;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty())
            continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line) + ": expected 'key = value'");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(line) + ": missing key");
        apply_setting(config, key, value, line);
    }
    config.validate();
    return config;
}

StudyConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

} // namespace fvem
