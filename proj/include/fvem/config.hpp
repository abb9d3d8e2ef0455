#pragma once

#include "fvem/assembly.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace fvem {

enum class StepRule {
    fixed,        ///< k given directly; must divide T
    proportional, ///< k = c * h_cell, rounded down so that it divides T
    automatic,    ///< k = safety * k_max, rounded down so that it divides T
};

struct NormSelection {
    bool max = true;
    bool l2 = true;
    bool h1 = true;
};

struct StudyConfig {
    std::string problem = "example1";
    std::vector<std::size_t> levels{4, 8, 16, 32};
    StepRule step_rule = StepRule::proportional;
    double k = 0.0;
    double c = 0.25;
    double safety = 0.9;
    double final_time = 1.0;
    NormSelection norms;
    FluxQuadrature quadrature = FluxQuadrature::endpoint;
    std::string output;
    bool reproducible = false;

    /// Throws ConfigError on inconsistent values.
    void validate() const;
};

/// Applies one "key = value" setting. line is used in error messages (0 = command line).
void apply_setting(StudyConfig& config, const std::string& key, const std::string& value,
                   std::size_t line = 0);

/// Flat "key = value" text; '#' starts a comment. Unknown keys are rejected.
StudyConfig parse_config(std::istream& in);
StudyConfig parse_config_file(const std::string& path);

std::string to_string(StepRule rule);

} // namespace fvem
