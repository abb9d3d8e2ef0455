#pragma once

#include "fvem/problems.hpp"
#include "fvem/space.hpp"

#include <optional>
#include <span>
#include <vector>

namespace fvem {

/// max over interior nodes of |u(P, t) - U(P)|.
double nodal_max_error(const P1Space& space, const NodalField& field, const ExactSolution& exact,
                       double t);

/// L2 error, edge-midpoint rule per triangle.
double l2_error(const P1Space& space, const NodalField& field, const ExactSolution& exact, double t);

/// H1 seminorm error; needs exact.gradient.
double h1_seminorm_error(const P1Space& space, const NodalField& field, const ExactSolution& exact,
                         double t);

/// Full H1 norm error sqrt(L2² + seminorm²).
double h1_error(const P1Space& space, const NodalField& field, const ExactSolution& exact, double t);

/// rate_i = log(e_i / e_{i+1}) / log(h_i / h_{i+1}); empty where an error is zero.
std::vector<std::optional<double>> eoc(std::span<const double> errors, std::span<const double> hs);

/// Least-squares slope of log(errors) against log(hs).
double loglog_slope(std::span<const double> hs, std::span<const double> errors);

struct ConvergenceLevel {
    std::size_t n = 0;
    double h = 0.0;
    double k = 0.0;
    std::optional<double> err_max;
    std::optional<double> err_l2;
    std::optional<double> err_h1;
    double runtime_seconds = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceLevel> levels;
    std::vector<std::optional<double>> rate_max;
    std::vector<std::optional<double>> rate_l2;
    std::vector<std::optional<double>> rate_h1;

    /// Fills the rate columns from the level errors.
    void compute_rates();
};

} // namespace fvem
