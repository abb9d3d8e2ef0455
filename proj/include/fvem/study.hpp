#pragma once

#include "fvem/config.hpp"
#include "fvem/errors.hpp"
#include "fvem/stepper.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fvem {

inline constexpr const char* csv_header =
    "n,h,k,err_max,rate_max,err_l2,rate_l2,err_h1,rate_h1,runtime_seconds";

/// Time grid reaching T for the given rule. Proportional and automatic
/// rules round k down to T / ceil(T / k).
TimeGrid choose_time_grid(StepRule rule, double final_time, double k, double c, double h_cell,
                          const StabilityEstimate* estimate, double safety);

/// Runs every level; log (optional) receives one progress line per level.
ConvergenceReport run_study(const StudyConfig& config, std::ostream* log = nullptr);

void write_csv(std::ostream& out, const ConvergenceReport& report);

struct SingleRunRequest {
    std::string problem = "example1";
    std::size_t n = 8;
    std::optional<std::string> mesh_file;
    StepRule step_rule = StepRule::automatic;
    double k = 0.0;
    double c = 0.25;
    double safety = 0.9;
    std::optional<double> final_time; ///< problem default when unset
    std::vector<double> snapshot_times;
    FluxQuadrature quadrature = FluxQuadrature::endpoint;
    bool override_cfl = false;
};

struct SingleRunSummary {
    std::size_t dofs = 0;
    double h = 0.0;
    TimeGrid grid;
    std::optional<StabilityEstimate> stability;
    std::optional<double> err_max;
    std::optional<double> err_l2;
    std::optional<double> err_h1;
    std::vector<Snapshot> snapshots;
    NodalField final_field;
};

/// One solve. The returned discretization owns the space the fields live on.
SingleRunSummary run_single(const SingleRunRequest& request,
                            std::unique_ptr<Discretization>* disc_out = nullptr);

void write_summary(std::ostream& out, const SingleRunSummary& summary);

} // namespace fvem
