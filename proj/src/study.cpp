#include "fvem/study.hpp"

#include "fvem/error.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace fvem {

TimeGrid choose_time_grid(StepRule rule, double final_time, double k, double c, double h_cell,
                          const StabilityEstimate* estimate, double safety) {
    double target = 0.0;
    switch (rule) {
    case StepRule::fixed:
        return TimeGrid::covering(final_time, k);
    case StepRule::proportional:
        target = c * h_cell;
        break;
    case StepRule::automatic:
        if (!estimate)
            throw InvalidArgument("automatic step rule needs a stability estimate");
        target = safety * estimate->k_max;
        break;
    }
    if (!(target > 0.0))
        throw InvalidArgument("time step must be positive");
    if (final_time == 0.0)
        return TimeGrid(target, 0);
    const auto steps = static_cast<std::size_t>(std::ceil(final_time / target - 1e-9));
    return TimeGrid(final_time / static_cast<double>(steps), steps);
}

namespace {

std::string format_number(double v, const char* fmt) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::string cell(const std::optional<double>& v, const char* fmt = "%.10e") {
    return v ? format_number(*v, fmt) : std::string{};
}

} // namespace

ConvergenceReport run_study(const StudyConfig& config, std::ostream* log) {
    config.validate();
    const ProblemSpec problem = problem_by_name(config.problem);
    ConvergenceReport report;

    for (std::size_t n : config.levels) {
        const auto t0 = std::chrono::steady_clock::now();
        Discretization disc(problem, build_uniform_triangulation(n, problem.domain), config.quadrature);
        const double h_cell = problem.domain.width() / static_cast<double>(n);

        std::optional<StabilityEstimate> estimate;
        if (config.step_rule == StepRule::automatic)
            estimate = estimate_stable_dt(disc);
        const TimeGrid grid = choose_time_grid(config.step_rule, config.final_time, config.k, config.c,
                                               h_cell, estimate ? &*estimate : nullptr, config.safety);

        RunResult result;
        try {
            result = run(disc, grid);
        } catch (const DivergenceError& e) {
            throw DivergenceError("level n = " + std::to_string(n) + ": " + e.what(), e.step(),
                                  e.max_magnitude());
        } catch (const CflViolation& e) {
            throw CflViolation("level n = " + std::to_string(n) + ": " + e.what(), e.estimate());
        }

        ConvergenceLevel level;
        level.n = n;
        level.h = disc.mesh().h;
        level.k = grid.k;
        if (problem.exact) {
            const double t = grid.final_time();
            const auto& field = result.state.curr;
            if (config.norms.max)
                level.err_max = nodal_max_error(disc.space(), field, *problem.exact, t);
            if (config.norms.l2)
                level.err_l2 = l2_error(disc.space(), field, *problem.exact, t);
            if (config.norms.h1 && problem.exact->gradient)
                level.err_h1 = h1_error(disc.space(), field, *problem.exact, t);
        }
        const auto t1 = std::chrono::steady_clock::now();
        level.runtime_seconds =
            config.reproducible ? 0.0 : std::chrono::duration<double>(t1 - t0).count();
        report.levels.push_back(level);

        if (log) {
            *log << "level n=" << n << " h=" << level.h << " k=" << level.k
                 << " steps=" << grid.num_steps;
            if (level.err_max)
                *log << " err_max=" << *level.err_max;
            *log << '\n';
        }
    }
    report.compute_rates();
    return report;
}

void write_csv(std::ostream& out, const ConvergenceReport& report) {
    out << csv_header << '\n';
    for (std::size_t i = 0; i < report.levels.size(); ++i) {
        const auto& l = report.levels[i];
        auto rate = [i](const std::vector<std::optional<double>>& rates) {
            return i == 0 || i - 1 >= rates.size() ? std::string{} : cell(rates[i - 1], "%.6f");
        };
        out << l.n << ',' << format_number(l.h, "%.17g") << ',' << format_number(l.k, "%.17g") << ','
            << cell(l.err_max) << ',' << rate(report.rate_max) << ',' << cell(l.err_l2) << ','
            << rate(report.rate_l2) << ',' << cell(l.err_h1) << ',' << rate(report.rate_h1) << ','
            << format_number(l.runtime_seconds, "%.6f") << '\n';
    }
}

SingleRunSummary run_single(const SingleRunRequest& request, std::unique_ptr<Discretization>* disc_out) {
    const ProblemSpec problem = problem_by_name(request.problem);
    PrimalMesh mesh = request.mesh_file ? read_mesh_file(*request.mesh_file)
                                        : build_uniform_triangulation(request.n, problem.domain);
    auto disc = std::make_unique<Discretization>(problem, std::move(mesh), request.quadrature);

    const double final_time = request.final_time.value_or(problem.final_time);
    if (!(final_time >= 0.0))
        throw InvalidArgument("final time must be non-negative");

    std::optional<StabilityEstimate> estimate;
    if (disc->space().dof_count() > 0)
        estimate = estimate_stable_dt(*disc);
    const double h_cell = request.mesh_file ? disc->mesh().h
                                            : problem.domain.width() / static_cast<double>(request.n);
    TimeGrid grid;
    if (final_time == 0.0) {
        grid = TimeGrid(request.step_rule == StepRule::fixed && request.k > 0.0
                            ? request.k
                            : (estimate ? request.safety * estimate->k_max : 1.0),
                        0);
    } else {
        grid = choose_time_grid(request.step_rule, final_time, request.k, request.c, h_cell,
                                estimate ? &*estimate : nullptr, request.safety);
    }

    RunOptions options;
    options.override_cfl = request.override_cfl;
    options.snapshot_times = request.snapshot_times;
    RunResult result = run(*disc, grid, options);

    SingleRunSummary summary;
    summary.dofs = disc->space().dof_count();
    summary.h = disc->mesh().h;
    summary.grid = grid;
    summary.stability = result.stability;
    if (problem.exact && summary.dofs > 0) {
        const double t = grid.final_time();
        summary.err_max = nodal_max_error(disc->space(), result.state.curr, *problem.exact, t);
        summary.err_l2 = l2_error(disc->space(), result.state.curr, *problem.exact, t);
        if (problem.exact->gradient)
            summary.err_h1 = h1_error(disc->space(), result.state.curr, *problem.exact, t);
    }
    summary.snapshots = std::move(result.snapshots);
    summary.final_field = std::move(result.state.curr);
    if (disc_out)
        *disc_out = std::move(disc);
    return summary;
}

void write_summary(std::ostream& out, const SingleRunSummary& s) {
    out << "dofs " << s.dofs << '\n';
    out << "h " << format_number(s.h, "%.17g") << '\n';
    out << "k " << format_number(s.grid.k, "%.17g") << '\n';
    out << "steps " << s.grid.num_steps << '\n';
    out << "final_time " << format_number(s.grid.final_time(), "%.17g") << '\n';
    if (s.stability) {
        out << "lambda_max " << format_number(s.stability->lambda_max, "%.10e") << '\n';
        out << "k_max " << format_number(s.stability->k_max, "%.10e") << '\n';
        out << "cfl_ratio " << format_number(s.stability->cfl_ratio, "%.6f") << '\n';
    }
    if (s.err_max)
        out << "err_max " << format_number(*s.err_max, "%.10e") << '\n';
    if (s.err_l2)
        out << "err_l2 " << format_number(*s.err_l2, "%.10e") << '\n';
    if (s.err_h1)
        out << "err_h1 " << format_number(*s.err_h1, "%.10e") << '\n';
}

} // namespace fvem
