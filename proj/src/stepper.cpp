#include "fvem/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

namespace fvem {

namespace {

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

} // namespace

Discretization::Discretization(ProblemSpec problem, PrimalMesh mesh, FluxQuadrature mode)
    : problem_(std::move(problem)),
      mesh_(std::make_shared<const PrimalMesh>(std::move(mesh))),
      dual_(std::make_shared<const DualMesh>(build_dual_mesh(*mesh_))),
      space_(std::make_shared<const P1Space>(*mesh_)),
      mode_(mode),
      mass_(assemble_lumped_mass(*space_, *dual_)),
      stiffness_(assemble_stiffness(*space_, *dual_, problem_.coeff, mode)) {
    if (const auto* sep = problem_.kernel.separable_part()) {
        const auto unit = MemoryKernel::separable([](double) { return 1.0; }, sep->base);
        memory_base_ = assemble_memory_matrix(*space_, *dual_, unit, 0.0, 0.0, mode);
    }
}

std::vector<double> Discretization::load(double t) const {
    return assemble_load(*space_, *dual_, problem_.forcing, t);
}

void Discretization::apply_memory(double t, double s, std::span<const double> x,
                                  std::span<double> y) const {
    if (const auto* sep = problem_.kernel.separable_part()) {
        const double beta = sep->beta(t - s);
        const auto bx = *memory_base_ * x;
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] += beta * bx[i];
        return;
    }
    apply_memory_kernel(*space_, *dual_, problem_.kernel, t, s, mode_, x, y);
}

StabilityEstimate estimate_stable_dt(const DiagonalOperator& mass, const SparseMatrix& stiffness,
                                     const PowerIterationOptions& options) {
    const std::size_t n = stiffness.size();
    if (n == 0)
        throw EstimationError("no degrees of freedom to estimate a stable step for");
    if (mass.size() != n)
        throw InvalidArgument("mass and stiffness dimensions differ");

    std::mt19937 rng(options.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> x(n), ax(n);
    for (double& v : x)
        v = dist(rng);

    auto mass_norm = [&mass](std::span<const double> v) {
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += mass[i] * v[i] * v[i];
        return std::sqrt(s);
    };

    double lambda = 0.0;
    for (std::size_t it = 1; it <= options.max_iterations; ++it) {
        const double xn = mass_norm(x);
        for (double& v : x)
            v /= xn;
        stiffness.multiply(x, ax);
        double rayleigh = 0.0; // x^T A x / x^T M x with ‖x‖_M = 1
        for (std::size_t i = 0; i < n; ++i)
            rayleigh += x[i] * ax[i];
        if (!std::isfinite(rayleigh))
            throw EstimationError("power iteration produced a non-finite Rayleigh quotient");

        const bool converged = it > 1 && std::abs(rayleigh - lambda) < options.tolerance * std::abs(rayleigh);
        lambda = rayleigh;
        if (converged) {
            if (!(lambda > 0.0))
                throw EstimationError("largest eigenvalue estimate is not positive");
            StabilityEstimate est;
            est.lambda_max = lambda;
            est.k_max = 2.0 / std::sqrt(lambda);
            est.recommended_k = options.safety * est.k_max;
            est.iterations = it;
            return est;
        }
        mass.solve_in_place(ax);
        std::swap(x, ax);
    }
    throw EstimationError("power iteration did not converge in " +
                          std::to_string(options.max_iterations) + " iterations");
}

StabilityEstimate estimate_stable_dt(const Discretization& disc, const PowerIterationOptions& options) {
    return estimate_stable_dt(disc.mass(), disc.stiffness(), options);
}

NodalField initial_field(const Discretization& disc) {
    return interpolate(disc.space(), disc.problem().u0);
}

NodalField startup_step(const Discretization& disc, double k) {
    const NodalField u0 = initial_field(disc);
    const NodalField u1 = interpolate(disc.space(), disc.problem().u1);
    auto rhs = disc.load(0.0);
    const auto au = disc.stiffness() * std::span<const double>(u0.values);
    for (std::size_t i = 0; i < rhs.size(); ++i)
        rhs[i] -= au[i];
    disc.mass().solve_in_place(rhs);

    NodalField next;
    next.values.resize(u0.size());
    for (std::size_t i = 0; i < u0.size(); ++i)
        next.values[i] = u0.values[i] + k * u1.values[i] + 0.5 * k * k * rhs[i];
    return next;
}

namespace {

MemoryPath resolve_path(MemoryPath requested, const MemoryKernel& kernel) {
    const auto* sep = kernel.separable_part();
    const bool recursive_ok = sep && sep->exp_rate.has_value();
    switch (requested) {
    case MemoryPath::automatic:
        return recursive_ok ? MemoryPath::recursive : MemoryPath::history;
    case MemoryPath::recursive:
        if (!recursive_ok && !kernel.is_none())
            throw InvalidArgument("recursive memory path needs an exponential separable kernel");
        return MemoryPath::recursive;
    case MemoryPath::history:
        return MemoryPath::history;
    }
    return MemoryPath::history;
}

void push_half_level(SolverState& state, const Discretization& disc, std::vector<double> half) {
    const MemoryKernel& kernel = disc.problem().kernel;
    if (kernel.is_none())
        return;
    if (state.path == MemoryPath::history) {
        state.history.push_back(std::move(half));
        return;
    }
    const double rate = *kernel.separable_part()->exp_rate;
    const double k = state.grid.k;
    const double decay = std::exp(rate * k);
    const double weight = std::exp(0.5 * rate * k);
    if (state.accumulator.empty())
        state.accumulator.assign(half.size(), 0.0);
    for (std::size_t i = 0; i < half.size(); ++i)
        state.accumulator[i] = decay * state.accumulator[i] + weight * half[i];
}

std::vector<double> average(const NodalField& a, const NodalField& b) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = 0.5 * (a.values[i] + b.values[i]);
    return out;
}

void check_divergence(const SolverState& state, std::span<const double> values, std::size_t step) {
    const double m = max_abs(values);
    const bool finite = std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
    if (!finite || m > state.divergence_threshold) {
        std::ostringstream msg;
        msg << "solution diverged at step " << step << " (t = " << state.grid.time(step)
            << "): max |U| = " << (finite ? m : std::numeric_limits<double>::infinity());
        throw DivergenceError(msg.str(), static_cast<long>(step),
                              finite ? m : std::numeric_limits<double>::infinity());
    }
}

} // namespace

SolverState start(const Discretization& disc, const TimeGrid& grid, MemoryPath path,
                  double divergence_factor) {
    SolverState state;
    state.grid = grid;
    state.path = resolve_path(path, disc.problem().kernel);
    state.curr = initial_field(disc);
    state.divergence_threshold = divergence_factor * std::max(1.0, max_abs(state.curr.values));
    if (grid.num_steps == 0)
        return state;

    NodalField next = startup_step(disc, grid.k);
    state.divergence_threshold =
        std::max(state.divergence_threshold, divergence_factor * max_abs(next.values));
    check_divergence(state, next.values, 1);
    push_half_level(state, disc, average(state.curr, next));
    state.prev = std::move(state.curr);
    state.curr = std::move(next);
    state.step = 1;
    return state;
}

std::vector<double> memory_term(const SolverState& state, const Discretization& disc) {
    const std::size_t n = disc.space().dof_count();
    std::vector<double> mem(n, 0.0);
    const MemoryKernel& kernel = disc.problem().kernel;
    if (kernel.is_none() || state.step == 0)
        return mem;

    if (state.path == MemoryPath::recursive) {
        disc.memory_base()->multiply(state.accumulator, mem);
        return mem;
    }

    const double tn = state.time();
    if (const auto* sep = kernel.separable_part()) {
        std::vector<double> weighted(n, 0.0);
        for (std::size_t j = 0; j < state.history.size(); ++j) {
            const double beta = sep->beta(tn - state.grid.midpoint(j));
            const auto& h = state.history[j];
            for (std::size_t i = 0; i < n; ++i)
                weighted[i] += beta * h[i];
        }
        disc.memory_base()->multiply(weighted, mem);
        return mem;
    }
    for (std::size_t j = 0; j < state.history.size(); ++j)
        disc.apply_memory(tn, state.grid.midpoint(j), state.history[j], mem);
    return mem;
}

void leapfrog_step(SolverState& state, const Discretization& disc) {
    if (state.step == 0)
        throw InvalidArgument("leapfrog step needs a state at level n >= 1");
    const std::size_t n = disc.space().dof_count();
    if (state.curr.size() != n || state.prev.size() != n)
        throw InvalidArgument("solver state does not match the discretization");

    const double k = state.grid.k;
    const double tn = state.time();
    auto rhs = disc.load(tn);
    const auto au = disc.stiffness() * std::span<const double>(state.curr.values);
    const auto mem = memory_term(state, disc);
    for (std::size_t i = 0; i < n; ++i)
        rhs[i] -= au[i] + k * mem[i];
    disc.mass().solve_in_place(rhs);

    NodalField next;
    next.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        next.values[i] = 2.0 * state.curr.values[i] - state.prev.values[i] + k * k * rhs[i];
    check_divergence(state, next.values, state.step + 1);

    push_half_level(state, disc, average(state.curr, next));
    state.prev = std::move(state.curr);
    state.curr = std::move(next);
    ++state.step;
}

double discrete_energy(const Discretization& disc, const NodalField& prev, const NodalField& next,
                       double k) {
    const auto& mass = disc.mass();
    double kinetic = 0.0;
    for (std::size_t i = 0; i < prev.size(); ++i) {
        const double v = (next.values[i] - prev.values[i]) / k;
        kinetic += mass[i] * v * v;
    }
    const auto an = disc.stiffness() * std::span<const double>(next.values);
    double potential = 0.0;
    for (std::size_t i = 0; i < prev.size(); ++i)
        potential += an[i] * prev.values[i];
    return kinetic + potential;
}

RunResult run(const Discretization& disc, const TimeGrid& grid, const RunOptions& options) {
    std::vector<std::size_t> snapshot_steps;
    for (double t : options.snapshot_times) {
        if (!(t >= 0.0) || t > grid.final_time() + 1e-12) {
            std::ostringstream msg;
            msg << "snapshot time " << t << " outside [0, " << grid.final_time() << "]";
            throw InvalidArgument(msg.str());
        }
        snapshot_steps.push_back(std::min(grid.num_steps, static_cast<std::size_t>(std::llround(t / grid.k))));
    }

    RunResult result;
    if (disc.space().dof_count() > 0) {
        StabilityEstimate est = estimate_stable_dt(disc, options.stability);
        est.cfl_ratio = grid.k / est.k_max;
        result.stability = est;
        if (grid.num_steps > 0 && grid.k > est.k_max && !options.override_cfl) {
            std::ostringstream msg;
            msg << "time step " << grid.k << " exceeds the stability limit " << est.k_max
                << " (lambda_max = " << est.lambda_max << ")";
            throw CflViolation(msg.str(), est);
        }
    }

    auto record = [&](const SolverState& s) {
        for (std::size_t i = 0; i < snapshot_steps.size(); ++i) {
            if (snapshot_steps[i] == s.step)
                result.snapshots.push_back({s.step, s.time(), s.curr});
            else if (s.step == 1 && snapshot_steps[i] == 0)
                result.snapshots.push_back({0, 0.0, s.prev});
        }
    };

    SolverState state = start(disc, grid, options.path, options.divergence_factor);
    record(state);
    while (state.step < grid.num_steps) {
        leapfrog_step(state, disc);
        record(state);
    }
    std::stable_sort(result.snapshots.begin(), result.snapshots.end(),
                     [](const Snapshot& a, const Snapshot& b) { return a.step < b.step; });
    result.state = std::move(state);
    return result;
}

void write_snapshot(std::ostream& out, const P1Space& space, const NodalField& field) {
    const auto nodal = expand(space, field);
    const auto flags = out.flags();
    const auto prec = out.precision(std::numeric_limits<double>::max_digits10);
    const auto& nodes = space.mesh().nodes;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        out << nodes[i].x << ' ' << nodes[i].y << ' ' << nodal[i] << '\n';
    out.precision(prec);
    out.flags(flags);
}

} // namespace fvem
