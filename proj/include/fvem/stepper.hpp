#pragma once

#include "fvem/assembly.hpp"
#include "fvem/error.hpp"
#include "fvem/mesh.hpp"
#include "fvem/problems.hpp"
#include "fvem/quadrature.hpp"
#include "fvem/space.hpp"

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace fvem {

/// Mesh, dual mesh, space and assembled operators of one problem.
class Discretization {
public:
    Discretization(ProblemSpec problem, PrimalMesh mesh,
                   FluxQuadrature mode = FluxQuadrature::endpoint);

    const ProblemSpec& problem() const { return problem_; }
    const PrimalMesh& mesh() const { return *mesh_; }
    const DualMesh& dual() const { return *dual_; }
    const P1Space& space() const { return *space_; }
    FluxQuadrature mode() const { return mode_; }

    const DiagonalOperator& mass() const { return mass_; }
    const SparseMatrix& stiffness() const { return stiffness_; }
    /// Spatial factor B0 of a separable kernel; null otherwise.
    const SparseMatrix* memory_base() const { return memory_base_ ? &*memory_base_ : nullptr; }

    std::vector<double> load(double t) const;

    /// y += B(t, s) x
    void apply_memory(double t, double s, std::span<const double> x, std::span<double> y) const;

private:
    ProblemSpec problem_;
    std::shared_ptr<const PrimalMesh> mesh_;
    std::shared_ptr<const DualMesh> dual_;
    std::shared_ptr<const P1Space> space_;
    FluxQuadrature mode_;
    DiagonalOperator mass_;
    SparseMatrix stiffness_;
    std::optional<SparseMatrix> memory_base_;
};

enum class MemoryPath {
    automatic, ///< recursive when the kernel allows it
    recursive, ///< one accumulator vector; exponential separable kernels only
    history,   ///< stores every half-level average
};

struct SolverState {
    TimeGrid grid;
    std::size_t step = 0;
    NodalField prev; ///< level n - 1 (empty at n = 0)
    NodalField curr; ///< level n
    MemoryPath path = MemoryPath::history;
    /// Half-level averages U^{j+1/2}, j < n (history path).
    std::vector<std::vector<double>> history;
    /// Σ_{j<n} beta(t_n - t_{j+1/2}) U^{j+1/2} (recursive path).
    std::vector<double> accumulator;
    double divergence_threshold = 0.0;

    double time() const { return grid.time(step); }
};

struct StabilityEstimate {
    double lambda_max = 0.0;   ///< largest eigenvalue of M^{-1} A
    double k_max = 0.0;        ///< 2 / sqrt(lambda_max)
    double recommended_k = 0.0;
    double cfl_ratio = 0.0;    ///< chosen k / k_max, set by run()
    std::size_t iterations = 0;
};

class CflViolation : public Error {
public:
    CflViolation(const std::string& what, StabilityEstimate estimate)
        : Error(what), estimate_(estimate) {}
    const StabilityEstimate& estimate() const noexcept { return estimate_; }

private:
    StabilityEstimate estimate_;
};

struct PowerIterationOptions {
    double tolerance = 1e-8;
    std::size_t max_iterations = 200000;
    double safety = 0.9;
    unsigned seed = 7;
};

StabilityEstimate estimate_stable_dt(const DiagonalOperator& mass, const SparseMatrix& stiffness,
                                     const PowerIterationOptions& options = {});
StabilityEstimate estimate_stable_dt(const Discretization& disc,
                                     const PowerIterationOptions& options = {});

/// U^0 = Π_h u0.
NodalField initial_field(const Discretization& disc);

/// U^1 = U^0 + k u1 + (k²/2) M^{-1}(F^0 - A U^0).
NodalField startup_step(const Discretization& disc, double k);

/// Max-norm growth factor over the initial data that counts as divergence.
inline constexpr double default_divergence_factor = 1e8;

/// State at level 0, or level 1 when the grid has at least one step.
SolverState start(const Discretization& disc, const TimeGrid& grid,
                  MemoryPath path = MemoryPath::automatic,
                  double divergence_factor = default_divergence_factor);

/// U^{n+1} = 2U^n - U^{n-1} + k² M^{-1}(F^n - A U^n - k Σ_j B(t_n, t_{j+1/2}) U^{j+1/2}).
void leapfrog_step(SolverState& state, const Discretization& disc);

/// Memory sum Σ_{j<n} B(t_n, t_{j+1/2}) U^{j+1/2} of the current state.
std::vector<double> memory_term(const SolverState& state, const Discretization& disc);

/// ‖(U^{n+1} - U^n)/k‖²_M + (A U^{n+1}) · U^n.
double discrete_energy(const Discretization& disc, const NodalField& prev, const NodalField& next,
                       double k);

struct Snapshot {
    std::size_t step = 0;
    double time = 0.0;
    NodalField field;
};

struct RunOptions {
    MemoryPath path = MemoryPath::automatic;
    bool override_cfl = false;
    PowerIterationOptions stability{};
    double divergence_factor = default_divergence_factor;
    std::vector<double> snapshot_times;
};

struct RunResult {
    SolverState state;
    std::vector<Snapshot> snapshots;
    std::optional<StabilityEstimate> stability;
};

/// Startup plus num_steps - 1 leapfrog steps.
RunResult run(const Discretization& disc, const TimeGrid& grid, const RunOptions& options = {});

/// "x y value" for every mesh node.
void write_snapshot(std::ostream& out, const P1Space& space, const NodalField& field);

} // namespace fvem
