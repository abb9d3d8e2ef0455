#pragma once

#include "fvem/mesh.hpp"
#include "fvem/problems.hpp"
#include "fvem/space.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace fvem {

/// Compressed-row sparse matrix over interior degrees of freedom.
class SparseMatrix {
public:
    struct Triplet {
        std::size_t row;
        std::size_t col;
        double value;
    };

    SparseMatrix() = default;

    /// Duplicates are summed in input order; exact zeros are dropped.
    static SparseMatrix from_triplets(std::size_t n, std::vector<Triplet> triplets);

    std::size_t size() const { return n_; }
    std::size_t nonzeros() const { return values_.size(); }
    std::span<const std::size_t> row_ptr() const { return row_ptr_; }
    std::span<const std::size_t> cols() const { return cols_; }
    std::span<const double> values() const { return values_; }

    /// Entry (i, j), zero if not stored.
    double operator()(std::size_t i, std::size_t j) const;

    /// y = A x
    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> operator*(std::span<const double> x) const;

    bool is_symmetric(double tol = 1e-12) const;
    /// Stored at assembly time; diagnostic only.
    bool symmetric_flag() const { return symmetric_; }

    SparseMatrix scaled(double c) const;

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::size_t> cols_;
    std::vector<double> values_;
    bool symmetric_ = false;
};

using AssembledOperator = SparseMatrix;

/// Strictly positive diagonal.
class DiagonalOperator {
public:
    DiagonalOperator() = default;
    explicit DiagonalOperator(std::vector<double> entries);

    std::size_t size() const { return entries_.size(); }
    double operator[](std::size_t i) const { return entries_[i]; }
    std::span<const double> entries() const { return entries_; }

    /// y = D^{-1} x, in place.
    void solve_in_place(std::span<double> x) const;

private:
    std::vector<double> entries_;
};

/// How control-volume flux integrals of the coefficient are evaluated.
enum class FluxQuadrature {
    exact,     ///< closed form for constant coefficients, two-point Gauss otherwise
    endpoint,  ///< average of the edge-midpoint and barycenter values
};

DiagonalOperator assemble_lumped_mass(const P1Space& space, const DualMesh& dual);

/// Entry (i, j) = -Σ_{segments of K*_i} ∫ A ∇φ_j · n ds.
SparseMatrix assemble_stiffness(const P1Space& space, const DualMesh& dual,
                                const CoefficientField& coeff, FluxQuadrature mode);

/// Flux operator of the memory kernel frozen at (t, s).
SparseMatrix assemble_memory_matrix(const P1Space& space, const DualMesh& dual,
                                    const MemoryKernel& kernel, double t, double s,
                                    FluxQuadrature mode);

/// y += B(t, s) x without materializing the matrix.
void apply_memory_kernel(const P1Space& space, const DualMesh& dual, const MemoryKernel& kernel,
                         double t, double s, FluxQuadrature mode, std::span<const double> x,
                         std::span<double> y);

/// Lumped load: entry for interior node P is f(P, t) |K*_P|.
std::vector<double> assemble_load(const P1Space& space, const DualMesh& dual,
                                  const std::function<double(Point2, double)>& f, double t);

/// One "i j value" line per stored entry.
void write_coordinates(std::ostream& out, const SparseMatrix& matrix);

} // namespace fvem
