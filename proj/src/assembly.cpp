#include "fvem/assembly.hpp"

#include "fvem/error.hpp"
#include "fvem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace fvem {

SparseMatrix SparseMatrix::from_triplets(std::size_t n, std::vector<Triplet> triplets) {
    for (const auto& t : triplets)
        if (t.row >= n || t.col >= n)
            throw InvalidArgument("triplet index out of range");

    std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseMatrix m;
    m.n_ = n;
    m.row_ptr_.assign(n + 1, 0);
    for (std::size_t i = 0; i < triplets.size();) {
        const std::size_t row = triplets[i].row;
        const std::size_t col = triplets[i].col;
        double sum = 0.0;
        for (; i < triplets.size() && triplets[i].row == row && triplets[i].col == col; ++i)
            sum += triplets[i].value;
        if (sum != 0.0) {
            m.cols_.push_back(col);
            m.values_.push_back(sum);
            ++m.row_ptr_[row + 1];
        }
    }
    std::partial_sum(m.row_ptr_.begin(), m.row_ptr_.end(), m.row_ptr_.begin());
    m.symmetric_ = m.is_symmetric();
    return m;
}

double SparseMatrix::operator()(std::size_t i, std::size_t j) const {
    const auto begin = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
    const auto end = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
    const auto it = std::lower_bound(begin, end, j);
    if (it == end || *it != j)
        return 0.0;
    return values_[static_cast<std::size_t>(it - cols_.begin())];
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != n_ || y.size() != n_)
        throw InvalidArgument("matrix-vector dimension mismatch");
    for (std::size_t i = 0; i < n_; ++i) {
        double sum = 0.0;
        for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
            sum += values_[p] * x[cols_[p]];
        y[i] = sum;
    }
}

std::vector<double> SparseMatrix::operator*(std::span<const double> x) const {
    std::vector<double> y(n_);
    multiply(x, y);
    return y;
}

bool SparseMatrix::is_symmetric(double tol) const {
    double scale = 0.0;
    for (double v : values_)
        scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
            if (std::abs(values_[p] - (*this)(cols_[p], i)) > tol * scale)
                return false;
    return true;
}

SparseMatrix SparseMatrix::scaled(double c) const {
    SparseMatrix m = *this;
    for (double& v : m.values_)
        v *= c;
    return m;
}

DiagonalOperator::DiagonalOperator(std::vector<double> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (!(entries_[i] > 0.0))
            throw AssemblyError("diagonal entry " + std::to_string(i) + " is not positive");
}

void DiagonalOperator::solve_in_place(std::span<double> x) const {
    if (x.size() != entries_.size())
        throw InvalidArgument("diagonal solve dimension mismatch");
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] /= entries_[i];
}

DiagonalOperator assemble_lumped_mass(const P1Space& space, const DualMesh& dual) {
    std::vector<double> entries(space.dof_count());
    for (std::size_t i = 0; i < space.dof_count(); ++i) {
        const std::size_t node = space.node_of(i);
        const double area = dual.control_volumes.at(node).area;
        if (!(area > 0.0))
            throw AssemblyError("control volume of node " + std::to_string(node) + " has zero area");
        entries[i] = area;
    }
    return DiagonalOperator(std::move(entries));
}

namespace {

/// Visits every interior-interior flux contribution (row dof, col dof, value).
template <class CoeffEval, class Visit>
void for_each_flux(const P1Space& space, const DualMesh& dual, bool constant, CoeffEval&& coeff,
                   FluxQuadrature mode, Visit&& visit) {
    const PrimalMesh& mesh = space.mesh();
    if (dual.control_volumes.size() != mesh.num_nodes())
        throw InvalidArgument("dual mesh does not match the space's mesh");

    for (std::size_t node = 0; node < mesh.num_nodes(); ++node) {
        const std::size_t row = space.dof_of(node);
        if (row == P1Space::npos)
            continue;
        for (const auto& seg : dual.control_volumes[node].segments) {
            Mat2 integrated;
            if (constant)
                integrated = seg.length * coeff(seg.barycenter);
            else if (mode == FluxQuadrature::exact)
                integrated = segment_gauss2(seg, coeff);
            else
                integrated = segment_rule(seg, coeff);

            const auto& tri = mesh.triangles[seg.triangle];
            const auto grads = basis_gradients(mesh.vertices(seg.triangle));
            for (std::size_t l = 0; l < 3; ++l) {
                const std::size_t col = space.dof_of(tri[l]);
                if (col == P1Space::npos)
                    continue;
                visit(row, col, -dot(integrated * grads[l], seg.outward_normal));
            }
        }
    }
}

std::string where(Point2 p) {
    std::ostringstream s;
    s << "(" << p.x << ", " << p.y << ")";
    return s.str();
}

template <class CoeffEval>
SparseMatrix assemble_flux(const P1Space& space, const DualMesh& dual, bool constant,
                           CoeffEval&& coeff, FluxQuadrature mode) {
    std::vector<SparseMatrix::Triplet> triplets;
    for_each_flux(space, dual, constant, coeff, mode,
                  [&](std::size_t i, std::size_t j, double v) { triplets.push_back({i, j, v}); });
    return SparseMatrix::from_triplets(space.dof_count(), std::move(triplets));
}

} // namespace

SparseMatrix assemble_stiffness(const P1Space& space, const DualMesh& dual,
                                const CoefficientField& coeff, FluxQuadrature mode) {
    auto checked = [&coeff](Point2 x) {
        const Mat2 a = coeff(x);
        if (!is_spd(a))
            throw AssemblyError("coefficient is not symmetric positive definite at " + where(x));
        return a;
    };
    return assemble_flux(space, dual, coeff.is_constant(), checked, mode);
}

namespace {

auto frozen_kernel(const MemoryKernel& kernel, double t, double s) {
    return [&kernel, t, s](Point2 x) {
        const Mat2 b = kernel(x, t, s);
        if (!b.is_finite())
            throw AssemblyError("memory kernel is not finite at " + where(x));
        return b;
    };
}

bool kernel_is_constant_in_space(const MemoryKernel& kernel) {
    const auto* sep = kernel.separable_part();
    return kernel.is_none() || (sep && sep->base.is_constant());
}

} // namespace

SparseMatrix assemble_memory_matrix(const P1Space& space, const DualMesh& dual,
                                    const MemoryKernel& kernel, double t, double s,
                                    FluxQuadrature mode) {
    return assemble_flux(space, dual, kernel_is_constant_in_space(kernel),
                         frozen_kernel(kernel, t, s), mode);
}

void apply_memory_kernel(const P1Space& space, const DualMesh& dual, const MemoryKernel& kernel,
                         double t, double s, FluxQuadrature mode, std::span<const double> x,
                         std::span<double> y) {
    if (x.size() != space.dof_count() || y.size() != space.dof_count())
        throw InvalidArgument("memory kernel application dimension mismatch");
    if (kernel.is_none())
        return;
    for_each_flux(space, dual, kernel_is_constant_in_space(kernel), frozen_kernel(kernel, t, s),
                  mode, [&](std::size_t i, std::size_t j, double v) { y[i] += v * x[j]; });
}

std::vector<double> assemble_load(const P1Space& space, const DualMesh& dual,
                                  const std::function<double(Point2, double)>& f, double t) {
    std::vector<double> load(space.dof_count());
    for (std::size_t i = 0; i < space.dof_count(); ++i) {
        const std::size_t node = space.node_of(i);
        const Point2 p = space.mesh().nodes[node];
        const double v = f(p, t);
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "non-finite forcing at node " << node << " " << where(p) << ", t = " << t;
            throw EvaluationError(msg.str());
        }
        load[i] = v * dual.control_volumes[node].area;
    }
    return load;
}

void write_coordinates(std::ostream& out, const SparseMatrix& matrix) {
    const auto flags = out.flags();
    const auto prec = out.precision(std::numeric_limits<double>::max_digits10);
    const auto ptr = matrix.row_ptr();
    const auto cols = matrix.cols();
    const auto vals = matrix.values();
    for (std::size_t i = 0; i < matrix.size(); ++i)
        for (std::size_t p = ptr[i]; p < ptr[i + 1]; ++p)
            out << i << ' ' << cols[p] << ' ' << vals[p] << '\n';
    out.precision(prec);
    out.flags(flags);
}

} // namespace fvem
