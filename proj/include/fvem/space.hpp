#pragma once

#include "fvem/geometry.hpp"
#include "fvem/mesh.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace fvem {

/// Gradients of the three P1 hat functions on a counterclockwise triangle.
std::array<Point2, 3> basis_gradients(const std::array<Point2, 3>& p);

/// Piecewise-linear space vanishing on the boundary. Degrees of freedom are
/// the interior nodes, numbered in increasing node order.
class P1Space {
public:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    explicit P1Space(const PrimalMesh& mesh);

    const PrimalMesh& mesh() const { return *mesh_; }
    std::size_t dof_count() const { return dof_to_node_.size(); }
    std::size_t node_of(std::size_t dof) const { return dof_to_node_[dof]; }
    /// npos for boundary nodes.
    std::size_t dof_of(std::size_t node) const { return node_to_dof_[node]; }

private:
    const PrimalMesh* mesh_;
    std::vector<std::size_t> dof_to_node_;
    std::vector<std::size_t> node_to_dof_;
};

/// Coefficients in the nodal basis of the interior nodes.
struct NodalField {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

using ScalarFunction = std::function<double(Point2)>;

/// Nodal interpolant; boundary values are implicitly zero.
NodalField interpolate(const P1Space& space, const ScalarFunction& g);

/// Values at every mesh node, zeros on the boundary.
std::vector<double> expand(const P1Space& space, const NodalField& field);

/// Interior-node values of a full nodal vector.
NodalField restrict_to_interior(const P1Space& space, std::span<const double> nodal);

/// Barycentric evaluation of a P1 function given by values at all nodes.
double evaluate(const PrimalMesh& mesh, std::span<const double> nodal, Point2 point);
double evaluate(const P1Space& space, const NodalField& field, Point2 point);

struct DiscreteNorms {
    double l2h = 0.0;
    double h1_semi = 0.0;
    double h1h = 0.0;
};

DiscreteNorms discrete_norms(const PrimalMesh& mesh, std::span<const double> nodal);
DiscreteNorms discrete_norms(const P1Space& space, const NodalField& field);

/// L2 norm of a P1 function with the edge-midpoint rule (exact for quadratics).
double consistent_l2_norm(const PrimalMesh& mesh, std::span<const double> nodal);

} // namespace fvem
