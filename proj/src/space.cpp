#include "fvem/space.hpp"

#include "fvem/error.hpp"

#include <cmath>
#include <sstream>

namespace fvem {

std::array<Point2, 3> basis_gradients(const std::array<Point2, 3>& p) {
    const double twice_area = cross(p[1] - p[0], p[2] - p[0]);
    std::array<Point2, 3> g;
    for (std::size_t l = 0; l < 3; ++l) {
        const Point2 a = p[(l + 1) % 3];
        const Point2 b = p[(l + 2) % 3];
        g[l] = Point2{a.y - b.y, b.x - a.x} * (1.0 / twice_area);
    }
    return g;
}

P1Space::P1Space(const PrimalMesh& mesh) : mesh_(&mesh), node_to_dof_(mesh.num_nodes(), npos) {
    for (std::size_t node = 0; node < mesh.num_nodes(); ++node) {
        if (!mesh.boundary[node]) {
            node_to_dof_[node] = dof_to_node_.size();
            dof_to_node_.push_back(node);
        }
    }
}

NodalField interpolate(const P1Space& space, const ScalarFunction& g) {
    NodalField field;
    field.values.resize(space.dof_count());
    for (std::size_t i = 0; i < space.dof_count(); ++i) {
        const std::size_t node = space.node_of(i);
        const Point2 p = space.mesh().nodes[node];
        const double v = g(p);
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "non-finite value at node " << node << " (" << p.x << ", " << p.y << ")";
            throw EvaluationError(msg.str());
        }
        field.values[i] = v;
    }
    return field;
}

std::vector<double> expand(const P1Space& space, const NodalField& field) {
    if (field.size() != space.dof_count())
        throw InvalidArgument("field length does not match dof count");
    std::vector<double> nodal(space.mesh().num_nodes(), 0.0);
    for (std::size_t i = 0; i < field.size(); ++i)
        nodal[space.node_of(i)] = field.values[i];
    return nodal;
}

NodalField restrict_to_interior(const P1Space& space, std::span<const double> nodal) {
    if (nodal.size() != space.mesh().num_nodes())
        throw InvalidArgument("nodal vector length does not match node count");
    NodalField field;
    field.values.resize(space.dof_count());
    for (std::size_t i = 0; i < space.dof_count(); ++i)
        field.values[i] = nodal[space.node_of(i)];
    return field;
}

double evaluate(const PrimalMesh& mesh, std::span<const double> nodal, Point2 point) {
    if (nodal.size() != mesh.num_nodes())
        throw InvalidArgument("nodal vector length does not match node count");
    constexpr double tol = 1e-12;
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const auto p = mesh.vertices(t);
        const double area = signed_area(p[0], p[1], p[2]);
        const double l0 = signed_area(point, p[1], p[2]) / area;
        const double l1 = signed_area(p[0], point, p[2]) / area;
        const double l2 = 1.0 - l0 - l1;
        if (l0 >= -tol && l1 >= -tol && l2 >= -tol) {
            const auto& tri = mesh.triangles[t];
            return l0 * nodal[tri[0]] + l1 * nodal[tri[1]] + l2 * nodal[tri[2]];
        }
    }
    std::ostringstream msg;
    msg << "point (" << point.x << ", " << point.y << ") lies outside the mesh";
    throw LocationError(msg.str());
}

double evaluate(const P1Space& space, const NodalField& field, Point2 point) {
    const auto nodal = expand(space, field);
    return evaluate(space.mesh(), nodal, point);
}

DiscreteNorms discrete_norms(const PrimalMesh& mesh, std::span<const double> nodal) {
    if (nodal.size() != mesh.num_nodes())
        throw InvalidArgument("nodal vector length does not match node count");
    double l2 = 0.0;
    double semi = 0.0;
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        const auto p = mesh.vertices(t);
        const double area = signed_area(p[0], p[1], p[2]);
        const auto grads = basis_gradients(p);
        Point2 grad{};
        double sq = 0.0;
        for (std::size_t l = 0; l < 3; ++l) {
            const double v = nodal[tri[l]];
            sq += v * v;
            grad = grad + v * grads[l];
        }
        l2 += area / 3.0 * sq;
        semi += area * dot(grad, grad);
    }
    return {std::sqrt(l2), std::sqrt(semi), std::sqrt(l2 + semi)};
}

DiscreteNorms discrete_norms(const P1Space& space, const NodalField& field) {
    const auto nodal = expand(space, field);
    return discrete_norms(space.mesh(), nodal);
}

double consistent_l2_norm(const PrimalMesh& mesh, std::span<const double> nodal) {
    if (nodal.size() != mesh.num_nodes())
        throw InvalidArgument("nodal vector length does not match node count");
    double sum = 0.0;
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        const double area = mesh.area(t);
        double local = 0.0;
        for (std::size_t l = 0; l < 3; ++l) {
            const double mid = 0.5 * (nodal[tri[l]] + nodal[tri[(l + 1) % 3]]);
            local += mid * mid;
        }
        sum += area / 3.0 * local;
    }
    return std::sqrt(sum);
}

} // namespace fvem
