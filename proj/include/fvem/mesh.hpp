#pragma once

#include "fvem/geometry.hpp"

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fvem {

using Triangle = std::array<std::size_t, 3>;

/// Primal triangulation. Triangles are stored counterclockwise.
struct PrimalMesh {
    std::vector<Point2> nodes;
    std::vector<Triangle> triangles;
    std::vector<bool> boundary;
    double h = 0.0; ///< max triangle diameter

    std::size_t num_nodes() const { return nodes.size(); }
    std::size_t num_triangles() const { return triangles.size(); }
    std::size_t num_interior_nodes() const;

    std::array<Point2, 3> vertices(std::size_t t) const {
        const auto& tri = triangles[t];
        return {nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]};
    }
    double area(std::size_t t) const;
    double total_area() const;
};

/// Builds a mesh from raw data: clockwise triangles are reordered, h is
/// computed, and index/degeneracy errors raise MeshError.
PrimalMesh make_mesh(std::vector<Point2> nodes, std::vector<Triangle> triangles,
                     std::vector<bool> boundary);

/// Tensor grid with n cells per side, each cell cut along its
/// lower-left to upper-right diagonal.
PrimalMesh build_uniform_triangulation(std::size_t n, Rectangle domain = Rectangle::unit_square());

/// Piece of a control-volume boundary inside one triangle: the straight
/// segment between an edge midpoint and the triangle barycenter.
struct ControlVolumeSegment {
    std::size_t owner_node = 0;
    std::size_t triangle = 0;
    Point2 edge_midpoint;
    Point2 barycenter;
    bool midpoint_leads = true; ///< counterclockwise traversal around the owner starts at the midpoint
    Point2 outward_normal;
    double length = 0.0;

    Point2 tail() const { return midpoint_leads ? edge_midpoint : barycenter; }
    Point2 head() const { return midpoint_leads ? barycenter : edge_midpoint; }
};

struct ControlVolume {
    double area = 0.0;
    std::vector<ControlVolumeSegment> segments;
};

/// Barycentric dual mesh.
struct DualMesh {
    std::vector<ControlVolume> control_volumes;     ///< indexed by node
    std::vector<std::array<double, 3>> vertex_shares; ///< area of K ∩ K*_P per local vertex

    double total_area() const;
};

DualMesh build_dual_mesh(const PrimalMesh& mesh);

struct RangeStats {
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

struct QuasiUniformityReport {
    double h_ref = 0.0;
    std::optional<RangeStats> interior_volume_ratio; ///< |K*_P| / h_ref², interior P only
    RangeStats triangle_area_ratio;                  ///< |K| / h_ref²
};

/// Quasi-uniformity diagnostics. h_ref defaults to the mesh diameter h.
QuasiUniformityReport quasi_uniformity_report(const DualMesh& dual, const PrimalMesh& mesh,
                                              std::optional<double> h_ref = std::nullopt);

/// Text format:
///   nodes <count>         then "x y" per line
///   triangles <count>     then "i j k" per line (0-based)
///   boundary              then node indices until end of input
PrimalMesh read_mesh(std::istream& in);
PrimalMesh read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const PrimalMesh& mesh);

} // namespace fvem
