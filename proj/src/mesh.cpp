#include "fvem/mesh.hpp"

#include "fvem/error.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace fvem {

std::size_t PrimalMesh::num_interior_nodes() const {
    return static_cast<std::size_t>(std::count(boundary.begin(), boundary.end(), false));
}

double PrimalMesh::area(std::size_t t) const {
    const auto [a, b, c] = vertices(t);
    return signed_area(a, b, c);
}

double PrimalMesh::total_area() const {
    double sum = 0.0;
    for (std::size_t t = 0; t < triangles.size(); ++t)
        sum += area(t);
    return sum;
}

PrimalMesh make_mesh(std::vector<Point2> nodes, std::vector<Triangle> triangles,
                     std::vector<bool> boundary) {
    if (boundary.size() != nodes.size())
        throw MeshError("boundary flag count " + std::to_string(boundary.size()) +
                        " does not match node count " + std::to_string(nodes.size()));

    PrimalMesh mesh;
    mesh.nodes = std::move(nodes);
    mesh.boundary = std::move(boundary);
    mesh.triangles = std::move(triangles);

    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        auto& tri = mesh.triangles[t];
        for (auto v : tri)
            if (v >= mesh.nodes.size())
                throw MeshError("triangle " + std::to_string(t) + " references node " +
                                std::to_string(v) + " out of range");
        const auto [a, b, c] = mesh.vertices(t);
        const double area = signed_area(a, b, c);
        const double scale = std::max({norm(b - a), norm(c - b), norm(a - c)});
        if (!(std::abs(area) > 1e-14 * scale * scale))
            throw MeshError("triangle " + std::to_string(t) + " is degenerate");
        if (area < 0.0)
            std::swap(tri[1], tri[2]);
        mesh.h = std::max(mesh.h, scale);
    }
    return mesh;
}

PrimalMesh build_uniform_triangulation(std::size_t n, Rectangle domain) {
    if (n == 0)
        throw InvalidArgument("uniform triangulation needs n >= 1");
    if (!(domain.width() > 0.0) || !(domain.height() > 0.0))
        throw InvalidArgument("uniform triangulation needs a non-empty rectangle");

    const std::size_t side = n + 1;
    const double dx = domain.width() / static_cast<double>(n);
    const double dy = domain.height() / static_cast<double>(n);

    std::vector<Point2> nodes;
    std::vector<bool> boundary;
    nodes.reserve(side * side);
    boundary.reserve(side * side);
    for (std::size_t j = 0; j < side; ++j) {
        for (std::size_t i = 0; i < side; ++i) {
            // Pin the far edges to the rectangle exactly.
            const double x = (i == n) ? domain.upper.x : domain.lower.x + static_cast<double>(i) * dx;
            const double y = (j == n) ? domain.upper.y : domain.lower.y + static_cast<double>(j) * dy;
            nodes.push_back({x, y});
            boundary.push_back(i == 0 || j == 0 || i == n || j == n);
        }
    }

    std::vector<Triangle> triangles;
    triangles.reserve(2 * n * n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t ll = j * side + i;
            const std::size_t lr = ll + 1;
            const std::size_t ul = ll + side;
            const std::size_t ur = ul + 1;
            triangles.push_back({ll, lr, ur});
            triangles.push_back({ll, ur, ul});
        }
    }
    return make_mesh(std::move(nodes), std::move(triangles), std::move(boundary));
}

double DualMesh::total_area() const {
    double sum = 0.0;
    for (const auto& cv : control_volumes)
        sum += cv.area;
    return sum;
}

namespace {

ControlVolumeSegment make_segment(std::size_t owner, std::size_t tri, Point2 m, Point2 q,
                                  bool midpoint_leads) {
    ControlVolumeSegment seg;
    seg.owner_node = owner;
    seg.triangle = tri;
    seg.edge_midpoint = m;
    seg.barycenter = q;
    seg.midpoint_leads = midpoint_leads;
    const Point2 tangent = seg.head() - seg.tail();
    seg.length = norm(tangent);
    // Counterclockwise traversal: outward is the tangent turned clockwise.
    seg.outward_normal = Point2{tangent.y, -tangent.x} * (1.0 / seg.length);
    return seg;
}

double quad_area(Point2 a, Point2 b, Point2 c, Point2 d) {
    return 0.5 * (cross(a, b) + cross(b, c) + cross(c, d) + cross(d, a));
}

} // namespace

DualMesh build_dual_mesh(const PrimalMesh& mesh) {
    DualMesh dual;
    dual.control_volumes.resize(mesh.num_nodes());
    dual.vertex_shares.resize(mesh.num_triangles());

    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        const auto p = mesh.vertices(t);
        const double area = signed_area(p[0], p[1], p[2]);
        if (!(area > 0.0) || !std::isfinite(area))
            throw MeshError("triangle " + std::to_string(t) + " is degenerate or clockwise (area " +
                            std::to_string(area) + ")");

        const Point2 q = (1.0 / 3.0) * (p[0] + p[1] + p[2]);
        for (std::size_t l = 0; l < 3; ++l) {
            const std::size_t next = (l + 1) % 3;
            const std::size_t prev = (l + 2) % 3;
            const Point2 m_next = midpoint(p[l], p[next]);
            const Point2 m_prev = midpoint(p[prev], p[l]);

            auto& cv = dual.control_volumes[tri[l]];
            cv.segments.push_back(make_segment(tri[l], t, m_next, q, true));
            cv.segments.push_back(make_segment(tri[l], t, m_prev, q, false));

            // Shoelace relative to the vertex keeps cancellation small.
            const double share = quad_area({0.0, 0.0}, m_next - p[l], q - p[l], m_prev - p[l]);
            dual.vertex_shares[t][l] = share;
            cv.area += share;
        }
    }
    return dual;
}

QuasiUniformityReport quasi_uniformity_report(const DualMesh& dual, const PrimalMesh& mesh,
                                              std::optional<double> h_ref) {
    QuasiUniformityReport report;
    report.h_ref = h_ref.value_or(mesh.h);
    const double h2 = report.h_ref * report.h_ref;
    if (!(h2 > 0.0))
        throw InvalidArgument("quasi-uniformity report needs a positive reference length");

    auto accumulate = [](RangeStats& stats, double v) {
        if (stats.count == 0) {
            stats.min = stats.max = v;
        } else {
            stats.min = std::min(stats.min, v);
            stats.max = std::max(stats.max, v);
        }
        ++stats.count;
    };

    RangeStats interior;
    for (std::size_t p = 0; p < mesh.num_nodes(); ++p)
        if (!mesh.boundary[p])
            accumulate(interior, dual.control_volumes[p].area / h2);
    if (interior.count > 0)
        report.interior_volume_ratio = interior;

    for (std::size_t t = 0; t < mesh.num_triangles(); ++t)
        accumulate(report.triangle_area_ratio, mesh.area(t) / h2);
    return report;
}

namespace {

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    /// Next non-blank line split into tokens; false at end of input.
    bool next(std::vector<std::string>& tokens) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            std::istringstream ss(line);
            tokens.clear();
            for (std::string tok; ss >> tok;)
                tokens.push_back(tok);
            if (!tokens.empty())
                return true;
        }
        return false;
    }

    std::size_t line() const { return line_no_; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw MeshError("mesh file line " + std::to_string(line_no_) + ": " + msg);
    }

    void expect(std::vector<std::string>& tokens, const std::string& what) {
        if (!next(tokens))
            fail("unexpected end of input, expected " + what);
    }

    double to_double(const std::string& tok) const {
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size() || errno == ERANGE || !std::isfinite(v))
            fail("malformed coordinate '" + tok + "'");
        return v;
    }

    std::size_t to_index(const std::string& tok) const {
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
            fail("malformed index '" + tok + "'");
        char* end = nullptr;
        errno = 0;
        const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
        if (errno == ERANGE)
            fail("index '" + tok + "' out of range");
        return static_cast<std::size_t>(v);
    }

private:
    std::istream& in_;
    std::size_t line_no_ = 0;
};

} // namespace

PrimalMesh read_mesh(std::istream& in) {
    LineReader reader(in);
    std::vector<std::string> tok;

    reader.expect(tok, "'nodes <count>'");
    if (tok.size() != 2 || tok[0] != "nodes")
        reader.fail("expected 'nodes <count>'");
    const std::size_t num_nodes = reader.to_index(tok[1]);
    std::vector<Point2> nodes;
    nodes.reserve(num_nodes);
    for (std::size_t i = 0; i < num_nodes; ++i) {
        reader.expect(tok, "node coordinates");
        if (tok.size() != 2)
            reader.fail("expected 'x y'");
        nodes.push_back({reader.to_double(tok[0]), reader.to_double(tok[1])});
    }

    reader.expect(tok, "'triangles <count>'");
    if (tok.size() != 2 || tok[0] != "triangles")
        reader.fail("expected 'triangles <count>'");
    const std::size_t num_tris = reader.to_index(tok[1]);
    std::vector<Triangle> triangles;
    triangles.reserve(num_tris);
    for (std::size_t i = 0; i < num_tris; ++i) {
        reader.expect(tok, "triangle indices");
        if (tok.size() != 3)
            reader.fail("expected 'i j k'");
        Triangle tri{reader.to_index(tok[0]), reader.to_index(tok[1]), reader.to_index(tok[2])};
        for (auto v : tri)
            if (v >= num_nodes)
                reader.fail("node index " + std::to_string(v) + " out of range");
        triangles.push_back(tri);
    }

    reader.expect(tok, "'boundary'");
    if (tok.size() != 1 || tok[0] != "boundary")
        reader.fail("expected 'boundary'");
    std::vector<bool> boundary(num_nodes, false);
    while (reader.next(tok)) {
        for (const auto& t : tok) {
            const std::size_t v = reader.to_index(t);
            if (v >= num_nodes)
                reader.fail("boundary node " + std::to_string(v) + " out of range");
            boundary[v] = true;
        }
    }
    return make_mesh(std::move(nodes), std::move(triangles), std::move(boundary));
}

PrimalMesh read_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw MeshError("cannot open mesh file '" + path + "'");
    return read_mesh(in);
}

void write_mesh(std::ostream& out, const PrimalMesh& mesh) {
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    out << "nodes " << mesh.num_nodes() << '\n';
    for (const auto& p : mesh.nodes)
        out << p.x << ' ' << p.y << '\n';
    out << "triangles " << mesh.num_triangles() << '\n';
    for (const auto& t : mesh.triangles)
        out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    out << "boundary\n";
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i)
        if (mesh.boundary[i])
            out << i << '\n';
}

} // namespace fvem
