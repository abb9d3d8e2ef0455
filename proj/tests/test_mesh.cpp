#include "fvem/error.hpp"
#include "fvem/mesh.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace fvem;

namespace {

std::array<double, 3> barycentric(const std::array<Point2, 3>& p, Point2 x) {
    const double a = signed_area(p[0], p[1], p[2]);
    const double l0 = signed_area(x, p[1], p[2]) / a;
    const double l1 = signed_area(p[0], x, p[2]) / a;
    return {l0, l1, 1.0 - l0 - l1};
}

} // namespace

TEST_CASE("uniform triangulation counts") {
    SUBCASE("n = 1") {
        const auto m = build_uniform_triangulation(1);
        CHECK(m.num_nodes() == 4);
        CHECK(m.num_triangles() == 2);
        CHECK(m.num_interior_nodes() == 0);
    }
    SUBCASE("n = 2") {
        const auto m = build_uniform_triangulation(2);
        CHECK(m.num_nodes() == 9);
        CHECK(m.num_triangles() == 8);
        REQUIRE(m.num_interior_nodes() == 1);
        const auto it = std::find(m.boundary.begin(), m.boundary.end(), false);
        const Point2 p = m.nodes[static_cast<std::size_t>(it - m.boundary.begin())];
        CHECK(p.x == 0.5);
        CHECK(p.y == 0.5);
    }
    for (std::size_t n = 1; n <= 7; ++n) {
        const auto m = build_uniform_triangulation(n);
        CHECK(m.num_nodes() == (n + 1) * (n + 1));
        CHECK(m.num_triangles() == 2 * n * n);
        CHECK(m.num_interior_nodes() == (n - 1) * (n - 1));
        CHECK(m.h == doctest::Approx(std::sqrt(2.0) / static_cast<double>(n)).epsilon(1e-14));
        for (std::size_t t = 0; t < m.num_triangles(); ++t)
            CHECK(m.area(t) > 0.0);
    }
}

TEST_CASE("uniform triangulation area and rectangle") {
    const auto m = build_uniform_triangulation(4);
    CHECK(std::abs(m.total_area() - 1.0) < 1e-14);

    const auto r = build_uniform_triangulation(3, Rectangle{{-1.0, 2.0}, {1.0, 3.0}});
    CHECK(std::abs(r.total_area() - 2.0) < 1e-13);
    CHECK(r.nodes.back() == Point2{1.0, 3.0});
}

TEST_CASE("uniform triangulation rejects n = 0") {
    CHECK_THROWS_AS(build_uniform_triangulation(0), InvalidArgument);
}

TEST_CASE("diagonal runs lower-left to upper-right") {
    const auto m = build_uniform_triangulation(1);
    // Both triangles share the edge (0,0)-(1,1).
    for (const auto& tri : m.triangles) {
        CHECK(std::find(tri.begin(), tri.end(), 0u) != tri.end());
        CHECK(std::find(tri.begin(), tri.end(), 3u) != tri.end());
    }
}

TEST_CASE("make_mesh reorients clockwise triangles and rejects degenerate ones") {
    auto m = make_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 2, 1}}, {true, true, true});
    CHECK(m.area(0) == doctest::Approx(0.5));

    CHECK_THROWS_AS(make_mesh({{0, 0}, {1, 1}, {2, 2}}, {{0, 1, 2}}, {true, true, true}), MeshError);
    CHECK_THROWS_AS(make_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 5}}, {true, true, true}), MeshError);
    CHECK_THROWS_AS(make_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}, {true, true}), MeshError);
}

TEST_CASE("dual mesh control volume areas") {
    SUBCASE("n = 2 interior node") {
        const auto m = build_uniform_triangulation(2);
        const auto d = build_dual_mesh(m);
        CHECK(d.control_volumes[4].area == doctest::Approx(0.25).epsilon(1e-14));
        // six incident triangles of area 1/8
        CHECK(d.control_volumes[4].segments.size() == 12);
    }
    for (std::size_t n : {1u, 2u, 3u, 5u, 8u}) {
        const auto d = build_dual_mesh(build_uniform_triangulation(n));
        CHECK(std::abs(d.total_area() - 1.0) < 1e-12);
    }
    SUBCASE("single triangle") {
        const auto m = make_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}, {true, true, true});
        const auto d = build_dual_mesh(m);
        // P-M-Q-M' for P = (0,0): shoelace of (0,0),(1/2,0),(1/3,1/3),(0,1/2)
        const double quad = 0.5 * ((0.5 * (1.0 / 3.0) - 0.0) + ((1.0 / 3.0) * 0.5 - 0.0));
        CHECK(quad == doctest::Approx(1.0 / 6.0));
        for (std::size_t l = 0; l < 3; ++l) {
            CHECK(d.vertex_shares[0][l] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
            CHECK(d.control_volumes[l].area == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("dual mesh rejects degenerate triangles by index") {
    PrimalMesh m;
    m.nodes = {{0, 0}, {1, 0}, {0, 1}, {2, 0}};
    m.triangles = {{0, 1, 2}, {0, 1, 3}};
    m.boundary = {true, true, true, true};
    try {
        build_dual_mesh(m);
        FAIL("expected MeshError");
    } catch (const MeshError& e) {
        CHECK(std::string(e.what()).find("triangle 1") != std::string::npos);
    }
}

TEST_CASE("barycentric partition on random triangles") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int tested = 0;
    while (tested < 300) {
        const Point2 a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
        if (std::abs(signed_area(a, b, c)) < 1e-3)
            continue;
        const auto m = make_mesh({a, b, c}, {{0, 1, 2}}, {true, true, true});
        const auto d = build_dual_mesh(m);
        const double area = m.area(0);
        double sum = 0.0;
        for (double s : d.vertex_shares[0]) {
            CHECK(std::abs(s - area / 3.0) <= 1e-12 * area);
            sum += s;
        }
        CHECK(std::abs(sum - area) <= 1e-12 * area);
        ++tested;
    }
}

TEST_CASE("control volume segment geometry") {
    // Perturbed mesh so segments are not axis aligned.
    auto m = build_uniform_triangulation(6);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.05, 0.05);
    for (std::size_t i = 0; i < m.num_nodes(); ++i)
        if (!m.boundary[i])
            m.nodes[i] = m.nodes[i] + Point2{u(rng), u(rng)};
    m = make_mesh(m.nodes, m.triangles, m.boundary);
    const auto d = build_dual_mesh(m);

    for (std::size_t p = 0; p < m.num_nodes(); ++p) {
        const auto& cv = d.control_volumes[p];
        for (const auto& seg : cv.segments) {
            CHECK(seg.owner_node == p);
            const auto verts = m.vertices(seg.triangle);
            for (Point2 e : {seg.edge_midpoint, seg.barycenter})
                for (double l : barycentric(verts, e)) {
                    CHECK(l >= -1e-14);
                    CHECK(l <= 1.0 + 1e-14);
                }
            CHECK(std::abs(norm(seg.outward_normal) - 1.0) < 1e-14);
            const Point2 tangent = seg.head() - seg.tail();
            CHECK(std::abs(dot(seg.outward_normal, tangent)) < 1e-14);
            CHECK(std::abs(norm(tangent) - seg.length) < 1e-15);

            // Centroid of the owner's piece P, M, Q, M' of this triangle.
            const auto& tri = m.triangles[seg.triangle];
            const std::size_t l = static_cast<std::size_t>(std::find(tri.begin(), tri.end(), p) - tri.begin());
            const Point2 piece_mid = 0.25 * (verts[l] + midpoint(verts[l], verts[(l + 1) % 3]) +
                                             (1.0 / 3.0) * (verts[0] + verts[1] + verts[2]) +
                                             midpoint(verts[l], verts[(l + 2) % 3]));
            CHECK(dot(seg.outward_normal, midpoint(seg.tail(), seg.head()) - piece_mid) > 0.0);
        }
    }
}

TEST_CASE("interior control volumes are closed polygons") {
    auto m = build_uniform_triangulation(5);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-0.04, 0.04);
    for (std::size_t i = 0; i < m.num_nodes(); ++i)
        if (!m.boundary[i])
            m.nodes[i] = m.nodes[i] + Point2{u(rng), u(rng)};
    m = make_mesh(m.nodes, m.triangles, m.boundary);
    const auto d = build_dual_mesh(m);

    for (std::size_t p = 0; p < m.num_nodes(); ++p) {
        if (m.boundary[p])
            continue;
        const auto& segs = d.control_volumes[p].segments;
        // Every head is the tail of exactly one other segment.
        for (const auto& s : segs) {
            const auto matches = std::count_if(segs.begin(), segs.end(), [&](const ControlVolumeSegment& o) {
                return norm(o.tail() - s.head()) < 1e-14;
            });
            CHECK(matches == 1);
        }
        double area = 0.0;
        for (const auto& s : segs)
            area += 0.5 * cross(s.tail(), s.head());
        CHECK(std::abs(area - d.control_volumes[p].area) <= 1e-12 * d.control_volumes[p].area);
    }
}

TEST_CASE("quasi-uniformity report") {
    SUBCASE("n = 4 with cell width") {
        const auto m = build_uniform_triangulation(4);
        const auto r = quasi_uniformity_report(build_dual_mesh(m), m, 0.25);
        REQUIRE(r.interior_volume_ratio);
        CHECK(r.interior_volume_ratio->count == 9);
        CHECK(r.interior_volume_ratio->min == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.interior_volume_ratio->max == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.triangle_area_ratio.min == doctest::Approx(0.5));
    }
    SUBCASE("n = 2") {
        const auto m = build_uniform_triangulation(2);
        const auto r = quasi_uniformity_report(build_dual_mesh(m), m, 0.5);
        REQUIRE(r.interior_volume_ratio);
        CHECK(r.interior_volume_ratio->min == doctest::Approx(1.0));
    }
    SUBCASE("default reference length is the diameter") {
        const auto m = build_uniform_triangulation(4);
        const auto r = quasi_uniformity_report(build_dual_mesh(m), m);
        CHECK(r.h_ref == doctest::Approx(std::sqrt(2.0) / 4.0));
        CHECK(r.interior_volume_ratio->max == doctest::Approx(0.5));
    }
    SUBCASE("no interior nodes") {
        const auto m = build_uniform_triangulation(1);
        const auto r = quasi_uniformity_report(build_dual_mesh(m), m);
        CHECK_FALSE(r.interior_volume_ratio);
        CHECK(r.triangle_area_ratio.count == 2);
    }
}

TEST_CASE("mesh file round trip") {
    const auto m = build_uniform_triangulation(3);
    std::stringstream ss;
    write_mesh(ss, m);
    const auto r = read_mesh(ss);
    CHECK(r.nodes == m.nodes);
    CHECK(r.triangles == m.triangles);
    CHECK(r.boundary == m.boundary);
    CHECK(r.h == m.h);
}

TEST_CASE("mesh file describes a non-square polygon") {
    // Right triangle domain split into four congruent triangles.
    std::istringstream in(
        "nodes 6\n0 0\n1 0\n2 0\n0 1\n1 1\n0 2\n"
        "triangles 4\n0 1 3\n1 2 4\n1 4 3\n3 4 5\n"
        "boundary\n0 1 2\n3 4 5\n");
    const auto m = read_mesh(in);
    CHECK(m.num_interior_nodes() == 0);
    const auto d = build_dual_mesh(m);
    CHECK(d.total_area() == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("mesh file errors carry line numbers") {
    auto fails_with = [](const std::string& text, const std::string& needle) {
        std::istringstream in(text);
        try {
            read_mesh(in);
        } catch (const MeshError& e) {
            return std::string(e.what()).find(needle) != std::string::npos;
        }
        return false;
    };
    CHECK(fails_with("vertices 3\n", "line 1"));
    CHECK(fails_with("nodes 3\n0 0\n1 0x\n0 1\n", "line 3"));
    CHECK(fails_with("nodes 3\n0 0\n1 0\n0 1\ntriangles 1\n0 1 7\nboundary\n", "line 6"));
    CHECK(fails_with("nodes 3\n0 0\n1 0\n0 1\ntriangles 1\n0 1 2\n", "expected 'boundary'"));
    CHECK(fails_with("nodes 3\n0 0\n1 0\n0 1\ntriangles 1\n0 1\nboundary\n", "line 6"));
    CHECK(fails_with("nodes 2\n0 0\n", "end of input"));
}
