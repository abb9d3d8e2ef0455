#include "fvem/error.hpp"
#include "fvem/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fvem;

TEST_CASE("vertex rule") {
    const std::array<Point2, 3> ref{Point2{0, 0}, Point2{1, 0}, Point2{0, 1}};
    CHECK(vertex_rule(ref, [](Point2) { return 1.0; }) == doctest::Approx(0.5));

    // ∫ (2 + 3x - y) over the reference triangle = 1 + 1/2 - 1/6
    CHECK(std::abs(vertex_rule(ref, [](Point2 p) { return 2.0 + 3.0 * p.x - p.y; }) - 4.0 / 3.0) < 1e-14);

    const double rule = vertex_rule(ref, [](Point2 p) { return p.x * p.x; });
    CHECK(rule == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(rule - 1.0 / 12.0 == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
}

TEST_CASE("segment rule") {
    ControlVolumeSegment seg;
    seg.edge_midpoint = {0.0, 0.0};
    seg.barycenter = {0.6, 0.8};
    seg.length = 1.0;

    CHECK(segment_rule(seg, [](Point2) { return 1.0; }) == doctest::Approx(1.0));
    // Affine in arclength: v = 2 + 5 s, ∫_0^1 = 4.5
    auto affine = [](Point2 p) { return 2.0 + 5.0 * (0.6 * p.x + 0.8 * p.y); };
    CHECK(std::abs(segment_rule(seg, affine) - 4.5) < 1e-14);
    // v = s²: rule 1/2, exact 1/3
    auto sq = [](Point2 p) {
        const double s = 0.6 * p.x + 0.8 * p.y;
        return s * s;
    };
    CHECK(segment_rule(seg, sq) == doctest::Approx(0.5));
    CHECK(segment_rule(seg, sq) - 1.0 / 3.0 == doctest::Approx(1.0 / 6.0));
    // Gauss is exact on cubics: ∫_0^1 s³ = 1/4
    auto cube = [](Point2 p) {
        const double s = 0.6 * p.x + 0.8 * p.y;
        return s * s * s;
    };
    CHECK(segment_gauss2(seg, cube) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("rules reproduce constants on random geometry") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
        std::array<Point2, 3> p{Point2{u(rng), u(rng)}, Point2{u(rng), u(rng)}, Point2{u(rng), u(rng)}};
        const double area = signed_area(p[0], p[1], p[2]);
        CHECK(vertex_rule(p, [](Point2) { return 2.5; }) == doctest::Approx(2.5 * area).epsilon(1e-13));

        ControlVolumeSegment seg;
        seg.edge_midpoint = p[0];
        seg.barycenter = p[1];
        seg.length = norm(p[1] - p[0]);
        CHECK(segment_rule(seg, [](Point2) { return -1.5; }) == doctest::Approx(-1.5 * seg.length).epsilon(1e-14));
    }
}

TEST_CASE("time grid") {
    const auto g = TimeGrid::covering(1.0, 0.25);
    CHECK(g.num_steps == 4);
    CHECK(g.time(2) == 0.5);
    CHECK(g.midpoint(0) == 0.125);
    CHECK_THROWS_AS(TimeGrid::covering(1.0, 0.3), InvalidArgument);
    CHECK_THROWS_AS(TimeGrid(0.0, 3), InvalidArgument);
    CHECK(TimeGrid::covering(0.0, 0.1).num_steps == 0);
}

TEST_CASE("memory sum") {
    const TimeGrid g(0.25, 8);
    CHECK(memory_sum(g, 0, [](double) { return 1.0; }) == 0.0);
    CHECK(memory_sum(g, 4, [](double) { return 1.0; }) == 1.0);
    for (std::size_t n = 1; n <= 8; ++n) {
        const double t = g.time(n);
        CHECK(std::abs(memory_sum(g, n, [](double s) { return s; }) - t * t / 2.0) < 1e-15);
    }
    // Direct summation: 0.25 (0.125² + 0.375² + 0.625² + 0.875²)
    const double direct = 0.25 * (0.015625 + 0.140625 + 0.390625 + 0.765625);
    const double sq = memory_sum(g, 4, [](double s) { return s * s; });
    CHECK(sq == 0.328125);
    CHECK(sq == direct);
    CHECK(sq == 1.0 / 3.0 - 0.25 * 0.25 * 1.0 / 12.0);
    CHECK_THROWS_AS(memory_sum(g, 9, [](double) { return 1.0; }), InvalidArgument);
}

TEST_CASE("memory sum is second order") {
    auto g = [](double s) { return std::exp(s) * std::sin(3.0 * s); };
    // ∫_0^1 e^s sin 3s ds = [e^s (sin 3s - 3 cos 3s)] / 10
    const double exact = (std::exp(1.0) * (std::sin(3.0) - 3.0 * std::cos(3.0)) + 3.0) / 10.0;
    double prev = 0.0;
    for (std::size_t n : {8u, 16u, 32u, 64u}) {
        const TimeGrid grid(1.0 / static_cast<double>(n), n);
        const double defect = std::abs(memory_sum(grid, n, g) - exact);
        if (prev > 0.0) {
            const double slope = std::log2(prev / defect);
            CHECK(slope >= 1.9);
            CHECK(slope <= 2.1);
        }
        prev = defect;
    }
}
