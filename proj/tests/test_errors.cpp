#include "fvem/error.hpp"
#include "fvem/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace fvem;
using std::numbers::pi;

namespace {

// Same triangulation as build_uniform_triangulation, but every node carries a dof.
PrimalMesh all_interior(std::size_t n) {
    const auto m = build_uniform_triangulation(n);
    return make_mesh(m.nodes, m.triangles, std::vector<bool>(m.num_nodes(), false));
}

const ExactSolution affine{
    [](Point2 p, double t) { return 1.0 + 2.0 * p.x - 3.0 * p.y + t; },
    [](Point2, double) { return Point2{2.0, -3.0}; },
};

const ExactSolution sine{
    [](Point2 p, double) { return std::sin(pi * p.x) * std::sin(pi * p.y); },
    [](Point2 p, double) {
        return Point2{pi * std::cos(pi * p.x) * std::sin(pi * p.y), pi * std::sin(pi * p.x) * std::cos(pi * p.y)};
    },
};

NodalField interpolant(const P1Space& space, const ExactSolution& u, double t) {
    return interpolate(space, [&](Point2 p) { return u.value(p, t); });
}

} // namespace

TEST_CASE("affine functions are reproduced exactly") {
    const auto mesh = all_interior(5);
    const P1Space space(mesh);
    REQUIRE(space.dof_count() == mesh.num_nodes());
    const auto field = interpolant(space, affine, 0.5);
    CHECK(nodal_max_error(space, field, affine, 0.5) < 1e-13);
    CHECK(l2_error(space, field, affine, 0.5) < 1e-13);
    CHECK(h1_seminorm_error(space, field, affine, 0.5) < 1e-13);
    CHECK(h1_error(space, field, affine, 0.5) < 1e-13);
}

TEST_CASE("nodal max error") {
    const auto mesh = build_uniform_triangulation(8);
    const P1Space space(mesh);
    auto field = interpolant(space, sine, 0.0);
    CHECK(nodal_max_error(space, field, sine, 0.0) == 0.0);
    field.values[17] += 1e-3;
    CHECK(nodal_max_error(space, field, sine, 0.0) == doctest::Approx(1e-3).epsilon(1e-9));

    const auto spec = example1();
    CHECK(nodal_max_error(space, interpolate(space, spec.u0), *spec.exact, 0.0) == 0.0);
}

TEST_CASE("norms of the zero field") {
    const auto mesh = build_uniform_triangulation(32);
    const P1Space space(mesh);
    const NodalField zero{std::vector<double>(space.dof_count(), 0.0)};
    const double l2 = l2_error(space, zero, sine, 0.0);
    const double semi = h1_seminorm_error(space, zero, sine, 0.0);
    CHECK(std::abs(l2 - 0.5) < 0.005);
    CHECK(std::abs(semi - pi / std::sqrt(2.0)) < 0.01 * pi / std::sqrt(2.0));
    CHECK(h1_error(space, zero, sine, 0.0) == doctest::Approx(std::hypot(l2, semi)));
    const double full = std::sqrt(0.25 + pi * pi / 2.0);
    CHECK(std::abs(h1_error(space, zero, sine, 0.0) - full) < 0.01 * full);
}

TEST_CASE("seminorm error needs a gradient") {
    const auto mesh = build_uniform_triangulation(4);
    const P1Space space(mesh);
    ExactSolution no_grad{sine.value, {}};
    const auto field = interpolant(space, sine, 0.0);
    CHECK_THROWS_AS(h1_seminorm_error(space, field, no_grad, 0.0), InvalidArgument);
}

TEST_CASE("eoc") {
    const std::vector<double> hs{1.0 / 8.0, 1.0 / 16.0};
    auto r = eoc(std::vector<double>{0.04, 0.01}, hs);
    REQUIRE(r.size() == 1);
    CHECK(*r[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(*eoc(std::vector<double>{0.1, 0.05}, hs)[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(*eoc(std::vector<double>{0.3, 0.3}, hs)[0] == 0.0);
    CHECK_FALSE(eoc(std::vector<double>{0.0, 0.3}, hs)[0].has_value());
    CHECK(eoc(std::vector<double>{0.1}, std::vector<double>{0.5}).empty());

    const std::vector<double> h4{0.5, 0.25, 0.125, 0.0625};
    std::vector<double> e4;
    for (double h : h4)
        e4.push_back(3.0 * h * h);
    CHECK(loglog_slope(h4, e4) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("interpolation error is second order in L2") {
    std::vector<double> hs, errs;
    for (std::size_t n : {8u, 16u, 32u}) {
        const auto mesh = build_uniform_triangulation(n);
        const P1Space space(mesh);
        ExactSolution g{[](Point2 p, double) { return std::exp(p.x) * std::sin(pi * p.y) * p.x * (1.0 - p.x); },
                        {}};
        errs.push_back(l2_error(space, interpolant(space, g, 0.0), g, 0.0));
        hs.push_back(mesh.h);
    }
    for (const auto& r : eoc(errs, hs))
        CHECK(*r >= 1.9);
    CHECK(loglog_slope(hs, errs) >= 1.9);
}

TEST_CASE("L2 error never exceeds the full H1 error") {
    for (std::size_t n : {3u, 7u, 12u}) {
        const auto mesh = build_uniform_triangulation(n);
        const P1Space space(mesh);
        for (double shift : {0.0, 0.05, -0.3}) {
            auto field = interpolant(space, sine, 0.0);
            for (std::size_t i = 0; i < field.size(); i += 2)
                field.values[i] += shift;
            CHECK(l2_error(space, field, sine, 0.0) <= h1_error(space, field, sine, 0.0));
        }
    }
}

TEST_CASE("convergence report rates") {
    ConvergenceReport report;
    for (std::size_t n : {4u, 8u, 16u}) {
        const double h = 1.0 / static_cast<double>(n);
        report.levels.push_back({n, h, h / 4.0, h * h, h * h, h, 0.0});
    }
    report.compute_rates();
    REQUIRE(report.rate_max.size() == 2);
    CHECK(*report.rate_max[1] == doctest::Approx(2.0));
    CHECK(*report.rate_h1[0] == doctest::Approx(1.0));

    report.levels[1].err_l2.reset();
    report.compute_rates();
    CHECK_FALSE(report.rate_l2[0].has_value());
    CHECK_FALSE(report.rate_l2[1].has_value());
}
