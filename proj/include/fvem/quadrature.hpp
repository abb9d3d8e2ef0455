#pragma once

#include "fvem/geometry.hpp"
#include "fvem/mesh.hpp"

#include <array>
#include <cstddef>
#include <functional>

namespace fvem {

/// Uniform time levels t_n = n k, n = 0..num_steps.
struct TimeGrid {
    double k = 0.0;
    std::size_t num_steps = 0;

    TimeGrid() = default;
    TimeGrid(double step, std::size_t steps);

    /// Grid reaching T exactly; throws if T is not a whole multiple of k to 1e-12.
    static TimeGrid covering(double final_time, double step);

    double final_time() const { return k * static_cast<double>(num_steps); }
    double time(std::size_t n) const { return k * static_cast<double>(n); }
    double midpoint(std::size_t j) const { return k * (static_cast<double>(j) + 0.5); }
};

/// Vertex rule on a triangle, exact on P1.
template <class F>
double vertex_rule(const std::array<Point2, 3>& p, F&& phi) {
    const double area = signed_area(p[0], p[1], p[2]);
    return area / 3.0 * (phi(p[0]) + phi(p[1]) + phi(p[2]));
}

/// Endpoint average on a control-volume segment, exact on linears.
template <class F>
auto segment_rule(const ControlVolumeSegment& seg, F&& v) {
    return (0.5 * seg.length) * (v(seg.edge_midpoint) + v(seg.barycenter));
}

/// Two-point Gauss on a segment, exact on cubics.
template <class F>
auto segment_gauss2(const ControlVolumeSegment& seg, F&& v) {
    constexpr double offset = 0.28867513459481288225; // 1/(2 sqrt 3)
    const Point2 mid = midpoint(seg.edge_midpoint, seg.barycenter);
    const Point2 dir = seg.barycenter - seg.edge_midpoint;
    return (0.5 * seg.length) * (v(mid - offset * dir) + v(mid + offset * dir));
}

/// Composite midpoint rule k Σ_{j<n} g(t_{j+1/2}) for the memory integral over [0, t_n].
double memory_sum(const TimeGrid& grid, std::size_t n, const std::function<double(double)>& g);

} // namespace fvem
