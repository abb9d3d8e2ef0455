#pragma once

#include <cmath>

namespace fvem {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
    friend constexpr Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Point2 a, Point2 b) = default;
};

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }

/// z-component of the 3D cross product.
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }

inline double norm(Point2 a) { return std::hypot(a.x, a.y); }

constexpr Point2 midpoint(Point2 a, Point2 b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

/// Signed area, positive for counterclockwise vertex order.
constexpr double signed_area(Point2 a, Point2 b, Point2 c) { return 0.5 * cross(b - a, c - a); }

/// Row-major 2x2 real matrix.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Mat2 diagonal(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }

    friend constexpr Mat2 operator+(const Mat2& a, const Mat2& b) {
        return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
    }
    friend constexpr Mat2 operator*(double s, const Mat2& a) {
        return {s * a.a11, s * a.a12, s * a.a21, s * a.a22};
    }
    friend constexpr Point2 operator*(const Mat2& a, Point2 v) {
        return {a.a11 * v.x + a.a12 * v.y, a.a21 * v.x + a.a22 * v.y};
    }
    friend constexpr bool operator==(const Mat2& a, const Mat2& b) = default;

    constexpr double det() const { return a11 * a22 - a12 * a21; }
    bool is_finite() const {
        return std::isfinite(a11) && std::isfinite(a12) && std::isfinite(a21) && std::isfinite(a22);
    }
};

/// Symmetric and positive definite up to a relative symmetry tolerance.
inline bool is_spd(const Mat2& a, double sym_tol = 1e-12) {
    if (!a.is_finite())
        return false;
    const double scale = std::abs(a.a11) + std::abs(a.a22) + std::abs(a.a12) + std::abs(a.a21);
    if (std::abs(a.a12 - a.a21) > sym_tol * scale)
        return false;
    return a.a11 > 0.0 && a.det() > 0.0;
}

struct Rectangle {
    Point2 lower{0.0, 0.0};
    Point2 upper{1.0, 1.0};

    static constexpr Rectangle unit_square() { return {}; }
    constexpr double width() const { return upper.x - lower.x; }
    constexpr double height() const { return upper.y - lower.y; }
    constexpr double area() const { return width() * height(); }
};

} // namespace fvem
