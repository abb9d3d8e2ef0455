#pragma once

#include "fvem/geometry.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fvem {

/// 2x2 coefficient field x -> A(x).
class CoefficientField {
public:
    using Evaluator = std::function<Mat2(Point2)>;

    static CoefficientField constant(const Mat2& value);
    static CoefficientField varying(Evaluator eval);

    Mat2 operator()(Point2 x) const { return constant_ ? *constant_ : eval_(x); }
    bool is_constant() const { return constant_.has_value(); }

    /// c * A.
    CoefficientField scaled(double c) const;

private:
    std::optional<Mat2> constant_;
    Evaluator eval_;
};

/// Memory kernel B(x, t, s).
///
/// Separable kernels factor as beta(t - s) * B0(x); those with
/// beta(tau) = exp(rate * tau) admit a one-vector recursive history.
class MemoryKernel {
public:
    struct None {};
    struct Separable {
        std::function<double(double)> beta;
        std::optional<double> exp_rate;
        CoefficientField base;
    };
    struct General {
        std::function<Mat2(Point2, double, double)> eval;
    };

    MemoryKernel() = default;

    static MemoryKernel none();
    static MemoryKernel exponential(double rate, CoefficientField base);
    static MemoryKernel separable(std::function<double(double)> beta, CoefficientField base);
    static MemoryKernel general(std::function<Mat2(Point2, double, double)> eval);

    Mat2 operator()(Point2 x, double t, double s) const;

    bool is_none() const { return std::holds_alternative<None>(kind_); }
    const Separable* separable_part() const { return std::get_if<Separable>(&kind_); }
    const General* general_part() const { return std::get_if<General>(&kind_); }

private:
    std::variant<None, Separable, General> kind_;
};

struct ExactSolution {
    std::function<double(Point2, double)> value;
    std::function<Point2(Point2, double)> gradient; ///< may be empty
};

/// u_tt - div(A grad u + ∫_0^t B grad u(s) ds) = f, u = 0 on the boundary.
struct ProblemSpec {
    std::string name;
    Rectangle domain = Rectangle::unit_square();
    CoefficientField coeff = CoefficientField::constant(Mat2::identity());
    MemoryKernel kernel;
    std::function<double(Point2, double)> forcing;
    std::function<double(Point2)> u0;
    std::function<double(Point2)> u1;
    std::optional<ExactSolution> exact;
    double final_time = 1.0;
};

/// A = I, B = e^{t-s} I, u = e^t sin(pi x) sin(pi y).
ProblemSpec example1();

/// A = (1 + x^2) I, B = e^{t-s} A, u = e^t x y (x - 1)(y - 1).
ProblemSpec example2();

/// Memory-free, unforced wave: u = cos(sqrt(2) pi t) sin(pi x) sin(pi y).
ProblemSpec free_wave();

std::vector<std::string> available_problems();

/// Throws ConfigError listing the available names.
ProblemSpec problem_by_name(const std::string& name);

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> failures;
};

/// Spot-checks initial data against the exact solution and samples A for
/// symmetric positive definiteness.
ValidationReport validate(const ProblemSpec& spec);

} // namespace fvem
