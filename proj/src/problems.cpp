#include "fvem/problems.hpp"

#include "fvem/error.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace fvem {

CoefficientField CoefficientField::constant(const Mat2& value) {
    CoefficientField field;
    field.constant_ = value;
    return field;
}

CoefficientField CoefficientField::varying(Evaluator eval) {
    CoefficientField field;
    field.eval_ = std::move(eval);
    return field;
}

CoefficientField CoefficientField::scaled(double c) const {
    if (constant_)
        return constant(c * *constant_);
    return varying([eval = eval_, c](Point2 x) { return c * eval(x); });
}

MemoryKernel MemoryKernel::none() { return {}; }

MemoryKernel MemoryKernel::exponential(double rate, CoefficientField base) {
    MemoryKernel k;
    k.kind_ = Separable{[rate](double tau) { return std::exp(rate * tau); }, rate, std::move(base)};
    return k;
}

MemoryKernel MemoryKernel::separable(std::function<double(double)> beta, CoefficientField base) {
    MemoryKernel k;
    k.kind_ = Separable{std::move(beta), std::nullopt, std::move(base)};
    return k;
}

MemoryKernel MemoryKernel::general(std::function<Mat2(Point2, double, double)> eval) {
    MemoryKernel k;
    k.kind_ = General{std::move(eval)};
    return k;
}

Mat2 MemoryKernel::operator()(Point2 x, double t, double s) const {
    if (const auto* sep = separable_part())
        return sep->beta(t - s) * sep->base(x);
    if (const auto* gen = general_part())
        return gen->eval(x, t, s);
    return {};
}

namespace {

using std::numbers::pi;

double sinsin(Point2 p) { return std::sin(pi * p.x) * std::sin(pi * p.y); }

double bubble(Point2 p) { return p.x * p.y * (p.x - 1.0) * (p.y - 1.0); }

} // namespace

ProblemSpec example1() {
    ProblemSpec spec;
    spec.name = "example1";
    spec.coeff = CoefficientField::constant(Mat2::identity());
    spec.kernel = MemoryKernel::exponential(1.0, CoefficientField::constant(Mat2::identity()));
    spec.u0 = sinsin;
    spec.u1 = sinsin;
    // u_tt = e^t S, -ΔS = 2π² S, ∫_0^t e^{t-s} e^s ds = t e^t.
    spec.forcing = [](Point2 p, double t) {
        return (1.0 + 2.0 * pi * pi * (1.0 + t)) * std::exp(t) * sinsin(p);
    };
    spec.exact = ExactSolution{
        [](Point2 p, double t) { return std::exp(t) * sinsin(p); },
        [](Point2 p, double t) {
            const double e = std::exp(t);
            return Point2{e * pi * std::cos(pi * p.x) * std::sin(pi * p.y),
                          e * pi * std::sin(pi * p.x) * std::cos(pi * p.y)};
        }};
    return spec;
}

ProblemSpec example2() {
    ProblemSpec spec;
    spec.name = "example2";
    auto a = CoefficientField::varying([](Point2 p) {
        const double d = 1.0 + p.x * p.x;
        return Mat2::diagonal(d, d);
    });
    spec.coeff = a;
    spec.kernel = MemoryKernel::exponential(1.0, a);
    spec.u0 = bubble;
    spec.u1 = bubble;
    // L S = div((1 + x²) ∇S) = (1 + x²) ΔS + 2x ∂x S; f = e^t (S - (1 + t) L S).
    spec.forcing = [](Point2 p, double t) {
        const double x = p.x, y = p.y;
        const double lap = 2.0 * y * (y - 1.0) + 2.0 * x * (x - 1.0);
        const double sx = (2.0 * x - 1.0) * y * (y - 1.0);
        const double ls = (1.0 + x * x) * lap + 2.0 * x * sx;
        return std::exp(t) * (bubble(p) - (1.0 + t) * ls);
    };
    spec.exact = ExactSolution{
        [](Point2 p, double t) { return std::exp(t) * bubble(p); },
        [](Point2 p, double t) {
            const double e = std::exp(t);
            return Point2{e * (2.0 * p.x - 1.0) * p.y * (p.y - 1.0),
                          e * (2.0 * p.y - 1.0) * p.x * (p.x - 1.0)};
        }};
    return spec;
}

ProblemSpec free_wave() {
    ProblemSpec spec;
    spec.name = "wave";
    spec.coeff = CoefficientField::constant(Mat2::identity());
    spec.kernel = MemoryKernel::none();
    spec.u0 = sinsin;
    spec.u1 = [](Point2) { return 0.0; };
    spec.forcing = [](Point2, double) { return 0.0; };
    const double omega = std::numbers::sqrt2 * pi;
    spec.exact = ExactSolution{
        [omega](Point2 p, double t) { return std::cos(omega * t) * sinsin(p); },
        [omega](Point2 p, double t) {
            const double c = std::cos(omega * t);
            return Point2{c * pi * std::cos(pi * p.x) * std::sin(pi * p.y),
                          c * pi * std::sin(pi * p.x) * std::cos(pi * p.y)};
        }};
    return spec;
}

std::vector<std::string> available_problems() { return {"example1", "example2", "wave"}; }

ProblemSpec problem_by_name(const std::string& name) {
    if (name == "example1")
        return example1();
    if (name == "example2")
        return example2();
    if (name == "wave")
        return free_wave();
    std::string msg = "unknown problem '" + name + "'; available:";
    for (const auto& n : available_problems())
        msg += " " + n;
    throw ConfigError(msg);
}

namespace {

/// Sixth-order central difference of d/dt at t.
double time_derivative(const std::function<double(Point2, double)>& u, Point2 p, double t) {
    constexpr double dt = 1e-3;
    return (-u(p, t - 3 * dt) + 9 * u(p, t - 2 * dt) - 45 * u(p, t - dt) + 45 * u(p, t + dt) -
            9 * u(p, t + 2 * dt) + u(p, t + 3 * dt)) /
           (60.0 * dt);
}

std::string at(Point2 p) {
    std::ostringstream s;
    s << "(" << p.x << ", " << p.y << ")";
    return s.str();
}

} // namespace

ValidationReport validate(const ProblemSpec& spec) {
    ValidationReport report;
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> ux(spec.domain.lower.x, spec.domain.upper.x);
    std::uniform_real_distribution<double> uy(spec.domain.lower.y, spec.domain.upper.y);

    std::vector<Point2> samples;
    for (int i = 0; i < 20; ++i)
        samples.push_back({ux(rng), uy(rng)});
    for (int j = 0; j <= 10; ++j)
        for (int i = 0; i <= 10; ++i)
            samples.push_back({spec.domain.lower.x + spec.domain.width() * i / 10.0,
                               spec.domain.lower.y + spec.domain.height() * j / 10.0});

    if (spec.exact) {
        constexpr double tol = 1e-10;
        double worst0 = 0.0, worst1 = 0.0;
        Point2 at0{}, at1{};
        for (std::size_t i = 0; i < 20; ++i) {
            const Point2 p = samples[i];
            const double d0 = std::abs(spec.u0(p) - spec.exact->value(p, 0.0));
            const double d1 = std::abs(spec.u1(p) - time_derivative(spec.exact->value, p, 0.0));
            if (!(d0 <= worst0)) {
                worst0 = d0;
                at0 = p;
            }
            if (!(d1 <= worst1)) {
                worst1 = d1;
                at1 = p;
            }
        }
        if (!(worst0 <= tol)) {
            report.ok = false;
            std::ostringstream m;
            m << "u0 differs from exact(., 0) by " << worst0 << " at " << at(at0);
            report.failures.push_back(m.str());
        }
        if (!(worst1 <= tol)) {
            report.ok = false;
            std::ostringstream m;
            m << "u1 differs from d/dt exact(., 0) by " << worst1 << " at " << at(at1);
            report.failures.push_back(m.str());
        }
    }

    for (const Point2 p : samples) {
        if (!is_spd(spec.coeff(p))) {
            report.ok = false;
            report.failures.push_back("coefficient A is not symmetric positive definite at " + at(p));
            break;
        }
    }
    return report;
}

} // namespace fvem
