#include "fvem/errors.hpp"

#include "fvem/error.hpp"

#include <algorithm>
#include <cmath>

namespace fvem {

double nodal_max_error(const P1Space& space, const NodalField& field, const ExactSolution& exact,
                       double t) {
    if (field.size() != space.dof_count())
        throw InvalidArgument("field length does not match dof count");
    double err = 0.0;
    for (std::size_t i = 0; i < field.size(); ++i) {
        const Point2 p = space.mesh().nodes[space.node_of(i)];
        err = std::max(err, std::abs(exact.value(p, t) - field.values[i]));
    }
    return err;
}

double l2_error(const P1Space& space, const NodalField& field, const ExactSolution& exact, double t) {
    const PrimalMesh& mesh = space.mesh();
    const auto nodal = expand(space, field);
    double sum = 0.0;
    for (std::size_t tr = 0; tr < mesh.num_triangles(); ++tr) {
        const auto& tri = mesh.triangles[tr];
        const auto p = mesh.vertices(tr);
        double local = 0.0;
        for (std::size_t l = 0; l < 3; ++l) {
            const std::size_t m = (l + 1) % 3;
            const double uh = 0.5 * (nodal[tri[l]] + nodal[tri[m]]);
            const double e = exact.value(midpoint(p[l], p[m]), t) - uh;
            local += e * e;
        }
        sum += mesh.area(tr) / 3.0 * local;
    }
    return std::sqrt(sum);
}

double h1_seminorm_error(const P1Space& space, const NodalField& field, const ExactSolution& exact,
                         double t) {
    if (!exact.gradient)
        throw InvalidArgument("H1 error needs the exact gradient");
    const PrimalMesh& mesh = space.mesh();
    const auto nodal = expand(space, field);
    double sum = 0.0;
    for (std::size_t tr = 0; tr < mesh.num_triangles(); ++tr) {
        const auto& tri = mesh.triangles[tr];
        const auto p = mesh.vertices(tr);
        const auto grads = basis_gradients(p);
        Point2 gh{};
        for (std::size_t l = 0; l < 3; ++l)
            gh = gh + nodal[tri[l]] * grads[l];
        double local = 0.0;
        for (std::size_t l = 0; l < 3; ++l) {
            const Point2 e = exact.gradient(midpoint(p[l], p[(l + 1) % 3]), t) - gh;
            local += dot(e, e);
        }
        sum += mesh.area(tr) / 3.0 * local;
    }
    return std::sqrt(sum);
}

double h1_error(const P1Space& space, const NodalField& field, const ExactSolution& exact, double t) {
    return std::hypot(l2_error(space, field, exact, t), h1_seminorm_error(space, field, exact, t));
}

std::vector<std::optional<double>> eoc(std::span<const double> errors, std::span<const double> hs) {
    if (errors.size() != hs.size())
        throw InvalidArgument("eoc needs as many mesh sizes as errors");
    std::vector<std::optional<double>> rates;
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
        if (!(errors[i] > 0.0) || !(errors[i + 1] > 0.0) || !(hs[i] > 0.0) || !(hs[i + 1] > 0.0) ||
            hs[i] == hs[i + 1]) {
            rates.emplace_back();
            continue;
        }
        rates.emplace_back(std::log(errors[i] / errors[i + 1]) / std::log(hs[i] / hs[i + 1]));
    }
    return rates;
}

double loglog_slope(std::span<const double> hs, std::span<const double> errors) {
    if (hs.size() != errors.size() || hs.size() < 2)
        throw InvalidArgument("slope fit needs at least two matching points");
    const double n = static_cast<double>(hs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        if (!(hs[i] > 0.0) || !(errors[i] > 0.0))
            throw InvalidArgument("slope fit needs positive values");
        const double x = std::log(hs[i]);
        const double y = std::log(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void ConvergenceReport::compute_rates() {
    auto column = [this](std::optional<double> ConvergenceLevel::*member) {
        std::vector<double> errs, hs;
        for (const auto& level : levels) {
            errs.push_back((level.*member).value_or(0.0));
            hs.push_back(level.h);
        }
        auto rates = eoc(errs, hs);
        for (std::size_t i = 0; i + 1 < levels.size(); ++i)
            if (!(levels[i].*member) || !(levels[i + 1].*member))
                rates[i].reset();
        return rates;
    };
    rate_max = column(&ConvergenceLevel::err_max);
    rate_l2 = column(&ConvergenceLevel::err_l2);
    rate_h1 = column(&ConvergenceLevel::err_h1);
}

} // namespace fvem
