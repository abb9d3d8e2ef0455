#include "fvem/quadrature.hpp"

#include "fvem/error.hpp"

#include <cmath>
#include <sstream>

namespace fvem {

TimeGrid::TimeGrid(double step, std::size_t steps) : k(step), num_steps(steps) {
    if (!(step > 0.0) || !std::isfinite(step))
        throw InvalidArgument("time step must be positive and finite");
}

TimeGrid TimeGrid::covering(double final_time, double step) {
    if (!(final_time >= 0.0) || !std::isfinite(final_time))
        throw InvalidArgument("final time must be non-negative and finite");
    if (!(step > 0.0))
        throw InvalidArgument("time step must be positive");
    const double steps = std::round(final_time / step);
    TimeGrid grid(step, static_cast<std::size_t>(steps));
    if (std::abs(grid.final_time() - final_time) > 1e-12) {
        std::ostringstream msg;
        msg << "time step " << step << " does not divide final time " << final_time;
        throw InvalidArgument(msg.str());
    }
    return grid;
}

double memory_sum(const TimeGrid& grid, std::size_t n, const std::function<double(double)>& g) {
    if (n > grid.num_steps)
        throw InvalidArgument("memory_sum step index beyond the time grid");
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        sum += g(grid.midpoint(j));
    return grid.k * sum;
}

} // namespace fvem
