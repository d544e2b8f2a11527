#include "bcdprox/grid.hpp"

#include <cmath>
#include <utility>

namespace bcdprox {

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
    if (times_.size() < 2) { throw ContractError("TimeGrid needs at least two sample times"); }
    gaps_.resize(times_.size() - 1);
    for (std::size_t i = 0; i + 1 < times_.size(); ++i) {
        const double gap = times_[i + 1] - times_[i];
        if (!(gap > 0.0)) { throw ContractError("TimeGrid times must be strictly increasing"); }
        gaps_[i] = gap;
    }
}

bool TimeGrid::is_uniform(double tol) const {
    const double first = gaps_.front();
    for (const double g : gaps_) {
        if (std::abs(g - first) > tol * std::max(1.0, std::abs(first))) { return false; }
    }
    return true;
}

TimeGrid uniform_grid(double t0, double t_end, double dt) {
    if (!(dt > 0.0) || !(t_end > t0)) { throw ContractError("uniform_grid: need dt > 0 and t_end > t0"); }
    const int count = static_cast<int>(std::floor((t_end - t0) / dt + 0.5)) + 1;
    return uniform_grid_count(t0, dt, count);
}

TimeGrid uniform_grid_count(double t0, double dt, int count) {
    if (count < 2 || !(dt > 0.0)) { throw ContractError("uniform_grid_count: need count >= 2 and dt > 0"); }
    std::vector<double> times(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) { times[static_cast<std::size_t>(i)] = t0 + dt * i; }
    return TimeGrid(std::move(times));
}

TimeSeries::TimeSeries(TimeGrid g, Matrix v) : grid(std::move(g)), values(std::move(v)) {
    if (values.cols() != grid.size()) {
        throw ContractError("TimeSeries: value count must equal grid length");
    }
}

} // namespace bcdprox
