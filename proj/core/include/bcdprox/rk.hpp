#pragma once

#include "bcdprox/model.hpp"

namespace bcdprox {

/// Fifth-order Runge-Kutta (Dormand-Prince weights) trajectory sampled at
/// the grid times. Each observation gap is covered by a fixed number of
/// equal substeps no longer than `max_substep`, so results are deterministic
/// and the local error per gap stays below ~1e-10 relative at the default.
/// Throws DivergedError when the trajectory blows up.
TimeSeries rk_integrate(const OdeModel &model, const Vector &theta, const Vector &x1,
                        const TimeGrid &grid, double max_substep = .0025);

} // namespace bcdprox
