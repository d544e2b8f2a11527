#pragma once

#include "bcdprox/minimize.hpp"
#include "bcdprox/multistep.hpp"

namespace bcdprox {

struct ShootingResult {
    Vector theta;
    Vector initial_state;
    TimeSeries predicted; ///< forward trajectory from (theta, initial_state)
    double objective = 0.0;
    int iterations = 0;
    bool failed = false; ///< no finite descent step existed from the start
};

/// The shooting objective over z = (theta; x1): value is
/// sum_i ||y_i - xhat_i(theta, x1)||^2 with xhat the order-m forward
/// prediction; the gradient is propagated analytically through the
/// multistep recursion. Diverged simulations evaluate to +infinity.
ObjectiveFn make_shooting_objective(const OdeModel &model, const TimeSeries &observations,
                                    int order);

/// Least-squares trajectory fit: minimize the shooting objective over the
/// parameters and the initial state jointly, starting from (theta0, y_1).
ShootingResult shooting_lsq(const OdeModel &model, const TimeSeries &observations,
                            const Vector &theta0, int order = 3,
                            const MinimizerConfig &config = {});

} // namespace bcdprox
