#pragma once

#include "bcdprox/grid.hpp"

namespace bcdprox {

/// Frobenius norm of X_true - X_hat. Returns +infinity when the prediction
/// carries non-finite entries (diverged runs).
double prediction_error(const TimeSeries &truth, const TimeSeries &predicted);

/// Componentwise |theta_l - theta*_l|.
Vector parameter_error(const Vector &theta_true, const Vector &theta_est);

/// Per-time mean Euclidean error (1/T) sum_i ||x_i - x*_i||; +infinity when
/// the estimate carries non-finite entries.
double estimation_error(const TimeSeries &truth, const TimeSeries &estimated);

} // namespace bcdprox
