#pragma once

#include "bcdprox/model.hpp"

namespace bcdprox {

/// Extended Kalman filter settings for the joint state-parameter recursion.
struct EkfConfig {
    double initial_state_covariance = 1000.0; ///< diagonal of the initial covariance
    double measurement_noise_variance = 0.1;  ///< diagonal of R
    double process_noise_variance = 1.0;      ///< diagonal of Q on the state block
    /// Small jitter on the parameter block of Q so the covariance of the
    /// quasi-static parameters never collapses completely.
    double parameter_jitter = 1e-8;
};

/// Mean and covariance of the joint vector (x; theta) at one time.
struct JointState {
    Vector mean;       ///< dimension d + p
    Matrix covariance; ///< (d+p) x (d+p), symmetric PSD
};

struct EkfResult {
    std::vector<JointState> steps; ///< filtered joint state after each update
    Vector theta;                  ///< parameter block of the final joint state
    TimeSeries states;             ///< filtered state sequence X*
};

/// Joint state-parameter filter: Euler process model on the state block,
/// constant dynamics on the parameter block, observation of the state block
/// only. Online: estimates at time i depend only on observations up to i.
/// Throws NumericError if a covariance repair exceeds 1e-6 of the trace.
EkfResult ekf_run(const OdeModel &model, const TimeSeries &observations, const Vector &theta0,
                  const EkfConfig &config = {});

} // namespace bcdprox
