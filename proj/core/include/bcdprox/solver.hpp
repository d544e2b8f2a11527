#pragma once

#include <limits>

#include "bcdprox/minimize.hpp"
#include "bcdprox/objective.hpp"

namespace bcdprox {

/// Block schedule of the outer loop: alternate (theta, X), or split the
/// states into halves and cycle (theta, second half, first half).
enum class Schedule { two_block, three_block_split };

struct SolverConfig {
    double lambda = 1.0;             ///< proximal weight (inverse step size)
    int order = 3;                   ///< multistep order of the fidelity term
    double outer_tolerance = 1e-8;   ///< stop when |E_n - E_{n-1}| drops below
    int max_outer_iterations = 5000;
    Schedule schedule = Schedule::two_block;
    /// Max-norm tolerance for the fixed-point stops (iterate equal to its
    /// predicted trajectory, or unchanged from the previous iterate).
    double fixed_point_tolerance = 1e-12;
    MinimizerConfig theta_minimizer{};
    MinimizerConfig state_minimizer{};
};

enum class Termination {
    delta_tolerance,        ///< |E_n - E_{n-1}| below outer_tolerance
    fixed_point_predicted,  ///< iterate coincides with its predicted trajectory
    fixed_point_stationary, ///< iterate unchanged from the previous one
    max_iterations,
};

struct TraceRecord {
    int iteration = 0;
    double fidelity_value = 0.0;
    Vector theta;
    /// Frobenius distance between the clean states and the per-iteration
    /// predicted trajectory; NaN when no truth was supplied, +inf when the
    /// prediction diverged.
    double prediction_error = std::numeric_limits<double>::quiet_NaN();
};

struct SolverTrace {
    std::vector<TraceRecord> records;
    Termination termination = Termination::max_iterations;
};

struct EstimationResult {
    Vector theta;          ///< estimated parameters
    TimeSeries states;     ///< estimated (filtered) state series X*
    TimeSeries predicted;  ///< forward trajectory from theta and the first estimated state
    SolverTrace trace;
    bool diverged = false; ///< final forward prediction left the admissible region
};

const char *to_string(Termination t);

/// Parameter block update: minimize F(X_prev, .) from theta_prev. The prox
/// term is constant in theta, so this minimizes the fidelity alone.
Vector theta_step(const FidelityProblem &problem, const Matrix &states_prev,
                  const Vector &theta_prev, const MinimizerConfig &config = {});

/// State block update: minimize F(., theta) over all d*T coordinates from
/// states_prev. At lambda == 0 the exact minimizer is known (the forward
/// trajectory from the first column, which zeroes the fidelity) and is
/// returned directly when it stays finite.
Matrix x_step(const FidelityProblem &problem, const ProxAnchor &anchor, const Matrix &states_prev,
              const Vector &theta, const MinimizerConfig &config = {});

/// Alternating proximal descent on the fidelity objective, initialized at
/// the observations. `clean_truth` (optional) only feeds the per-iteration
/// prediction error recorded in the trace.
EstimationResult bcd_prox(const FidelityProblem &problem, const TimeSeries &observations,
                          const Vector &theta0, const SolverConfig &config,
                          const TimeSeries *clean_truth = nullptr);

/// Same contract with the split-state schedule: per outer iteration the
/// parameter step, then the second-half state block, then the first-half
/// state block (first half means columns 1..T/2, or 1..(T-1)/2 for odd T).
EstimationResult bcd_prox_split(const FidelityProblem &problem, const TimeSeries &observations,
                                const Vector &theta0, const SolverConfig &config,
                                const TimeSeries *clean_truth = nullptr);

} // namespace bcdprox
