#pragma once

#include <vector>

#include "bcdprox/model.hpp"

namespace bcdprox {

/// Coefficients of an explicit linear multistep update
///   x_{i+1} = sum_j a_j x_{i-j} + dt * sum_j b_j f(x_{i-j}, theta),
/// with j running over the scheme order (newest state first).
struct MultistepScheme {
    int order = 1;
    std::vector<double> a;
    std::vector<double> b;
};

/// Adams-Bashforth coefficients of order m in [1, 5], uniform step.
/// Order 1 is the explicit Euler update.
MultistepScheme ab_coefficients(int m);

/// Schemes of order 1..m; scheme k-1 is used while only k predecessors exist.
std::vector<MultistepScheme> ab_family(int m);

/// Any state component beyond this magnitude counts as a diverged trajectory.
inline constexpr double kDivergenceThreshold = 1e8;

/// One multistep update from `recent` states ordered newest first
/// (recent.size() must equal the scheme order).
Vector mstep_next(const OdeModel &model, const Vector &theta, const MultistepScheme &scheme,
                  const std::vector<Vector> &recent, double dt);

/// Forward trajectory from x1 over the grid, ramping the scheme order up
/// from 1 to m as history becomes available. Throws DivergedError (carrying
/// the last valid index) when a component exceeds kDivergenceThreshold or
/// turns non-finite. Deterministic: fixed accumulation order.
TimeSeries forward_predict(const OdeModel &model, const Vector &theta, const Vector &x1,
                           const TimeGrid &grid, int m);

namespace detail {

/// Shared update kernel: out = sum_j a_j states.col(r-1-j)
///                             + dt * sum_j b_j fvals.col(r-1-j).
/// Both the fidelity objective and forward prediction route through this so
/// predicted trajectories reproduce the residual arithmetic bit for bit.
void combine_columns(const MultistepScheme &scheme, ConstMatrixRef states, ConstMatrixRef fvals,
                     int r, double dt, VectorRef out);

} // namespace detail

} // namespace bcdprox
