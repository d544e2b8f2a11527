#pragma once

#include <functional>

#include "bcdprox/grid.hpp"

namespace bcdprox {

/// Settings for the limited-memory quasi-Newton minimizer.
struct MinimizerConfig {
    /// Convergence test on the max-norm of the gradient.
    double grad_tolerance = 1e-9;
    /// Hard cap on quasi-Newton iterations.
    int max_iterations = 500;
    /// Sufficient-decrease coefficient of the strong Wolfe conditions.
    double wolfe_c1 = 1e-4;
    /// Curvature coefficient of the strong Wolfe conditions.
    double wolfe_c2 = 0.9;
    /// Number of correction pairs kept for the inverse-Hessian estimate.
    int history = 10;
    /// Function evaluations allowed per line search.
    int max_line_search = 40;
};

/// Objective callback: returns the value at `x` and fills `grad` (same size
/// as `x`). A non-finite return is treated as "outside the admissible
/// region"; the line search backs off instead of failing.
using ObjectiveFn = std::function<double(const Vector &x, Vector &grad)>;

enum class MinimizeStatus {
    gradient_tolerance, ///< max-norm of the gradient reached the tolerance
    already_minimized,  ///< the start point satisfied the tolerance
    max_iterations,
    line_search_failed, ///< no acceptable step; best visited point returned
};

struct MinimizeResult {
    Vector point;
    double value = 0.0;
    Vector gradient;
    int iterations = 0;
    int evaluations = 0;
    MinimizeStatus status = MinimizeStatus::max_iterations;
};

/// L-BFGS with a strong-Wolfe line search (bracket + zoom, cubic steps).
/// Monotone: the returned value never exceeds the value at `start`. Throws
/// NumericError when the objective is non-finite at the start point; a
/// non-finite value at a trial step only shrinks the step.
MinimizeResult minimize_smooth(const ObjectiveFn &objective, Vector start,
                               const MinimizerConfig &config = {});

} // namespace bcdprox
