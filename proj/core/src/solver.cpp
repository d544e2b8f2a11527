#include "bcdprox/solver.hpp"

#include <cmath>

namespace bcdprox {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

Vector minimize_theta(ObjectiveEvaluator &eval, const Matrix &states, const Vector &theta_start,
                      const MinimizerConfig &config) {
    ObjectiveFn fn = [&](const Vector &th, Vector &g) {
        return eval.value_grad_theta(states, th, nullptr, g);
    };
    return minimize_smooth(fn, theta_start, config).point;
}

// Minimize F over the state columns [col_begin, col_end), other columns held
// fixed at `states_start`.
Matrix minimize_state_block(ObjectiveEvaluator &eval, const ProxAnchor &anchor,
                            const Matrix &states_start, const Vector &theta,
                            const MinimizerConfig &config, int col_begin, int col_end) {
    const int d = static_cast<int>(states_start.rows());
    const int T = static_cast<int>(states_start.cols());
    const int ncols = col_end - col_begin;

    if (col_begin == 0 && col_end == T) {
        // Full update: operate on the flat view directly.
        ObjectiveFn fn = [&](const Vector &z, Vector &g) {
            Eigen::Map<const Matrix> x(z.data(), d, T);
            Eigen::Map<Matrix> gm(g.data(), d, T);
            MatrixRef gref(gm);
            return eval.value_grad_states(x, theta, &anchor, gref);
        };
        Vector z0 = Eigen::Map<const Vector>(states_start.data(), states_start.size());
        MinimizeResult res = minimize_smooth(fn, std::move(z0), config);
        return Eigen::Map<const Matrix>(res.point.data(), d, T);
    }

    Matrix work = states_start;
    Matrix grad_full(d, T);
    ObjectiveFn fn = [&](const Vector &z, Vector &g) {
        work.middleCols(col_begin, ncols) = Eigen::Map<const Matrix>(z.data(), d, ncols);
        MatrixRef gref(grad_full);
        const double v = eval.value_grad_states(work, theta, &anchor, gref);
        Eigen::Map<Matrix>(g.data(), d, ncols) = grad_full.middleCols(col_begin, ncols);
        return v;
    };
    Vector z0(static_cast<Eigen::Index>(d) * ncols);
    Eigen::Map<Matrix>(z0.data(), d, ncols) = states_start.middleCols(col_begin, ncols);
    MinimizeResult res = minimize_smooth(fn, std::move(z0), config);
    work.middleCols(col_begin, ncols) = Eigen::Map<const Matrix>(res.point.data(), d, ncols);
    return work;
}

Matrix state_step_impl(ObjectiveEvaluator &eval, const ProxAnchor &anchor,
                       const Matrix &states_prev, const Vector &theta,
                       const MinimizerConfig &config) {
    if (anchor.lambda == 0.0) {
        // Without the prox term the global minimizer is explicit: the forward
        // trajectory from the current first state zeroes the fidelity.
        try {
            TimeSeries hat = forward_predict(eval.problem().model(), theta, states_prev.col(0),
                                             eval.problem().grid(), eval.problem().order());
            return std::move(hat.values);
        } catch (const DivergedError &) {
            // fall through to the iterative update
        }
    }
    return minimize_state_block(eval, anchor, states_prev, theta, config, 0,
                                static_cast<int>(states_prev.cols()));
}

EstimationResult run_loop(const FidelityProblem &problem, const TimeSeries &observations,
                          const Vector &theta0, const SolverConfig &config,
                          const TimeSeries *clean_truth, bool split) {
    problem.check_dims(observations.values, theta0);
    if (!observations.values.allFinite()) { throw ContractError("bcd_prox: observations must be finite"); }
    if (!theta0.allFinite()) { throw ContractError("bcd_prox: initial parameters must be finite"); }
    if (clean_truth != nullptr && (clean_truth->values.rows() != observations.values.rows() ||
                                   clean_truth->values.cols() != observations.values.cols())) {
        throw ContractError("bcd_prox: truth dimensions mismatch");
    }

    const int T = problem.length();
    ObjectiveEvaluator eval(problem);

    Matrix x = observations.values;
    Vector theta = theta0;
    Matrix xhat;
    bool xhat_ok = false;

    SolverTrace trace;
    trace.termination = Termination::max_iterations;
    double prev_e = kInf;

    ProxAnchor anchor;
    anchor.lambda = config.lambda;

    const int nplus = (T % 2 == 0) ? T / 2 : (T - 1) / 2;

    for (int n = 1; n <= config.max_outer_iterations; ++n) {
        anchor.anchor = x;

        theta = minimize_theta(eval, anchor.anchor, theta, config.theta_minimizer);
        if (!split) {
            x = state_step_impl(eval, anchor, x, theta, config.state_minimizer);
        } else {
            x = minimize_state_block(eval, anchor, x, theta, config.state_minimizer, nplus, T);
            x = minimize_state_block(eval, anchor, x, theta, config.state_minimizer, 0, nplus);
        }

        const double e = eval.value(x, theta);

        xhat_ok = false;
        try {
            TimeSeries hat =
                forward_predict(problem.model(), theta, x.col(0), problem.grid(), problem.order());
            xhat = std::move(hat.values);
            xhat_ok = true;
        } catch (const DivergedError &) {}

        TraceRecord rec;
        rec.iteration = n;
        rec.fidelity_value = e;
        rec.theta = theta;
        if (clean_truth != nullptr) {
            rec.prediction_error = xhat_ok ? (clean_truth->values - xhat).norm() : kInf;
        }
        trace.records.push_back(std::move(rec));

        if (xhat_ok && (x - xhat).cwiseAbs().maxCoeff() <= config.fixed_point_tolerance) {
            trace.termination = Termination::fixed_point_predicted;
            break;
        }
        if ((x - anchor.anchor).cwiseAbs().maxCoeff() <= config.fixed_point_tolerance) {
            trace.termination = Termination::fixed_point_stationary;
            break;
        }
        if (n >= 2 && std::abs(e - prev_e) < config.outer_tolerance) {
            trace.termination = Termination::delta_tolerance;
            break;
        }
        prev_e = e;
    }

    EstimationResult result;
    result.theta = theta;
    result.states = TimeSeries(problem.grid(), x);
    if (xhat_ok) {
        result.predicted = TimeSeries(problem.grid(), xhat);
        result.diverged = false;
    } else {
        result.predicted =
            TimeSeries(problem.grid(), Matrix::Constant(problem.state_dim(), T, kNaN));
        result.diverged = true;
    }
    result.trace = std::move(trace);
    return result;
}

} // namespace

const char *to_string(Termination t) {
    switch (t) {
    case Termination::delta_tolerance: return "delta_tolerance";
    case Termination::fixed_point_predicted: return "fixed_point_predicted";
    case Termination::fixed_point_stationary: return "fixed_point_stationary";
    case Termination::max_iterations: return "max_iterations";
    }
    return "unknown";
}

Vector theta_step(const FidelityProblem &problem, const Matrix &states_prev,
                  const Vector &theta_prev, const MinimizerConfig &config) {
    problem.check_dims(states_prev, theta_prev);
    ObjectiveEvaluator eval(problem);
    return minimize_theta(eval, states_prev, theta_prev, config);
}

Matrix x_step(const FidelityProblem &problem, const ProxAnchor &anchor, const Matrix &states_prev,
              const Vector &theta, const MinimizerConfig &config) {
    problem.check_dims(states_prev, theta);
    if (anchor.anchor.rows() != states_prev.rows() || anchor.anchor.cols() != states_prev.cols()) {
        throw ContractError("x_step: anchor dimensions mismatch");
    }
    ObjectiveEvaluator eval(problem);
    return state_step_impl(eval, anchor, states_prev, theta, config);
}

EstimationResult bcd_prox(const FidelityProblem &problem, const TimeSeries &observations,
                          const Vector &theta0, const SolverConfig &config,
                          const TimeSeries *clean_truth) {
    return run_loop(problem, observations, theta0, config, clean_truth, false);
}

EstimationResult bcd_prox_split(const FidelityProblem &problem, const TimeSeries &observations,
                                const Vector &theta0, const SolverConfig &config,
                                const TimeSeries *clean_truth) {
    return run_loop(problem, observations, theta0, config, clean_truth, true);
}

} // namespace bcdprox
