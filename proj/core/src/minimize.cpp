#include "bcdprox/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace bcdprox {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Probe {
    double alpha = 0.0;
    double value = kInf;
    double slope = 0.0; ///< directional derivative g . dir
};

// Minimizer of the cubic through (a, fa, da) and (b, fb, db), clamped into
// the interior of [lo, hi]; falls back to bisection when ill-conditioned.
double cubic_step(double a, double fa, double da, double b, double fb, double db, double lo,
                  double hi) {
    const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
    const double disc = d1 * d1 - da * db;
    double step = 0.5 * (lo + hi);
    if (disc >= 0.0) {
        const double d2 = std::copysign(std::sqrt(disc), b - a);
        const double denom = db - da + 2.0 * d2;
        if (denom != 0.0) { step = b - (b - a) * (db + d2 - d1) / denom; }
    }
    const double margin = 0.1 * (hi - lo);
    if (!std::isfinite(step) || step < lo + margin || step > hi - margin) {
        step = 0.5 * (lo + hi);
    }
    return step;
}

class LineSearch {
  public:
    LineSearch(const ObjectiveFn &objective, const Vector &origin, const Vector &direction,
               double value0, double slope0, const MinimizerConfig &config)
        : objective_(objective), origin_(origin), direction_(direction), value0_(value0),
          slope0_(slope0), config_(config) {
        trial_.resizeLike(origin);
        grad_.resizeLike(origin);
    }

    int evaluations() const { return evaluations_; }
    const Vector &accepted_point() const { return trial_; }
    const Vector &accepted_gradient() const { return grad_; }
    double accepted_value() const { return accepted_.value; }

    /// Strong-Wolfe search from alpha_init; returns false when no acceptable
    /// step was found (callers fall back to the best visited point).
    bool run(double alpha_init) {
        Probe prev{0.0, value0_, slope0_};
        double alpha = alpha_init;
        const double alpha_max = 1e10;
        for (int iter = 0; iter < config_.max_line_search; ++iter) {
            Probe cur = eval(alpha);
            if (!std::isfinite(cur.value)) {
                // Walked out of the admissible region; the bracket
                // [prev.alpha, alpha] contains acceptable steps.
                return zoom(prev, cur);
            }
            if (cur.value > value0_ + config_.wolfe_c1 * alpha * slope0_ ||
                (iter > 0 && cur.value >= prev.value)) {
                return zoom(prev, cur);
            }
            if (std::abs(cur.slope) <= -config_.wolfe_c2 * slope0_) { return accept(cur); }
            if (cur.slope >= 0.0) { return zoom(cur, prev); }
            if (alpha >= alpha_max) { return accept(cur); } // pathological scaling
            prev = cur;
            alpha = std::min(2.0 * alpha, alpha_max);
        }
        return false;
    }

  private:
    Probe eval(double alpha) {
        trial_ = origin_ + alpha * direction_;
        double v = objective_(trial_, grad_);
        ++evaluations_;
        last_alpha_ = alpha;
        Probe p;
        p.alpha = alpha;
        if (std::isfinite(v) && grad_.allFinite()) {
            p.value = v;
            p.slope = grad_.dot(direction_);
        } else {
            p.value = kInf;
            p.slope = std::numeric_limits<double>::quiet_NaN();
        }
        return p;
    }

    bool accept(const Probe &p) {
        // Re-materialize the trial point when the scratch holds a later probe.
        if (last_alpha_ != p.alpha) {
            accepted_ = eval(p.alpha);
        } else {
            accepted_ = p;
        }
        return std::isfinite(accepted_.value);
    }

    // lo always carries the lowest finite value satisfying sufficient
    // decrease; hi brackets it (possibly with a non-finite value).
    bool zoom(Probe lo, Probe hi) {
        for (int iter = 0; iter < config_.max_line_search; ++iter) {
            const double span = std::abs(hi.alpha - lo.alpha);
            if (!(span > 1e-16 * std::max(1.0, std::abs(lo.alpha)))) { break; }
            double alpha;
            if (std::isfinite(hi.value)) {
                alpha = cubic_step(lo.alpha, lo.value, lo.slope, hi.alpha, hi.value, hi.slope,
                                   std::min(lo.alpha, hi.alpha), std::max(lo.alpha, hi.alpha));
            } else {
                // The far end is outside the admissible region: bisect
                // toward the finite side.
                alpha = lo.alpha + 0.5 * (hi.alpha - lo.alpha);
            }
            Probe cur = eval(alpha);
            if (!std::isfinite(cur.value) ||
                cur.value > value0_ + config_.wolfe_c1 * alpha * slope0_ || cur.value >= lo.value) {
                hi = cur;
                continue;
            }
            if (std::abs(cur.slope) <= -config_.wolfe_c2 * slope0_) { return accept(cur); }
            if (cur.slope * (hi.alpha - lo.alpha) >= 0.0) { hi = lo; }
            lo = cur;
        }
        // No strong-Wolfe point isolated; settle for the best sufficient-
        // decrease point if one was seen.
        if (std::isfinite(lo.value) && lo.alpha > 0.0 && lo.value < value0_) { return accept(lo); }
        return false;
    }

    const ObjectiveFn &objective_;
    const Vector &origin_;
    const Vector &direction_;
    double value0_;
    double slope0_;
    const MinimizerConfig &config_;
    Vector trial_;
    Vector grad_;
    Probe accepted_{-1.0, kInf, 0.0};
    double last_alpha_ = std::numeric_limits<double>::quiet_NaN();
    int evaluations_ = 0;
};

} // namespace

MinimizeResult minimize_smooth(const ObjectiveFn &objective, Vector start,
                               const MinimizerConfig &config) {
    if (config.history < 1 || config.max_iterations < 1) {
        throw ContractError("minimize_smooth: iteration counts must be positive");
    }
    if (!(config.wolfe_c1 > 0.0 && config.wolfe_c1 < config.wolfe_c2 && config.wolfe_c2 < 1.0)) {
        throw ContractError("minimize_smooth: need 0 < c1 < c2 < 1");
    }
    if (!start.allFinite()) { throw NumericError("minimize_smooth: start point is not finite"); }

    const auto n = start.size();
    MinimizeResult result;
    result.point = std::move(start);
    result.gradient.resize(n);
    result.value = objective(result.point, result.gradient);
    result.evaluations = 1;
    if (!std::isfinite(result.value) || !result.gradient.allFinite()) {
        throw NumericError("minimize_smooth: objective is not finite at the start point");
    }

    Vector x = result.point;
    Vector grad = result.gradient;
    double value = result.value;

    auto grad_converged = [&](const Vector &g) {
        return g.lpNorm<Eigen::Infinity>() <= config.grad_tolerance;
    };
    if (grad_converged(grad)) {
        result.status = MinimizeStatus::already_minimized;
        return result;
    }

    struct Pair {
        Vector s, y;
        double rho;
    };
    std::deque<Pair> memory;
    Vector direction(n), q(n);
    std::vector<double> alpha_buf(static_cast<std::size_t>(config.history));

    bool tried_steepest = false;
    for (int iter = 0; iter < config.max_iterations; ++iter) {
        // Two-loop recursion for direction = -H * grad.
        q = grad;
        int idx = 0;
        for (auto it = memory.rbegin(); it != memory.rend(); ++it, ++idx) {
            alpha_buf[static_cast<std::size_t>(idx)] = it->rho * it->s.dot(q);
            q.noalias() -= alpha_buf[static_cast<std::size_t>(idx)] * it->y;
        }
        if (!memory.empty()) {
            const Pair &last = memory.back();
            q *= last.s.dot(last.y) / last.y.squaredNorm();
        }
        for (auto it = memory.begin(); it != memory.end(); ++it) {
            --idx;
            const double beta = it->rho * it->y.dot(q);
            q.noalias() += (alpha_buf[static_cast<std::size_t>(idx)] - beta) * it->s;
        }
        direction = -q;

        double slope = grad.dot(direction);
        if (!(slope < 0.0)) {
            // Curvature information went stale; restart from steepest descent.
            memory.clear();
            direction = -grad;
            slope = grad.dot(direction);
            if (!(slope < 0.0)) { break; }
        }

        const double alpha_init =
            (iter == 0 && memory.empty())
                ? std::min(1.0, 1.0 / std::max(1e-12, grad.lpNorm<Eigen::Infinity>()))
                : 1.0;

        LineSearch search(objective, x, direction, value, slope, config);
        const bool ok = search.run(alpha_init);
        result.evaluations += search.evaluations();
        if (!ok) {
            if (!memory.empty() && !tried_steepest) {
                // One retry along the raw gradient before giving up.
                memory.clear();
                tried_steepest = true;
                continue;
            }
            result.status = MinimizeStatus::line_search_failed;
            return result;
        }
        tried_steepest = false;

        Pair pair;
        pair.s = search.accepted_point() - x;
        pair.y = search.accepted_gradient() - grad;
        x = search.accepted_point();
        grad = search.accepted_gradient();
        value = search.accepted_value();
        result.iterations = iter + 1;

        if (value < result.value) {
            result.point = x;
            result.value = value;
            result.gradient = grad;
        }

        if (grad_converged(grad)) {
            result.point = x;
            result.value = value;
            result.gradient = grad;
            result.status = MinimizeStatus::gradient_tolerance;
            return result;
        }

        const double sy = pair.s.dot(pair.y);
        if (sy > 1e-12 * pair.s.norm() * pair.y.norm()) {
            pair.rho = 1.0 / sy;
            memory.push_back(std::move(pair));
            if (static_cast<int>(memory.size()) > config.history) { memory.pop_front(); }
        }
    }
    result.status = MinimizeStatus::max_iterations;
    return result;
}

} // namespace bcdprox
