#include "bcdprox/objective.hpp"

#include <cmath>
#include <limits>

namespace bcdprox {

FidelityProblem::FidelityProblem(OdeModel model, TimeGrid grid, int order)
    : model_(std::move(model)), grid_(std::move(grid)), order_(order) {
    if (order_ < 1 || order_ > 5) { throw ContractError("FidelityProblem: order must be in [1, 5]"); }
    if (grid_.size() < 2) { throw ContractError("FidelityProblem: grid needs at least two points"); }
    if (order_ >= 2 && !grid_.is_uniform()) {
        // Adams-Bashforth weights assume a uniform step; only order 1 admits
        // variable gaps.
        throw ContractError("FidelityProblem: order >= 2 requires a uniform grid");
    }
    schemes_ = ab_family(order_);
}

void FidelityProblem::check_dims(const Matrix &states, const Vector &theta) const {
    if (states.rows() != state_dim() || states.cols() != length()) {
        throw ContractError("FidelityProblem: state series must be d x T");
    }
    if (theta.size() != param_dim()) { throw ContractError("FidelityProblem: parameter dimension mismatch"); }
}

ProxAnchor::ProxAnchor(Matrix a, double l) : anchor(std::move(a)), lambda(l) {
    if (lambda < 0.0) { throw ContractError("ProxAnchor: lambda must be nonnegative"); }
}

ObjectiveEvaluator::ObjectiveEvaluator(const FidelityProblem &problem) : problem_(problem) {
    const int d = problem.state_dim();
    const int T = problem.length();
    const int p = problem.param_dim();
    fvals_.resize(d, T);
    residuals_.resize(d, T);
    weights_.resize(d, T);
    jac_.resize(d, std::max(d, p));
    pred_.resize(d);
}

double ObjectiveEvaluator::evaluate(ConstMatrixRef states, const Vector &theta,
                                    const ProxAnchor *anchor, Vector *gtheta, MatrixRef *gstates) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    const int T = problem_.length();
    const int d = problem_.state_dim();
    const int m = problem_.order();
    const auto &schemes = problem_.schemes();
    const auto &grid = problem_.grid();
    const OdeModel &model = problem_.model();

    if (!states.allFinite() || !theta.allFinite()) { return kInf; }

    // Field values for every column that feeds a prediction.
    for (int c = 0; c < T - 1; ++c) { model.field(states.col(c), theta, fvals_.col(c)); }
    if (!fvals_.leftCols(T - 1).allFinite()) { return kInf; }

    const bool want_grad = (gtheta != nullptr) || (gstates != nullptr);
    double e = 0.0;
    for (int r = 1; r < T; ++r) {
        const int k = std::min(r, m);
        detail::combine_columns(schemes[static_cast<std::size_t>(k - 1)], states, fvals_, r,
                                grid.gap(r - 1), pred_);
        if (want_grad) {
            residuals_.col(r) = states.col(r) - pred_;
            e += residuals_.col(r).squaredNorm();
        } else {
            e += (states.col(r) - pred_).squaredNorm();
        }
    }
    if (!std::isfinite(e)) { return kInf; }

    double total = e;
    if (anchor != nullptr && anchor->lambda > 0.0) {
        total += anchor->lambda * (states - anchor->anchor).squaredNorm();
        if (!std::isfinite(total)) { return kInf; }
    }
    if (!want_grad) { return total; }

    // weights_.col(c) = sum over residuals r and lags j with c = r-1-j of
    // gap(r-1) * b_j * residual_r; both gradients contract the per-column
    // Jacobians against these.
    weights_.setZero();
    for (int r = 1; r < T; ++r) {
        const int k = std::min(r, m);
        const auto &b = schemes[static_cast<std::size_t>(k - 1)].b;
        const double dt = grid.gap(r - 1);
        for (int j = 0; j < k; ++j) {
            weights_.col(r - 1 - j).noalias() += (dt * b[static_cast<std::size_t>(j)]) * residuals_.col(r);
        }
    }

    if (gtheta != nullptr) {
        gtheta->setZero(problem_.param_dim());
        auto jac_theta = jac_.leftCols(problem_.param_dim());
        for (int c = 0; c < T - 1; ++c) {
            if (weights_.col(c).isZero(0.0)) { continue; }
            model.param_jacobian(states.col(c), theta, jac_theta);
            gtheta->noalias() += jac_theta.transpose() * weights_.col(c);
        }
        *gtheta *= -2.0;
    }

    if (gstates != nullptr) {
        MatrixRef &g = *gstates;
        g.setZero();
        for (int r = 1; r < T; ++r) {
            const int k = std::min(r, m);
            const auto &a = schemes[static_cast<std::size_t>(k - 1)].a;
            g.col(r).noalias() += 2.0 * residuals_.col(r);
            for (int j = 0; j < k; ++j) {
                g.col(r - 1 - j).noalias() -= (2.0 * a[static_cast<std::size_t>(j)]) * residuals_.col(r);
            }
        }
        if (model.state_jacobian_tvp) {
            for (int c = 0; c < T - 1; ++c) {
                if (weights_.col(c).isZero(0.0)) { continue; }
                pred_.setZero();
                model.state_jacobian_tvp(states.col(c), theta, weights_.col(c), pred_);
                g.col(c).noalias() -= 2.0 * pred_;
            }
        } else {
            auto jac_state = jac_.leftCols(d);
            for (int c = 0; c < T - 1; ++c) {
                if (weights_.col(c).isZero(0.0)) { continue; }
                model.state_jacobian(states.col(c), theta, jac_state);
                g.col(c).noalias() -= 2.0 * (jac_state.transpose() * weights_.col(c));
            }
        }
        if (anchor != nullptr && anchor->lambda > 0.0) {
            g.noalias() += (2.0 * anchor->lambda) * (states - anchor->anchor);
        }
    }
    return total;
}

double ObjectiveEvaluator::value(ConstMatrixRef states, const Vector &theta,
                                 const ProxAnchor *anchor) {
    return evaluate(states, theta, anchor, nullptr, nullptr);
}

double ObjectiveEvaluator::value_grad_theta(ConstMatrixRef states, const Vector &theta,
                                            const ProxAnchor *anchor, Vector &grad) {
    return evaluate(states, theta, anchor, &grad, nullptr);
}

double ObjectiveEvaluator::value_grad_states(ConstMatrixRef states, const Vector &theta,
                                             const ProxAnchor *anchor, MatrixRef grad) {
    return evaluate(states, theta, anchor, nullptr, &grad);
}

double fidelity(const FidelityProblem &problem, const Matrix &states, const Vector &theta) {
    problem.check_dims(states, theta);
    ObjectiveEvaluator eval(problem);
    return eval.value(states, theta);
}

double prox_objective(const FidelityProblem &problem, const ProxAnchor &anchor,
                      const Matrix &states, const Vector &theta) {
    problem.check_dims(states, theta);
    if (anchor.anchor.rows() != states.rows() || anchor.anchor.cols() != states.cols()) {
        throw ContractError("prox_objective: anchor dimensions mismatch");
    }
    ObjectiveEvaluator eval(problem);
    return eval.value(states, theta, &anchor);
}

Vector grad_theta(const FidelityProblem &problem, const Matrix &states, const Vector &theta) {
    problem.check_dims(states, theta);
    ObjectiveEvaluator eval(problem);
    Vector g;
    eval.value_grad_theta(states, theta, nullptr, g);
    return g;
}

Matrix grad_states(const FidelityProblem &problem, const ProxAnchor &anchor, const Matrix &states,
                   const Vector &theta) {
    problem.check_dims(states, theta);
    ObjectiveEvaluator eval(problem);
    Matrix g(states.rows(), states.cols());
    eval.value_grad_states(states, theta, &anchor, g);
    return g;
}

Matrix hessian_theta(const FidelityProblem &problem, const Matrix &states) {
    if (!problem.model().linear.has_value()) {
        throw ContractError("hessian_theta: model exposes no linear decomposition");
    }
    if (problem.order() != 1) { throw ContractError("hessian_theta: defined for order 1 only"); }
    if (states.rows() != problem.state_dim() || states.cols() != problem.length()) {
        throw ContractError("hessian_theta: state series must be d x T");
    }
    const int p = problem.param_dim();
    const int T = problem.length();
    Matrix f1(problem.state_dim(), p);
    Matrix h = Matrix::Zero(p, p);
    for (int i = 0; i + 1 < T; ++i) {
        const double dt = problem.grid().gap(i);
        problem.model().linear->f1(states.col(i), f1);
        h.noalias() += (2.0 * dt * dt) * (f1.transpose() * f1);
    }
    return h;
}

Matrix half_block_hessian_delta0(int d, int T) {
    if (d < 1) { throw ContractError("half_block_hessian_delta0: need d >= 1"); }
    if (T < 2 || T % 2 != 0) {
        throw ContractError("half_block_hessian_delta0: T must be even and >= 2 "
                            "(odd series use the (T-1)/2 split)");
    }
    const int nblocks = T / 2;
    const int n = d * nblocks;
    Matrix a = Matrix::Zero(n, n);
    for (int blk = 0; blk < nblocks; ++blk) {
        const double diag = (blk == 0) ? 2.0 : 4.0;
        for (int c = 0; c < d; ++c) { a(blk * d + c, blk * d + c) = diag; }
        if (blk + 1 < nblocks) {
            for (int c = 0; c < d; ++c) {
                a(blk * d + c, (blk + 1) * d + c) = -2.0;
                a((blk + 1) * d + c, blk * d + c) = -2.0;
            }
        }
    }
    return a;
}

} // namespace bcdprox
