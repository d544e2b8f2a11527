#pragma once

#include "bcdprox/multistep.hpp"

namespace bcdprox {

/// A discretized ODE-fidelity problem: model, sample grid and multistep
/// order. The fidelity of a state series X and parameters theta is
///   E(X, theta) = sum_{i=1}^{T-1} || x_{i+1} - (k-step prediction) ||^2,
/// where the prediction order k ramps up as min(i, m).
class FidelityProblem {
  public:
    FidelityProblem(OdeModel model, TimeGrid grid, int order);

    const OdeModel &model() const { return model_; }
    const TimeGrid &grid() const { return grid_; }
    int order() const { return order_; }
    const std::vector<MultistepScheme> &schemes() const { return schemes_; }

    int length() const { return grid_.size(); }
    int state_dim() const { return model_.state_dim; }
    int param_dim() const { return model_.param_dim; }

    void check_dims(const Matrix &states, const Vector &theta) const;

  private:
    OdeModel model_;
    TimeGrid grid_;
    int order_;
    std::vector<MultistepScheme> schemes_;
};

/// Proximal anchor: the previous state iterate and the penalty weight, so
/// the damped objective is F(X, theta) = E(X, theta) + lambda ||X - anchor||^2.
struct ProxAnchor {
    Matrix anchor; ///< d x T
    double lambda = 0.0;

    ProxAnchor() = default;
    ProxAnchor(Matrix a, double l);
};

double fidelity(const FidelityProblem &problem, const Matrix &states, const Vector &theta);

double prox_objective(const FidelityProblem &problem, const ProxAnchor &anchor,
                      const Matrix &states, const Vector &theta);

/// Gradient of the damped objective w.r.t. theta (the prox term does not
/// depend on theta, so this is the fidelity gradient).
Vector grad_theta(const FidelityProblem &problem, const Matrix &states, const Vector &theta);

/// Gradient of the damped objective w.r.t. all states, d x T.
Matrix grad_states(const FidelityProblem &problem, const ProxAnchor &anchor, const Matrix &states,
                   const Vector &theta);

/// theta-Hessian of the order-1 fidelity for fields linear in theta:
/// 2 sum_i f1(x_i)^T f1(x_i) dt_i^2. Symmetric positive semidefinite.
/// Requires order == 1 and a model with a linear decomposition.
Matrix hessian_theta(const FidelityProblem &problem, const Matrix &states);

/// Hessian w.r.t. the first-half states (x_1..x_{T/2}) of the zero-gap
/// fidelity sum_i ||x_{i+1} - x_i||^2: block tridiagonal with 2I in the
/// leading diagonal block, 4I elsewhere and -2I off-diagonal. Integer
/// entries; determinant 2^(dT/2). Requires T even.
Matrix half_block_hessian_delta0(int d, int T);

/// Fused fidelity/gradient evaluation with reusable scratch, for the
/// solver's inner loops. Returns +infinity instead of throwing when an
/// evaluation turns non-finite, so line searches can back off.
class ObjectiveEvaluator {
  public:
    explicit ObjectiveEvaluator(const FidelityProblem &problem);

    /// E(X, theta), or F when an anchor with lambda > 0 is supplied.
    double value(ConstMatrixRef states, const Vector &theta, const ProxAnchor *anchor = nullptr);

    /// Value plus gradient w.r.t. theta.
    double value_grad_theta(ConstMatrixRef states, const Vector &theta, const ProxAnchor *anchor,
                            Vector &grad);

    /// Value plus gradient w.r.t. states (grad is d x T).
    double value_grad_states(ConstMatrixRef states, const Vector &theta, const ProxAnchor *anchor,
                             MatrixRef grad);

    const FidelityProblem &problem() const { return problem_; }

  private:
    double evaluate(ConstMatrixRef states, const Vector &theta, const ProxAnchor *anchor,
                    Vector *gtheta, MatrixRef *gstates);

    const FidelityProblem &problem_;
    Matrix fvals_;     // per-column field values
    Matrix residuals_; // residual r lives in column r
    Matrix weights_;   // per-column sum of dt * b_j * residual terms
    Matrix jac_;       // scratch Jacobian
    Vector pred_;      // scratch prediction
};

} // namespace bcdprox
