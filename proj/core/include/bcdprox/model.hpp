#pragma once

#include <functional>
#include <optional>
#include <string>

#include "bcdprox/grid.hpp"

namespace bcdprox {

/// A parametric vector field dx/dt = f(x, theta) with analytic Jacobians.
/// Models are immutable after construction and the evaluators are pure
/// functions, so instances can be shared freely across threads.
struct OdeModel {
    using FieldFn = std::function<void(ConstVectorRef x, ConstVectorRef theta, VectorRef out)>;
    using StateJacFn = std::function<void(ConstVectorRef x, ConstVectorRef theta, MatrixRef out)>;
    using ParamJacFn = std::function<void(ConstVectorRef x, ConstVectorRef theta, MatrixRef out)>;

    /// f(x, theta) = f0(x) + f1(x) theta, for fields linear in theta.
    struct LinearDecomposition {
        std::function<void(ConstVectorRef x, VectorRef out)> f0;
        std::function<void(ConstVectorRef x, MatrixRef out)> f1;
    };

    /// out += (df/dx)^T w; optional fast path for structurally sparse
    /// Jacobians. Must agree with state_jacobian.
    using StateJacTvpFn = std::function<void(ConstVectorRef x, ConstVectorRef theta,
                                             ConstVectorRef w, VectorRef out)>;

    std::string name;
    int state_dim = 0; ///< d
    int param_dim = 0; ///< p
    FieldFn field;
    StateJacFn state_jacobian; ///< df/dx, d x d
    ParamJacFn param_jacobian; ///< df/dtheta, d x p
    StateJacTvpFn state_jacobian_tvp; ///< optional
    std::optional<LinearDecomposition> linear;

    /// Checked evaluation; throws ContractError on dimension mismatch and
    /// NumericError when the result is not finite. Inner loops use the raw
    /// callbacks with preallocated buffers instead.
    Vector eval_field(const Vector &x, const Vector &theta) const;
    Matrix eval_state_jacobian(const Vector &x, const Vector &theta) const;
    Matrix eval_param_jacobian(const Vector &x, const Vector &theta) const;

    void check_dims(const Vector &x, const Vector &theta) const;
};

} // namespace bcdprox
