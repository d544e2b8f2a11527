#include "bcdprox/model.hpp"

namespace bcdprox {

void OdeModel::check_dims(const Vector &x, const Vector &theta) const {
    if (x.size() != state_dim) {
        throw ContractError(name + ": state has size " + std::to_string(x.size()) +
                            ", expected " + std::to_string(state_dim));
    }
    if (theta.size() != param_dim) {
        throw ContractError(name + ": parameter vector has size " + std::to_string(theta.size()) +
                            ", expected " + std::to_string(param_dim));
    }
}

Vector OdeModel::eval_field(const Vector &x, const Vector &theta) const {
    check_dims(x, theta);
    Vector out(state_dim);
    field(x, theta, out);
    if (!out.allFinite()) { throw NumericError(name + ": field evaluation is not finite"); }
    return out;
}

Matrix OdeModel::eval_state_jacobian(const Vector &x, const Vector &theta) const {
    check_dims(x, theta);
    Matrix out(state_dim, state_dim);
    state_jacobian(x, theta, out);
    return out;
}

Matrix OdeModel::eval_param_jacobian(const Vector &x, const Vector &theta) const {
    check_dims(x, theta);
    Matrix out(state_dim, param_dim);
    param_jacobian(x, theta, out);
    return out;
}

} // namespace bcdprox
