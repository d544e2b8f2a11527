#include "bcdprox/multistep.hpp"

#include <cmath>

namespace bcdprox {

MultistepScheme ab_coefficients(int m) {
    MultistepScheme s;
    s.order = m;
    switch (m) {
    case 1: s.b = {1.0}; break;
    case 2: s.b = {3.0 / 2.0, -1.0 / 2.0}; break;
    case 3: s.b = {23.0 / 12.0, -16.0 / 12.0, 5.0 / 12.0}; break;
    case 4: s.b = {55.0 / 24.0, -59.0 / 24.0, 37.0 / 24.0, -9.0 / 24.0}; break;
    case 5:
        s.b = {1901.0 / 720.0, -2774.0 / 720.0, 2616.0 / 720.0, -1274.0 / 720.0, 251.0 / 720.0};
        break;
    default: throw ContractError("ab_coefficients: order must be in [1, 5]");
    }
    s.a.assign(static_cast<std::size_t>(m), 0.0);
    s.a[0] = 1.0;
    return s;
}

std::vector<MultistepScheme> ab_family(int m) {
    std::vector<MultistepScheme> family;
    family.reserve(static_cast<std::size_t>(m));
    for (int k = 1; k <= m; ++k) { family.push_back(ab_coefficients(k)); }
    return family;
}

namespace detail {

void combine_columns(const MultistepScheme &scheme, ConstMatrixRef states, ConstMatrixRef fvals,
                     int r, double dt, VectorRef out) {
    const int k = scheme.order;
    out = scheme.a[0] * states.col(r - 1) + (dt * scheme.b[0]) * fvals.col(r - 1);
    for (int j = 1; j < k; ++j) {
        const double aj = scheme.a[static_cast<std::size_t>(j)];
        if (aj != 0.0) { out.noalias() += aj * states.col(r - 1 - j); }
        out.noalias() += (dt * scheme.b[static_cast<std::size_t>(j)]) * fvals.col(r - 1 - j);
    }
}

} // namespace detail

Vector mstep_next(const OdeModel &model, const Vector &theta, const MultistepScheme &scheme,
                  const std::vector<Vector> &recent, double dt) {
    if (static_cast<int>(recent.size()) != scheme.order) {
        throw ContractError("mstep_next: need exactly `order` recent states (newest first)");
    }
    if (dt < 0.0) { throw ContractError("mstep_next: dt must be nonnegative"); }
    const int d = model.state_dim;
    const int k = scheme.order;
    Matrix states(d, k);
    Matrix fvals(d, k);
    for (int j = 0; j < k; ++j) {
        const Vector &x = recent[static_cast<std::size_t>(j)];
        if (x.size() != d) { throw ContractError("mstep_next: state dimension mismatch"); }
        states.col(k - 1 - j) = x;
        model.field(states.col(k - 1 - j), theta, fvals.col(k - 1 - j));
    }
    Vector out(d);
    detail::combine_columns(scheme, states, fvals, k, dt, out);
    return out;
}

TimeSeries forward_predict(const OdeModel &model, const Vector &theta, const Vector &x1,
                           const TimeGrid &grid, int m) {
    if (grid.size() < 2) { throw ContractError("forward_predict: grid needs at least two points"); }
    if (x1.size() != model.state_dim) { throw ContractError("forward_predict: initial state dimension mismatch"); }
    const int T = grid.size();
    const int d = model.state_dim;
    const auto schemes = ab_family(m);

    Matrix states(d, T);
    Matrix fvals(d, T);
    states.col(0) = x1;
    for (int r = 1; r < T; ++r) {
        const int c = r - 1;
        model.field(states.col(c), theta, fvals.col(c));
        const int k = std::min(r, m);
        detail::combine_columns(schemes[static_cast<std::size_t>(k - 1)], states, fvals, r,
                                grid.gap(r - 1), states.col(r));
        if (!states.col(r).allFinite() ||
            states.col(r).cwiseAbs().maxCoeff() > kDivergenceThreshold) {
            throw DivergedError("forward_predict: trajectory diverged at index " + std::to_string(r),
                                r - 1);
        }
    }
    return TimeSeries(grid, std::move(states));
}

} // namespace bcdprox
