#include "bcdprox/rk.hpp"

#include <cmath>

#include "bcdprox/multistep.hpp"

namespace bcdprox {

namespace {

// Dormand-Prince tableau; the fifth-order solution uses stages 1..6.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;

} // namespace

TimeSeries rk_integrate(const OdeModel &model, const Vector &theta, const Vector &x1,
                        const TimeGrid &grid, double max_substep) {
    if (x1.size() != model.state_dim) { throw ContractError("rk_integrate: initial state dimension mismatch"); }
    if (!(max_substep > 0.0)) { throw ContractError("rk_integrate: max_substep must be positive"); }

    const int T = grid.size();
    const int d = model.state_dim;
    Matrix out(d, T);
    out.col(0) = x1;

    Vector x = x1, k1(d), k2(d), k3(d), k4(d), k5(d), k6(d), tmp(d);
    for (int i = 0; i + 1 < T; ++i) {
        const double gap = grid.gap(i);
        const int substeps = std::max(1, static_cast<int>(std::ceil(gap / max_substep)));
        const double h = gap / substeps;
        for (int s = 0; s < substeps; ++s) {
            model.field(x, theta, k1);
            tmp = x + h * (a21 * k1);
            model.field(tmp, theta, k2);
            tmp = x + h * (a31 * k1 + a32 * k2);
            model.field(tmp, theta, k3);
            tmp = x + h * (a41 * k1 + a42 * k2 + a43 * k3);
            model.field(tmp, theta, k4);
            tmp = x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
            model.field(tmp, theta, k5);
            tmp = x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
            model.field(tmp, theta, k6);
            x += h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            if (!x.allFinite() || x.cwiseAbs().maxCoeff() > kDivergenceThreshold) {
                throw DivergedError("rk_integrate: trajectory diverged near t = " +
                                        std::to_string(grid.time(i)),
                                    i);
            }
        }
        out.col(i + 1) = x;
    }
    return TimeSeries(grid, std::move(out));
}

} // namespace bcdprox
