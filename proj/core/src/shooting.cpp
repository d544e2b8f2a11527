#include "bcdprox/shooting.hpp"

#include <cmath>
#include <memory>

namespace bcdprox {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ObjectiveFn make_shooting_objective(const OdeModel &model, const TimeSeries &observations,
                                    int order) {
    const int d = model.state_dim;
    const int p = model.param_dim;
    const int T = observations.length();
    if (observations.dim() != d) {
        throw ContractError("shooting objective: observation dimension mismatch");
    }

    struct Scratch {
        OdeModel model;
        TimeGrid grid;
        Matrix y;
        std::vector<MultistepScheme> schemes;
        int order = 1;
        Matrix states, fvals, jx, jth, snew;
        std::vector<Matrix> sens;
        Vector resid;
    };
    auto s = std::make_shared<Scratch>();
    s->model = model;
    s->grid = observations.grid;
    s->y = observations.values;
    s->schemes = ab_family(order);
    s->order = order;
    s->states.resize(d, T);
    s->fvals.resize(d, T);
    s->jx.resize(d, d);
    s->jth.resize(d, p);
    s->snew.resize(d, p + d);
    s->sens.assign(static_cast<std::size_t>(order), Matrix(d, p + d));
    s->resid.resize(d);

    return [s, d, p, T](const Vector &z, Vector &g) -> double {
        const auto theta = z.head(p);
        s->states.col(0) = z.tail(d);
        g.setZero(p + d);

        // Sensitivity of the first state w.r.t. (theta; x1).
        Matrix &s0 = s->sens[0];
        s0.setZero();
        s0.rightCols(d).setIdentity();

        double value = (s->states.col(0) - s->y.col(0)).squaredNorm();
        g.noalias() += 2.0 * (s0.transpose() * (s->states.col(0) - s->y.col(0)));

        for (int r = 1; r < T; ++r) {
            const int c = r - 1;
            const int k = std::min(r, s->order);
            const auto &scheme = s->schemes[static_cast<std::size_t>(k - 1)];
            const double dt = s->grid.gap(c);

            s->model.field(s->states.col(c), theta, s->fvals.col(c));
            detail::combine_columns(scheme, s->states, s->fvals, r, dt, s->states.col(r));
            if (!s->states.col(r).allFinite() ||
                s->states.col(r).cwiseAbs().maxCoeff() > kDivergenceThreshold) {
                return kInf;
            }

            // S_r = sum_j a_j S_{r-1-j}
            //     + dt sum_j b_j (Jx(x_{r-1-j}) S_{r-1-j} + [Jth(x_{r-1-j}) | 0]).
            s->snew.setZero();
            for (int j = 0; j < k; ++j) {
                const int cc = r - 1 - j;
                const Matrix &sj = s->sens[static_cast<std::size_t>(cc % s->order)];
                const double aj = scheme.a[static_cast<std::size_t>(j)];
                const double bj = scheme.b[static_cast<std::size_t>(j)];
                if (aj != 0.0) { s->snew.noalias() += aj * sj; }
                s->model.state_jacobian(s->states.col(cc), theta, s->jx);
                s->snew.noalias() += (dt * bj) * (s->jx * sj);
                s->model.param_jacobian(s->states.col(cc), theta, s->jth);
                s->snew.leftCols(p).noalias() += (dt * bj) * s->jth;
            }
            s->sens[static_cast<std::size_t>(r % s->order)] = s->snew;

            s->resid = s->states.col(r) - s->y.col(r);
            value += s->resid.squaredNorm();
            g.noalias() += 2.0 * (s->snew.transpose() * s->resid);
        }
        return std::isfinite(value) ? value : kInf;
    };
}

ShootingResult shooting_lsq(const OdeModel &model, const TimeSeries &observations,
                            const Vector &theta0, int order, const MinimizerConfig &config) {
    const int d = model.state_dim;
    const int p = model.param_dim;
    const int T = observations.length();
    if (theta0.size() != p) { throw ContractError("shooting_lsq: parameter dimension mismatch"); }
    if (!observations.values.allFinite()) {
        throw ContractError("shooting_lsq: observations must be finite");
    }

    const ObjectiveFn fn = make_shooting_objective(model, observations, order);
    const auto &grid = observations.grid;

    ShootingResult out;
    Vector z0(p + d);
    z0.head(p) = theta0;
    z0.tail(d) = observations.values.col(0);

    MinimizeResult res;
    try {
        res = minimize_smooth(fn, z0, config);
    } catch (const NumericError &) {
        // Not even the start point simulates to a finite trajectory.
        out.theta = theta0;
        out.initial_state = observations.values.col(0);
        out.objective = kInf;
        out.failed = true;
        out.predicted =
            TimeSeries(grid, Matrix::Constant(d, T, std::numeric_limits<double>::quiet_NaN()));
        return out;
    }

    out.theta = res.point.head(p);
    out.initial_state = res.point.tail(d);
    out.objective = res.value;
    out.iterations = res.iterations;
    out.failed = false;
    out.predicted = forward_predict(model, out.theta, out.initial_state, grid, order);
    return out;
}

} // namespace bcdprox
