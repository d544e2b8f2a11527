#include "bcdprox/ekf.hpp"

#include <Eigen/Dense>

namespace bcdprox {

namespace {

// Symmetrize and clip tiny negative eigenvalues. Errors out when the
// clipped mass exceeds 1e-6 of the trace.
void repair_covariance(Matrix &p) {
    p = ((p + p.transpose()) * 0.5).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(p);
    const Vector &ev = es.eigenvalues();
    if (ev.minCoeff() >= 0.0) { return; }
    double clipped = 0.0;
    Vector fixed = ev;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (fixed[i] < 0.0) {
            clipped += -fixed[i];
            fixed[i] = 0.0;
        }
    }
    const double trace = std::max(p.trace(), 0.0);
    if (clipped > 1e-6 * std::max(trace, 1e-300)) {
        throw NumericError("ekf_run: covariance lost positive semidefiniteness");
    }
    p = es.eigenvectors() * fixed.asDiagonal() * es.eigenvectors().transpose();
    p = ((p + p.transpose()) * 0.5).eval();
}

} // namespace

EkfResult ekf_run(const OdeModel &model, const TimeSeries &observations, const Vector &theta0,
                  const EkfConfig &config) {
    const int d = model.state_dim;
    const int p = model.param_dim;
    const int n = d + p;
    const int T = observations.length();
    if (observations.dim() != d) { throw ContractError("ekf_run: observation dimension mismatch"); }
    if (theta0.size() != p) { throw ContractError("ekf_run: parameter dimension mismatch"); }
    if (!observations.values.allFinite()) { throw ContractError("ekf_run: observations must be finite"); }
    if (!(config.initial_state_covariance > 0.0) || !(config.measurement_noise_variance > 0.0) ||
        !(config.process_noise_variance > 0.0)) {
        throw ContractError("ekf_run: covariance settings must be positive");
    }

    Matrix q = Matrix::Zero(n, n);
    q.topLeftCorner(d, d) = config.process_noise_variance * Matrix::Identity(d, d);
    q.bottomRightCorner(p, p) = config.parameter_jitter * Matrix::Identity(p, p);
    const Matrix r = config.measurement_noise_variance * Matrix::Identity(d, d);

    // xi = (x; theta), observed through H = (I 0).
    Vector xi(n);
    xi.head(d) = observations.values.col(0);
    xi.tail(p) = theta0;
    Matrix cov = config.initial_state_covariance * Matrix::Identity(n, n);

    EkfResult result;
    result.steps.reserve(static_cast<std::size_t>(T));
    Matrix states(d, T);

    Vector f(d), innovation(d);
    Matrix jx(d, d), jth(d, p), fjac(n, n), s(d, d), k(n, d);

    auto update = [&](int t) {
        innovation = observations.values.col(t) - xi.head(d);
        s = cov.topLeftCorner(d, d) + r;
        // K = P H^T S^{-1}: solve S K^T = (P H^T)^T.
        k = s.ldlt().solve(cov.leftCols(d).transpose()).transpose();
        xi.noalias() += k * innovation;
        // Joseph form keeps the update PSD under round-off.
        Matrix ikh = Matrix::Identity(n, n);
        ikh.leftCols(d).noalias() -= k;
        cov = ikh * cov * ikh.transpose() + k * r * k.transpose();
        repair_covariance(cov);
        if (!xi.allFinite()) { throw NumericError("ekf_run: joint state turned non-finite"); }
        states.col(t) = xi.head(d);
        result.steps.push_back(JointState{xi, cov});
    };

    update(0);
    for (int i = 0; i + 1 < T; ++i) {
        const double dt = observations.grid.gap(i);
        // Predict: x <- x + f(x, theta) dt, theta <- theta.
        model.field(xi.head(d), xi.tail(p), f);
        model.state_jacobian(xi.head(d), xi.tail(p), jx);
        model.param_jacobian(xi.head(d), xi.tail(p), jth);
        xi.head(d).noalias() += dt * f;
        fjac.setIdentity();
        fjac.topLeftCorner(d, d).noalias() += dt * jx;
        fjac.topRightCorner(d, p) = dt * jth;
        cov = fjac * cov * fjac.transpose() + q;
        repair_covariance(cov);
        if (!xi.allFinite()) { throw NumericError("ekf_run: prediction turned non-finite"); }
        update(i + 1);
    }

    result.theta = xi.tail(p);
    result.states = TimeSeries(observations.grid, std::move(states));
    return result;
}

} // namespace bcdprox
