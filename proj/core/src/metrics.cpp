#include "bcdprox/metrics.hpp"

#include <limits>

namespace bcdprox {

namespace {
void check_shapes(const TimeSeries &a, const TimeSeries &b, const char *what) {
    if (a.dim() != b.dim() || a.length() != b.length()) {
        throw ContractError(std::string(what) + ": series shapes differ");
    }
}
} // namespace

double prediction_error(const TimeSeries &truth, const TimeSeries &predicted) {
    check_shapes(truth, predicted, "prediction_error");
    if (!predicted.values.allFinite() || !truth.values.allFinite()) {
        return std::numeric_limits<double>::infinity();
    }
    return (truth.values - predicted.values).norm();
}

Vector parameter_error(const Vector &theta_true, const Vector &theta_est) {
    if (theta_true.size() != theta_est.size()) {
        throw ContractError("parameter_error: parameter sizes differ");
    }
    return (theta_true - theta_est).cwiseAbs();
}

double estimation_error(const TimeSeries &truth, const TimeSeries &estimated) {
    check_shapes(truth, estimated, "estimation_error");
    if (!estimated.values.allFinite() || !truth.values.allFinite()) {
        return std::numeric_limits<double>::infinity();
    }
    const int t = truth.length();
    double acc = 0.0;
    for (int i = 0; i < t; ++i) { acc += (truth.values.col(i) - estimated.values.col(i)).norm(); }
    return acc / t;
}

} // namespace bcdprox
