#pragma once

#include <Eigen/Core>
#include <vector>

#include "bcdprox/errors.hpp"

namespace bcdprox {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ConstVectorRef = Eigen::Ref<const Eigen::VectorXd>;
using VectorRef = Eigen::Ref<Eigen::VectorXd>;
using ConstMatrixRef = Eigen::Ref<const Eigen::MatrixXd>;
using MatrixRef = Eigen::Ref<Eigen::MatrixXd>;

/// Strictly increasing sample times t_1..t_T with cached gaps.
class TimeGrid {
  public:
    TimeGrid() = default;
    explicit TimeGrid(std::vector<double> times);

    int size() const { return static_cast<int>(times_.size()); }
    double time(int i) const { return times_[static_cast<std::size_t>(i)]; }
    /// Gap t_{i+1} - t_i for i in [0, size-2].
    double gap(int i) const { return gaps_[static_cast<std::size_t>(i)]; }
    const std::vector<double> &times() const { return times_; }
    const std::vector<double> &gaps() const { return gaps_; }

    bool is_uniform(double tol = 1e-12) const;

    bool operator==(const TimeGrid &other) const { return times_ == other.times_; }

  private:
    std::vector<double> times_;
    std::vector<double> gaps_;
};

/// Uniform grid t0, t0+dt, ..., covering [t0, t_end]; the end point is
/// included when it sits on the step lattice (within round-off).
TimeGrid uniform_grid(double t0, double t_end, double dt);

/// Uniform grid with an explicit sample count.
TimeGrid uniform_grid_count(double t0, double dt, int count);

/// T state vectors on a grid, stored as a d x T matrix (column i is the
/// state at t_i).
struct TimeSeries {
    TimeGrid grid;
    Matrix values;

    TimeSeries() = default;
    TimeSeries(TimeGrid g, Matrix v);

    int dim() const { return static_cast<int>(values.rows()); }
    int length() const { return static_cast<int>(values.cols()); }
};

} // namespace bcdprox
