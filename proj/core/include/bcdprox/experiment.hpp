#pragma once

#include <filesystem>
#include <optional>

#include "bcdprox/dataset.hpp"
#include "bcdprox/ekf.hpp"
#include "bcdprox/solver.hpp"

namespace bcdprox {

enum class Method { bcdprox, bcdprox_split, ekf, lsq };

const char *to_string(Method m);
std::optional<Method> method_from_string(const std::string &name);

struct ThetaInitSpec {
    double sigma2 = 0.0;
    std::uint64_t seed = 0;
};

/// Declarative experiment description. Replicate-level randomness is fully
/// derived from the two seeds, so a config determines its outputs.
struct ExperimentConfig {
    std::string model;
    std::optional<double> t0, t_end, dt; ///< registry grid when unset
    NoiseSpec noise;
    double lambda = 1.0;
    int order = 3;
    ThetaInitSpec theta_init;
    std::optional<Vector> theta_true; ///< override of the registry truth
    int replicates = 1;
    std::vector<Method> methods{Method::bcdprox};
    std::string out_dir = "out";

    // Runtime knobs (not part of the config file).
    SolverConfig solver;
    EkfConfig ekf;
    int threads = 0;         ///< 0: BCDPROX_THREADS env or hardware concurrency
    bool write_files = true; ///< disable to keep results in memory only

    /// Sample grid: explicit (t0, t_end, dt) when given, registry otherwise.
    TimeGrid resolve_grid() const;
};

struct RunRow {
    int replicate = 0;
    Method method = Method::bcdprox;
    double lambda = 1.0;
    int order = 3;
    double pred_error = 0.0;
    double est_error = 0.0;
    Vector param_errors;
    Vector theta_est;
    int iterations = 0;
    double seconds = 0.0;
    std::string status; ///< ok | diverged | failed
    std::uint64_t input_hash = 0; ///< hash of the (Y, theta0) pair the method saw
    SolverTrace trace; ///< populated for the proximal-descent methods
    /// Fidelity of the returned predicted trajectory and its squared-norm
    /// scale (proximal-descent methods, finite predictions only).
    double predicted_fidelity = std::numeric_limits<double>::quiet_NaN();
    double predicted_scale = std::numeric_limits<double>::quiet_NaN();
};

struct RunResultTable {
    std::vector<RunRow> rows;
    int param_dim = 0;
};

/// Deterministic child seed for replicate-level streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// FNV-1a over the raw bytes of the observations and initial parameters.
std::uint64_t hash_inputs(const Matrix &observations, const Vector &theta0);

/// Runs every configured method on every replicate. Within a replicate all
/// methods receive the identical observations and initial parameters.
/// Replicate/method tasks may run on a worker pool; rows are assembled in
/// (replicate, method) order so results are schedule-independent. Individual
/// method failures are recorded in their row and never abort the sweep.
RunResultTable run_experiment(const ExperimentConfig &config);

enum class SweepAxis { lambda, noise_variance, theta_sigma2 };

const char *to_string(SweepAxis a);

struct SweepPoint {
    double value = 0.0;
    RunResultTable table;
};

/// run_experiment once per axis value. Seeds are not re-derived, so sweep
/// points share their datasets and initializations wherever the axis leaves
/// them untouched (a lambda sweep sees identical observations everywhere).
std::vector<SweepPoint> sweep(const ExperimentConfig &base, SweepAxis axis,
                              const std::vector<double> &values);

/// `replicate,method,lambda,order,pred_error,est_error,param_err_0..,iters,seconds,status`
void write_results_csv(const std::filesystem::path &path, const RunResultTable &table);

/// `iter,E,theta_0..,pred_error`
void write_trace_csv(const std::filesystem::path &path, const SolverTrace &trace, int param_dim);

/// Per-value means across replicates: mean prediction/estimation error and
/// mean recovered parameters per method.
void write_sweep_summary_csv(const std::filesystem::path &path, SweepAxis axis,
                             const std::vector<SweepPoint> &points);

/// Dataset, results and trace files for one finished experiment.
void write_experiment_outputs(const ExperimentConfig &config, const RunResultTable &table);

} // namespace bcdprox
