#include "bcdprox/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <thread>

#include "bcdprox/csv.hpp"
#include "bcdprox/metrics.hpp"
#include "bcdprox/rng.hpp"
#include "bcdprox/shooting.hpp"

namespace bcdprox {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int resolve_threads(int configured, int ntasks) {
    int threads = configured;
    if (threads <= 0) {
        if (const char *env = std::getenv("BCDPROX_THREADS")) { threads = std::atoi(env); }
    }
    if (threads <= 0) { threads = static_cast<int>(std::thread::hardware_concurrency()); }
    threads = std::max(1, std::min(threads, ntasks));
    return threads;
}

void run_parallel(int threads, int ntasks, const std::function<void(int)> &task) {
    if (ntasks <= 0) { return; }
    if (threads <= 1) {
        for (int i = 0; i < ntasks; ++i) { task(i); }
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= ntasks) { break; }
            try {
                task(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) { first_error = std::current_exception(); }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) { pool.emplace_back(worker); }
    for (auto &th : pool) { th.join(); }
    if (first_error) { std::rethrow_exception(first_error); }
}

struct ReplicateInputs {
    Dataset dataset;
    Vector theta0;
};

RunRow run_one(const ExperimentConfig &config, const BenchmarkSetup &setup,
               const ReplicateInputs &inputs, int replicate, Method method) {
    RunRow row;
    row.replicate = replicate;
    row.method = method;
    row.lambda = config.lambda;
    row.order = config.order;
    row.input_hash = hash_inputs(inputs.dataset.observed.values, inputs.theta0);

    const Vector &theta_true = inputs.dataset.theta_true;
    const auto t_start = std::chrono::steady_clock::now();
    try {
        switch (method) {
        case Method::bcdprox:
        case Method::bcdprox_split: {
            FidelityProblem problem(setup.model, inputs.dataset.grid, config.order);
            SolverConfig sc = config.solver;
            sc.lambda = config.lambda;
            sc.order = config.order;
            sc.schedule =
                (method == Method::bcdprox) ? Schedule::two_block : Schedule::three_block_split;
            EstimationResult res =
                (method == Method::bcdprox)
                    ? bcd_prox(problem, inputs.dataset.observed, inputs.theta0, sc,
                               &inputs.dataset.clean)
                    : bcd_prox_split(problem, inputs.dataset.observed, inputs.theta0, sc,
                                     &inputs.dataset.clean);
            row.theta_est = res.theta;
            row.pred_error = prediction_error(inputs.dataset.clean, res.predicted);
            row.est_error = estimation_error(inputs.dataset.clean, res.states);
            row.param_errors = parameter_error(theta_true, res.theta);
            row.iterations = static_cast<int>(res.trace.records.size());
            row.status = res.diverged ? "diverged" : "ok";
            if (!res.diverged) {
                row.predicted_fidelity = fidelity(problem, res.predicted.values, res.theta);
                row.predicted_scale = 1.0 + res.predicted.values.squaredNorm();
            }
            row.trace = std::move(res.trace);
            break;
        }
        case Method::ekf: {
            EkfResult res = ekf_run(setup.model, inputs.dataset.observed, inputs.theta0, config.ekf);
            row.theta_est = res.theta;
            row.est_error = estimation_error(inputs.dataset.clean, res.states);
            row.param_errors = parameter_error(theta_true, res.theta);
            row.iterations = inputs.dataset.grid.size();
            // Predictions re-integrate from the filter's own initial state.
            try {
                TimeSeries predicted = forward_predict(setup.model, res.theta,
                                                       res.states.values.col(0),
                                                       inputs.dataset.grid, config.order);
                row.pred_error = prediction_error(inputs.dataset.clean, predicted);
            } catch (const DivergedError &) {
                row.pred_error = kInf;
            }
            row.status = "ok";
            break;
        }
        case Method::lsq: {
            ShootingResult res =
                shooting_lsq(setup.model, inputs.dataset.observed, inputs.theta0, config.order);
            row.theta_est = res.theta;
            row.pred_error = prediction_error(inputs.dataset.clean, res.predicted);
            row.est_error = estimation_error(inputs.dataset.clean, res.predicted);
            row.param_errors = parameter_error(theta_true, res.theta);
            row.iterations = res.iterations;
            row.status = res.failed ? "failed" : "ok";
            break;
        }
        }
    } catch (const std::exception &) {
        row.status = "failed";
        row.pred_error = kInf;
        row.est_error = kInf;
        row.param_errors = Vector::Constant(theta_true.size(), kInf);
        row.theta_est = Vector::Constant(theta_true.size(),
                                         std::numeric_limits<double>::quiet_NaN());
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return row;
}

} // namespace

const char *to_string(Method m) {
    switch (m) {
    case Method::bcdprox: return "bcdprox";
    case Method::bcdprox_split: return "bcdprox_split";
    case Method::ekf: return "ekf";
    case Method::lsq: return "lsq";
    }
    return "unknown";
}

std::optional<Method> method_from_string(const std::string &name) {
    if (name == "bcdprox") { return Method::bcdprox; }
    if (name == "bcdprox_split") { return Method::bcdprox_split; }
    if (name == "ekf") { return Method::ekf; }
    if (name == "lsq") { return Method::lsq; }
    return std::nullopt;
}

const char *to_string(SweepAxis a) {
    switch (a) {
    case SweepAxis::lambda: return "lambda";
    case SweepAxis::noise_variance: return "noise_variance";
    case SweepAxis::theta_sigma2: return "theta_sigma2";
    }
    return "unknown";
}

TimeGrid ExperimentConfig::resolve_grid() const {
    if (t0.has_value() || t_end.has_value() || dt.has_value()) {
        if (!(t0.has_value() && t_end.has_value() && dt.has_value())) {
            throw ContractError("ExperimentConfig: t0, t_end and dt must be given together");
        }
        return uniform_grid(*t0, *t_end, *dt);
    }
    return benchmark_registry(model, noise.seed).grid;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(mix64(master + 0x9E3779B97F4A7C15ull) ^ (index + 0x2545F4914F6CDD1Dull));
}

std::uint64_t hash_inputs(const Matrix &observations, const Vector &theta0) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto absorb = [&h](const double *data, std::ptrdiff_t n) {
        const auto *bytes = reinterpret_cast<const unsigned char *>(data);
        for (std::ptrdiff_t i = 0; i < n * static_cast<std::ptrdiff_t>(sizeof(double)); ++i) {
            h ^= bytes[i];
            h *= 0x100000001b3ull;
        }
    };
    absorb(observations.data(), observations.size());
    absorb(theta0.data(), theta0.size());
    return h;
}

RunResultTable run_experiment(const ExperimentConfig &config) {
    if (config.replicates < 1) { throw ContractError("run_experiment: replicates must be >= 1"); }
    if (config.methods.empty()) { throw ContractError("run_experiment: no methods configured"); }
    if (!is_benchmark_name(config.model)) {
        throw ContractError("run_experiment: unknown model '" + config.model + "'");
    }

    BenchmarkSetup setup = benchmark_registry(config.model, config.noise.seed);
    setup.grid = config.resolve_grid();
    if (config.theta_true.has_value()) {
        if (config.theta_true->size() != setup.model.param_dim) {
            throw ContractError("run_experiment: theta_true override dimension mismatch");
        }
        setup.theta_true = *config.theta_true;
    }

    // Shared inputs per replicate: identical observations and initialization
    // for every method.
    std::vector<ReplicateInputs> inputs(static_cast<std::size_t>(config.replicates));
    for (int r = 0; r < config.replicates; ++r) {
        NoiseSpec child = config.noise;
        child.seed = derive_seed(config.noise.seed, static_cast<std::uint64_t>(r));
        auto &in = inputs[static_cast<std::size_t>(r)];
        in.dataset = generate_dataset(setup, child);
        in.theta0 = perturb_parameters(setup.theta_true, config.theta_init.sigma2,
                                       derive_seed(config.theta_init.seed,
                                                   static_cast<std::uint64_t>(r)));
    }

    const int nmethods = static_cast<int>(config.methods.size());
    const int ntasks = config.replicates * nmethods;
    RunResultTable table;
    table.param_dim = setup.model.param_dim;
    table.rows.resize(static_cast<std::size_t>(ntasks));

    run_parallel(resolve_threads(config.threads, ntasks), ntasks, [&](int i) {
        const int r = i / nmethods;
        const Method method = config.methods[static_cast<std::size_t>(i % nmethods)];
        table.rows[static_cast<std::size_t>(i)] =
            run_one(config, setup, inputs[static_cast<std::size_t>(r)], r, method);
    });

    if (config.write_files && !config.out_dir.empty()) {
        write_experiment_outputs(config, table);
        const auto dir = std::filesystem::path(config.out_dir);
        write_timeseries_csv(dir / "clean.csv", inputs[0].dataset.clean, "x");
        for (int r = 0; r < config.replicates; ++r) {
            write_timeseries_csv(dir / ("observed_r" + std::to_string(r) + ".csv"),
                                 inputs[static_cast<std::size_t>(r)].dataset.observed, "y");
        }
    }
    return table;
}

std::vector<SweepPoint> sweep(const ExperimentConfig &base, SweepAxis axis,
                              const std::vector<double> &values) {
    if (values.empty()) { throw ContractError("sweep: need at least one axis value"); }
    std::vector<SweepPoint> points;
    points.reserve(values.size());
    for (const double v : values) {
        ExperimentConfig cfg = base;
        cfg.write_files = false;
        switch (axis) {
        case SweepAxis::lambda: cfg.lambda = v; break;
        case SweepAxis::noise_variance: cfg.noise.variance = v; break;
        case SweepAxis::theta_sigma2: cfg.theta_init.sigma2 = v; break;
        }
        points.push_back(SweepPoint{v, run_experiment(cfg)});
    }
    return points;
}

void write_results_csv(const std::filesystem::path &path, const RunResultTable &table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) { throw NumericError("write_results_csv: cannot open " + path.string()); }
    out << "replicate,method,lambda,order,pred_error,est_error";
    for (int j = 0; j < table.param_dim; ++j) { out << ",param_err_" << j; }
    out << ",iters,seconds,status\n";
    for (const RunRow &row : table.rows) {
        out << row.replicate << "," << to_string(row.method) << "," << format_double(row.lambda)
            << "," << row.order << "," << format_double(row.pred_error) << ","
            << format_double(row.est_error);
        for (int j = 0; j < table.param_dim; ++j) {
            out << "," << format_double(row.param_errors.size() > static_cast<Eigen::Index>(j) ? row.param_errors[j] : kInf);
        }
        out << "," << row.iterations << "," << format_double(row.seconds) << "," << row.status
            << "\n";
    }
}

void write_trace_csv(const std::filesystem::path &path, const SolverTrace &trace, int param_dim) {
    std::ofstream out(path, std::ios::binary);
    if (!out) { throw NumericError("write_trace_csv: cannot open " + path.string()); }
    out << "iter,E";
    for (int j = 0; j < param_dim; ++j) { out << ",theta_" << j; }
    out << ",pred_error\n";
    for (const TraceRecord &rec : trace.records) {
        out << rec.iteration << "," << format_double(rec.fidelity_value);
        for (int j = 0; j < param_dim; ++j) { out << "," << format_double(rec.theta[j]); }
        out << "," << format_double(rec.prediction_error) << "\n";
    }
}

void write_sweep_summary_csv(const std::filesystem::path &path, SweepAxis axis,
                             const std::vector<SweepPoint> &points) {
    std::ofstream out(path, std::ios::binary);
    if (!out) { throw NumericError("write_sweep_summary_csv: cannot open " + path.string()); }
    const int p = points.empty() ? 0 : points.front().table.param_dim;
    out << to_string(axis) << ",method,ok_count,mean_pred_error,mean_est_error";
    for (int j = 0; j < p; ++j) { out << ",mean_theta_" << j; }
    out << "\n";
    for (const SweepPoint &point : points) {
        // Aggregate per method, over rows with finite errors.
        std::vector<Method> seen;
        for (const RunRow &row : point.table.rows) {
            if (std::find(seen.begin(), seen.end(), row.method) == seen.end()) {
                seen.push_back(row.method);
            }
        }
        for (const Method m : seen) {
            int ok = 0;
            double pred = 0.0, est = 0.0;
            Vector theta_sum = Vector::Zero(p);
            for (const RunRow &row : point.table.rows) {
                if (row.method != m) { continue; }
                if (!std::isfinite(row.pred_error) || row.theta_est.size() != p) { continue; }
                ++ok;
                pred += row.pred_error;
                est += row.est_error;
                theta_sum += row.theta_est;
            }
            out << format_double(point.value) << "," << to_string(m) << "," << ok;
            const double denom = ok > 0 ? ok : 1;
            out << "," << format_double(ok > 0 ? pred / denom : kInf) << ","
                << format_double(ok > 0 ? est / denom : kInf);
            for (int j = 0; j < p; ++j) {
                out << ","
                    << format_double(ok > 0 ? theta_sum[j] / denom
                                            : std::numeric_limits<double>::quiet_NaN());
            }
            out << "\n";
        }
    }
}

void write_experiment_outputs(const ExperimentConfig &config, const RunResultTable &table) {
    const auto dir = std::filesystem::path(config.out_dir);
    std::filesystem::create_directories(dir);
    write_results_csv(dir / "results.csv", table);
    for (const RunRow &row : table.rows) {
        if (row.method == Method::bcdprox || row.method == Method::bcdprox_split) {
            if (!row.trace.records.empty()) {
                write_trace_csv(dir / ("trace_" + std::string(to_string(row.method)) + "_r" +
                                       std::to_string(row.replicate) + ".csv"),
                                row.trace, table.param_dim);
            }
        }
    }
}

} // namespace bcdprox
