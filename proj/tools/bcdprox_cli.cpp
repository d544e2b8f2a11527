// Command-line front end: dataset generation, fitting, sweeps and method
// comparisons driven by a JSON experiment config.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bcdprox/config.hpp"
#include "bcdprox/csv.hpp"
#include "bcdprox/experiment.hpp"

namespace {

using namespace bcdprox;

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitNumericalFailure = 2;

struct CommonArgs {
    std::string config_path;
    std::string out_override;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App *cmd, CommonArgs &args) {
    cmd->add_option("--config", args.config_path, "Experiment config (JSON)")->required();
    cmd->add_option("--out", args.out_override, "Override the output directory");
    cmd->add_option("--seed", args.seed, "Override both master seeds (noise: S, init: S+1)")
        ->each([&args](const std::string &) { args.seed_set = true; });
}

ExperimentConfig load(const CommonArgs &args) {
    ExperimentConfig cfg = load_config(args.config_path);
    if (args.seed_set) {
        cfg.noise.seed = args.seed;
        cfg.theta_init.seed = args.seed + 1;
    }
    if (!args.out_override.empty()) { cfg.out_dir = args.out_override; }
    return cfg;
}

bool any_ok(const RunResultTable &table) {
    for (const RunRow &row : table.rows) {
        if (row.status == "ok") { return true; }
    }
    return false;
}

void print_table(const RunResultTable &table) {
    std::printf("%-9s %-14s %-12s %-12s %-8s %-9s %s\n", "replicate", "method", "pred_error",
                "est_error", "iters", "seconds", "status");
    for (const RunRow &row : table.rows) {
        std::printf("%-9d %-14s %-12.5g %-12.5g %-8d %-9.3f %s\n", row.replicate,
                    to_string(row.method), row.pred_error, row.est_error, row.iterations,
                    row.seconds, row.status.c_str());
    }
}

void print_method_means(const RunResultTable &table) {
    for (const Method m : {Method::bcdprox, Method::bcdprox_split, Method::ekf, Method::lsq}) {
        int n = 0;
        double pred = 0.0, est = 0.0;
        for (const RunRow &row : table.rows) {
            if (row.method != m || row.status != "ok") { continue; }
            ++n;
            pred += row.pred_error;
            est += row.est_error;
        }
        if (n == 0) { continue; }
        std::printf("%-14s mean pred_error %.5g, mean est_error %.5g over %d ok replicate(s)\n",
                    to_string(m), pred / n, est / n, n);
    }
}

int run_generate(const ExperimentConfig &cfg) {
    BenchmarkSetup setup = benchmark_registry(cfg.model, cfg.noise.seed);
    setup.grid = cfg.resolve_grid();
    if (cfg.theta_true.has_value()) { setup.theta_true = *cfg.theta_true; }
    const auto dir = std::filesystem::path(cfg.out_dir);
    std::filesystem::create_directories(dir);
    for (int r = 0; r < cfg.replicates; ++r) {
        NoiseSpec child = cfg.noise;
        child.seed = derive_seed(cfg.noise.seed, static_cast<std::uint64_t>(r));
        const Dataset ds = generate_dataset(setup, child);
        if (r == 0) { write_timeseries_csv(dir / "clean.csv", ds.clean, "x"); }
        write_timeseries_csv(dir / ("observed_r" + std::to_string(r) + ".csv"), ds.observed, "y");
    }
    std::printf("wrote %d observation file(s) and clean.csv to %s\n", cfg.replicates,
                cfg.out_dir.c_str());
    return kExitOk;
}

int run_fit(ExperimentConfig cfg, const std::string &method_override) {
    if (!method_override.empty()) {
        const auto method = method_from_string(method_override);
        if (!method.has_value()) {
            std::fprintf(stderr, "error: unknown method '%s'\n", method_override.c_str());
            return kExitConfigError;
        }
        cfg.methods = {*method};
    }
    const RunResultTable table = run_experiment(cfg);
    print_table(table);
    return any_ok(table) ? kExitOk : kExitNumericalFailure;
}

int run_sweep(ExperimentConfig cfg, const std::vector<double> &lambdas,
              const std::vector<double> &variances, const std::vector<double> &sigmas) {
    const int axes = (!lambdas.empty() ? 1 : 0) + (!variances.empty() ? 1 : 0) +
                     (!sigmas.empty() ? 1 : 0);
    if (axes != 1) {
        std::fprintf(stderr, "error: pass exactly one of --lambda, --noise-variance, "
                             "--theta-sigma2\n");
        return kExitConfigError;
    }
    const SweepAxis axis = !lambdas.empty()    ? SweepAxis::lambda
                           : !variances.empty() ? SweepAxis::noise_variance
                                                : SweepAxis::theta_sigma2;
    const std::vector<double> &values =
        !lambdas.empty() ? lambdas : (!variances.empty() ? variances : sigmas);

    const auto points = sweep(cfg, axis, values);
    const auto dir = std::filesystem::path(cfg.out_dir);
    std::filesystem::create_directories(dir);
    bool ok = false;
    for (const SweepPoint &point : points) {
        write_results_csv(dir / ("results_" + std::string(to_string(axis)) + "_" +
                                 format_double(point.value) + ".csv"),
                          point.table);
        ok = ok || any_ok(point.table);
    }
    write_sweep_summary_csv(dir / "sweep_summary.csv", axis, points);
    std::printf("swept %s over %zu value(s); summary in %s/sweep_summary.csv\n", to_string(axis),
                points.size(), cfg.out_dir.c_str());
    return ok ? kExitOk : kExitNumericalFailure;
}

int run_compare(const ExperimentConfig &cfg) {
    const RunResultTable table = run_experiment(cfg);
    print_table(table);
    std::printf("\n");
    print_method_means(table);
    return any_ok(table) ? kExitOk : kExitNumericalFailure;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Joint state filtering and ODE parameter estimation"};
    app.require_subcommand(1);

    CommonArgs generate_args, fit_args, sweep_args, compare_args;
    std::string fit_method;
    std::vector<double> sweep_lambdas, sweep_variances, sweep_sigmas;

    CLI::App *generate = app.add_subcommand("generate", "Write dataset CSV files");
    add_common(generate, generate_args);

    CLI::App *fit = app.add_subcommand("fit", "Run the configured methods");
    add_common(fit, fit_args);
    fit->add_option("--method", fit_method, "Run a single method (bcdprox, bcdprox_split, ekf, lsq)");

    CLI::App *sweep_cmd = app.add_subcommand("sweep", "Sweep one experiment axis");
    add_common(sweep_cmd, sweep_args);
    sweep_cmd->add_option("--lambda", sweep_lambdas, "Proximal weights")->delimiter(',');
    sweep_cmd->add_option("--noise-variance", sweep_variances, "Observation noise variances")
        ->delimiter(',');
    sweep_cmd->add_option("--theta-sigma2", sweep_sigmas, "Initialization variances")
        ->delimiter(',');

    CLI::App *compare = app.add_subcommand("compare", "Run all configured methods and summarize");
    add_common(compare, compare_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) { return run_generate(load(generate_args)); }
        if (fit->parsed()) { return run_fit(load(fit_args), fit_method); }
        if (sweep_cmd->parsed()) {
            return run_sweep(load(sweep_args), sweep_lambdas, sweep_variances, sweep_sigmas);
        }
        if (compare->parsed()) { return run_compare(load(compare_args)); }
    } catch (const bcdprox::ContractError &e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumericalFailure;
    }
    return kExitConfigError;
}
