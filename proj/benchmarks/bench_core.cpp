#include <benchmark/benchmark.h>

#include "bcdprox/dataset.hpp"
#include "bcdprox/models.hpp"
#include "bcdprox/objective.hpp"
#include "bcdprox/rk.hpp"
#include "bcdprox/solver.hpp"

namespace {

using namespace bcdprox;

Dataset make_data(const std::string &name, double variance) {
    NoiseSpec noise;
    noise.variance = variance;
    noise.seed = 12345;
    return generate_dataset(benchmark_registry(name), noise);
}

void BM_FidelityGradient(benchmark::State &state, const std::string &name) {
    const Dataset ds = make_data(name, 0.5);
    const FidelityProblem problem(benchmark_registry(name).model, ds.grid, 3);
    ObjectiveEvaluator eval(problem);
    ProxAnchor anchor(ds.observed.values, 1.0);
    Matrix grad(ds.observed.dim(), ds.observed.length());
    for (auto _ : state) {
        MatrixRef gref(grad);
        benchmark::DoNotOptimize(
            eval.value_grad_states(ds.observed.values, ds.theta_true, &anchor, gref));
    }
}

void BM_RkIntegrate(benchmark::State &state) {
    const BenchmarkSetup setup = benchmark_registry("lorenz96");
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            rk_integrate(setup.model, setup.theta_true, setup.initial_state, setup.grid));
    }
}

void BM_SolveLotkaVolterra(benchmark::State &state) {
    const Dataset ds = make_data("lotka_volterra", 0.5);
    const FidelityProblem problem(benchmark_registry("lotka_volterra").model, ds.grid, 3);
    const Vector theta0 = perturb_parameters(ds.theta_true, 1.0, 9);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bcd_prox(problem, ds.observed, theta0, SolverConfig{}));
    }
}

} // namespace

BENCHMARK_CAPTURE(BM_FidelityGradient, fitzhugh_nagumo, std::string("fitzhugh_nagumo"));
BENCHMARK_CAPTURE(BM_FidelityGradient, lorenz96, std::string("lorenz96"));
BENCHMARK(BM_RkIntegrate)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveLotkaVolterra)->Unit(benchmark::kMillisecond);

int main(int argc, char **argv) {
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) { return 1; }
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
