#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "bcdprox/dataset.hpp"
#include "bcdprox/models.hpp"
#include "bcdprox/rk.hpp"
#include "bcdprox/solver.hpp"
#include "test_support.hpp"

using namespace bcdprox;

namespace {

TimeSeries rk_integrate_clean(const BenchmarkSetup &setup, const TimeGrid &grid) {
    return rk_integrate(setup.model, setup.theta_true, setup.initial_state, grid);
}

// Closed-form weighted least squares for the order-1 residuals of a model
// that is linear in theta.
Vector normal_equations_theta(const FidelityProblem &problem, const Matrix &states) {
    const OdeModel &model = problem.model();
    const int d = model.state_dim;
    const int p = model.param_dim;
    Matrix ata = Matrix::Zero(p, p);
    Vector atb = Vector::Zero(p);
    Vector f0(d);
    Matrix f1(d, p);
    for (int r = 1; r < problem.length(); ++r) {
        const double dt = problem.grid().gap(r - 1);
        model.linear->f0(states.col(r - 1), f0);
        model.linear->f1(states.col(r - 1), f1);
        const Matrix a = dt * f1;
        const Vector b = states.col(r) - states.col(r - 1) - dt * f0;
        ata.noalias() += a.transpose() * a;
        atb.noalias() += a.transpose() * b;
    }
    return ata.ldlt().solve(atb);
}

Dataset lv_dataset(double variance, std::uint64_t seed) {
    NoiseSpec noise;
    noise.kind = NoiseSpec::Kind::gaussian;
    noise.variance = variance;
    noise.seed = seed;
    return generate_dataset(benchmark_registry("lotka_volterra"), noise);
}

} // namespace

TEST_SUITE("solver") {

    TEST_CASE("theta step matches the normal-equations solution") {
        CounterRng rng(71);
        const BenchmarkSetup setup = benchmark_registry("lotka_volterra");
        const FidelityProblem problem(setup.model, setup.grid, 1);
        const Matrix states =
            test_support::random_matrix(rng, 2, setup.grid.size(), 0.5, 5.0);
        const Vector oracle = normal_equations_theta(problem, states);
        const Vector theta = theta_step(problem, states, Vector::Zero(4));
        CHECK((theta - oracle).lpNorm<Eigen::Infinity>() < 1e-6);
    }

    TEST_CASE("theta step is a fixed point on its own output") {
        const BenchmarkSetup setup = benchmark_registry("lotka_volterra");
        const FidelityProblem problem(setup.model, setup.grid, 3);
        const TimeSeries hat =
            forward_predict(setup.model, setup.theta_true, setup.initial_state, setup.grid, 3);
        // Zero fidelity at theta_true: the step must stay put.
        const Vector theta = theta_step(problem, hat.values, setup.theta_true);
        CHECK((theta - setup.theta_true).lpNorm<Eigen::Infinity>() < 1e-7);
        // And re-running from the step's own output changes nothing further.
        const Vector start = setup.theta_true + Vector::Constant(4, 2.0);
        const Vector once = theta_step(problem, hat.values, start);
        const Vector twice = theta_step(problem, hat.values, once);
        CHECK((twice - once).lpNorm<Eigen::Infinity>() < 1e-6);
    }

    TEST_CASE("theta step recovers the truth from fine clean states") {
        const BenchmarkSetup setup = benchmark_registry("lotka_volterra");
        const TimeGrid fine = uniform_grid(0.0, 2.0, 0.005);
        const TimeSeries clean = rk_integrate_clean(setup, fine);
        const FidelityProblem problem(setup.model, fine, 3);
        const Vector far = setup.theta_true + Vector{{3.0, -2.0, 4.0, 2.5}};
        const Vector theta = theta_step(problem, clean.values, far);
        CHECK((theta - setup.theta_true).lpNorm<Eigen::Infinity>() < 1e-3);
    }

    TEST_CASE("x step pins the states under a huge proximal weight") {
        const Dataset ds = lv_dataset(0.5, 5);
        const FidelityProblem problem(benchmark_registry("lotka_volterra").model, ds.grid, 3);
        const ProxAnchor anchor(ds.observed.values, 1e9);
        const Matrix moved =
            x_step(problem, anchor, ds.observed.values, ds.theta_true);
        CHECK((moved - ds.observed.values).cwiseAbs().maxCoeff() <= 1e-3);
    }

    TEST_CASE("x step without the prox term reaches zero fidelity") {
        const Dataset ds = lv_dataset(0.5, 6);
        const FidelityProblem problem(benchmark_registry("lotka_volterra").model, ds.grid, 3);
        const ProxAnchor anchor(ds.observed.values, 0.0);
        const Matrix moved = x_step(problem, anchor, ds.observed.values, ds.theta_true);
        CHECK(fidelity(problem, moved, ds.theta_true) <= 1e-10);
    }

    TEST_CASE("x step keeps a zero of the fidelity fixed") {
        const BenchmarkSetup setup = benchmark_registry("lotka_volterra");
        const FidelityProblem problem(setup.model, setup.grid, 3);
        const TimeSeries hat =
            forward_predict(setup.model, setup.theta_true, setup.initial_state, setup.grid, 3);
        const ProxAnchor anchor(hat.values, 1.0);
        const Matrix moved = x_step(problem, anchor, hat.values, setup.theta_true);
        CHECK((moved - hat.values).cwiseAbs().maxCoeff() == 0.0);
    }

    TEST_CASE("noise-free start at the truth collapses the fidelity") {
        const BenchmarkSetup setup = benchmark_registry("lotka_volterra");
        const TimeGrid fine = uniform_grid(0.0, 2.0, 0.005);
        const TimeSeries clean = rk_integrate_clean(setup, fine);
        const FidelityProblem problem(setup.model, fine, 3);
        SolverConfig cfg;
        cfg.outer_tolerance = 1e-16;
        cfg.max_outer_iterations = 3000;
        const EstimationResult res = bcd_prox(problem, clean, setup.theta_true, cfg, &clean);
        CHECK(res.trace.records.back().fidelity_value <= 1e-12);
        CHECK((res.theta - setup.theta_true).lpNorm<Eigen::Infinity>() < 1e-4);
    }

    TEST_CASE("lambda zero stops after exactly one outer iteration") {
        const Dataset ds = lv_dataset(0.5, 7);
        const FidelityProblem problem(benchmark_registry("lotka_volterra").model, ds.grid, 3);
        SolverConfig cfg;
        cfg.lambda = 0.0;
        const Vector theta0 = ds.theta_true + Vector::Constant(4, 0.5);
        const EstimationResult res = bcd_prox(problem, ds.observed, theta0, cfg, &ds.clean);
        CHECK(res.trace.records.size() == 1);
        CHECK(res.trace.termination == Termination::fixed_point_predicted);
        CHECK(res.trace.records.back().fidelity_value <= 1e-15);
    }

    TEST_CASE("fidelity decreases monotonically along the iterates") {
        for (std::uint64_t seed : {11ull, 12ull}) {
            const Dataset ds = lv_dataset(0.5, seed);
            const FidelityProblem problem(benchmark_registry("lotka_volterra").model, ds.grid, 3);
            SolverConfig cfg;
            const Vector theta0 = perturb_parameters(ds.theta_true, 1.0, seed + 100);
            const EstimationResult res = bcd_prox(problem, ds.observed, theta0, cfg, &ds.clean);
            REQUIRE(res.trace.records.size() >= 2);
            for (std::size_t n = 1; n < res.trace.records.size(); ++n) {
                CHECK(res.trace.records[n].fidelity_value <=
                      res.trace.records[n - 1].fidelity_value + 1e-10);
            }
        }
    }

    TEST_CASE("every estimate returns a zero-fidelity predicted trajectory") {
        const Dataset ds = lv_dataset(0.5, 13);
        const FidelityProblem problem(benchmark_registry("lotka_volterra").model, ds.grid, 3);
        const EstimationResult res =
            bcd_prox(problem, ds.observed, ds.theta_true, SolverConfig{}, &ds.clean);
        REQUIRE_FALSE(res.diverged);
        const double e = fidelity(problem, res.predicted.values, res.theta);
        CHECK(e <= 1e-15 * (1.0 + res.predicted.values.squaredNorm()));
    }

    TEST_CASE("identical inputs give bit-identical results") {
        const Dataset ds = lv_dataset(0.5, 17);
        const FidelityProblem problem(benchmark_registry("lotka_volterra").model, ds.grid, 3);
        const Vector theta0 = perturb_parameters(ds.theta_true, 1.0, 18);
        const EstimationResult a = bcd_prox(problem, ds.observed, theta0, SolverConfig{});
        const EstimationResult b = bcd_prox(problem, ds.observed, theta0, SolverConfig{});
        CHECK((a.theta - b.theta).cwiseAbs().maxCoeff() == 0.0);
        CHECK((a.states.values - b.states.values).cwiseAbs().maxCoeff() == 0.0);
        CHECK((a.predicted.values - b.predicted.values).cwiseAbs().maxCoeff() == 0.0);
        REQUIRE(a.trace.records.size() == b.trace.records.size());
        for (std::size_t n = 0; n < a.trace.records.size(); ++n) {
            CHECK(a.trace.records[n].fidelity_value == b.trace.records[n].fidelity_value);
        }
    }

    TEST_CASE("split schedule lands near the two-block optimum") {
        const Dataset ds = lv_dataset(0.5, 19);
        const FidelityProblem problem(benchmark_registry("lotka_volterra").model, ds.grid, 3);
        const Vector theta0 = ds.theta_true + Vector::Constant(4, 0.4);
        const EstimationResult two = bcd_prox(problem, ds.observed, theta0, SolverConfig{});
        SolverConfig split_cfg;
        split_cfg.schedule = Schedule::three_block_split;
        const EstimationResult split =
            bcd_prox_split(problem, ds.observed, theta0, split_cfg);
        const double e_two = two.trace.records.back().fidelity_value;
        const double e_split = split.trace.records.back().fidelity_value;
        CHECK(e_split <= 10.0 * e_two + 1e-12);
        for (std::size_t n = 1; n < split.trace.records.size(); ++n) {
            CHECK(split.trace.records[n].fidelity_value <=
                  split.trace.records[n - 1].fidelity_value + 1e-10);
        }
    }

    TEST_CASE("split schedule handles odd series lengths") {
        const BenchmarkSetup setup = benchmark_registry("lotka_volterra");
        REQUIRE(setup.grid.size() % 2 == 1); // 21 samples
        NoiseSpec noise;
        noise.variance = 0.25;
        noise.seed = 23;
        const Dataset ds = generate_dataset(setup, noise);
        const FidelityProblem problem(setup.model, ds.grid, 3);
        const EstimationResult res =
            bcd_prox_split(problem, ds.observed, ds.theta_true, SolverConfig{});
        CHECK(res.trace.records.back().fidelity_value <
              res.trace.records.front().fidelity_value + 1e-10);
        CHECK_FALSE(res.diverged);
    }

    TEST_CASE("input contract violations are rejected") {
        const Dataset ds = lv_dataset(0.5, 29);
        const FidelityProblem problem(benchmark_registry("lotka_volterra").model, ds.grid, 3);
        CHECK_THROWS_AS(
            bcd_prox(problem, ds.observed, Vector::Zero(2), SolverConfig{}),
            ContractError);
        Vector bad_theta = ds.theta_true;
        bad_theta[0] = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(bcd_prox(problem, ds.observed, bad_theta, SolverConfig{}), ContractError);
    }
}
