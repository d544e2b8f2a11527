#include <doctest.h>

#include <cmath>
#include <limits>

#include "bcdprox/minimize.hpp"
#include "test_support.hpp"

using namespace bcdprox;

TEST_SUITE("minimize") {

    TEST_CASE("quadratic bowl converges to the center") {
        const Vector center = Vector{{1.0, -2.0, 3.5, 0.25}};
        ObjectiveFn fn = [&](const Vector &z, Vector &g) {
            g = 2.0 * (z - center);
            return (z - center).squaredNorm();
        };
        const MinimizeResult res = minimize_smooth(fn, Vector::Zero(4));
        CHECK((res.point - center).lpNorm<Eigen::Infinity>() < 1e-8);
        CHECK(res.value < 1e-15);
        CHECK(res.status == MinimizeStatus::gradient_tolerance);
    }

    TEST_CASE("rosenbrock valley") {
        ObjectiveFn fn = [](const Vector &z, Vector &g) {
            const double x = z[0], y = z[1];
            g.resize(2);
            g[0] = -2.0 * (1.0 - x) - 400.0 * x * (y - x * x);
            g[1] = 200.0 * (y - x * x);
            return (1.0 - x) * (1.0 - x) + 100.0 * (y - x * x) * (y - x * x);
        };
        const MinimizeResult res = minimize_smooth(fn, Vector{{-1.2, 1.0}});
        CHECK(std::abs(res.point[0] - 1.0) < 1e-5);
        CHECK(std::abs(res.point[1] - 1.0) < 1e-5);
    }

    TEST_CASE("stationary start returns immediately") {
        const Vector center = Vector{{2.0, 2.0}};
        ObjectiveFn fn = [&](const Vector &z, Vector &g) {
            g = 2.0 * (z - center);
            return (z - center).squaredNorm();
        };
        const MinimizeResult res = minimize_smooth(fn, center);
        CHECK(res.status == MinimizeStatus::already_minimized);
        CHECK((res.point - center).norm() == 0.0);
        CHECK(res.evaluations == 1);
    }

    TEST_CASE("non-finite start throws") {
        ObjectiveFn fn = [](const Vector &, Vector &g) {
            g.setZero(1);
            return std::numeric_limits<double>::infinity();
        };
        CHECK_THROWS_AS(minimize_smooth(fn, Vector::Zero(1)), NumericError);
        CHECK_THROWS_AS(
            minimize_smooth([](const Vector &, Vector &g) { g.setZero(1); return 0.0; },
                            Vector::Constant(1, std::numeric_limits<double>::quiet_NaN())),
            NumericError);
    }

    TEST_CASE("line search backs off from a non-finite region") {
        // min x - log x on x > 0, minimum at x = 1; probes at x <= 0 are
        // out of domain and must be treated as infinitely bad.
        ObjectiveFn fn = [](const Vector &z, Vector &g) {
            g.resize(1);
            if (z[0] <= 0.0) {
                g[0] = 0.0;
                return std::numeric_limits<double>::infinity();
            }
            g[0] = 1.0 - 1.0 / z[0];
            return z[0] - std::log(z[0]);
        };
        const MinimizeResult res = minimize_smooth(fn, Vector::Constant(1, 4.0));
        CHECK(std::abs(res.point[0] - 1.0) < 1e-7);
    }

    TEST_CASE("monotone: never returns worse than the start") {
        CounterRng rng(61);
        // A wavy non-convex objective with many local minima.
        ObjectiveFn fn = [](const Vector &z, Vector &g) {
            g.resize(z.size());
            double v = 0.0;
            for (Eigen::Index i = 0; i < z.size(); ++i) {
                v += 0.1 * z[i] * z[i] + std::sin(3.0 * z[i]);
                g[i] = 0.2 * z[i] + 3.0 * std::cos(3.0 * z[i]);
            }
            return v;
        };
        for (int probe = 0; probe < 25; ++probe) {
            const Vector start = test_support::random_vector(rng, 3, -6.0, 6.0);
            Vector g0(3);
            const double f0 = fn(start, g0);
            MinimizerConfig cfg;
            cfg.max_iterations = 15;
            const MinimizeResult res = minimize_smooth(fn, start, cfg);
            CHECK(res.value <= f0 + 1e-12);
        }
    }

    TEST_CASE("invalid settings are rejected") {
        ObjectiveFn fn = [](const Vector &z, Vector &g) {
            g = 2.0 * z;
            return z.squaredNorm();
        };
        MinimizerConfig bad;
        bad.wolfe_c1 = 0.95;
        bad.wolfe_c2 = 0.5;
        CHECK_THROWS_AS(minimize_smooth(fn, Vector::Zero(2), bad), ContractError);
        bad = MinimizerConfig{};
        bad.max_iterations = 0;
        CHECK_THROWS_AS(minimize_smooth(fn, Vector::Zero(2), bad), ContractError);
    }
}
