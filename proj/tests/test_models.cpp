#include <doctest.h>

#include "bcdprox/models.hpp"
#include "test_support.hpp"

using namespace bcdprox;
using test_support::fd_jacobian;

namespace {

std::vector<OdeModel> all_models() {
    return {make_lotka_volterra(), make_fitzhugh_nagumo(), make_fitzhugh_nagumo_linear(),
            make_rossler(), make_lorenz96(8)};
}

Vector typical_theta(const OdeModel &model, CounterRng &rng) {
    // Magnitudes close to the benchmark truths; keeps 1/theta terms sane.
    Vector theta = test_support::random_vector(rng, model.param_dim, 0.5, 4.0);
    return theta;
}

} // namespace

TEST_SUITE("models") {

    TEST_CASE("lotka volterra field matches hand evaluation") {
        const OdeModel m = make_lotka_volterra();
        const Vector x{{5.0, 3.0}};
        const Vector theta{{2.0, 1.0, 4.0, 1.0}};
        const Vector f = m.eval_field(x, theta);
        CHECK(f[0] == doctest::Approx(-5.0).epsilon(1e-14));
        CHECK(f[1] == doctest::Approx(57.0).epsilon(1e-14));
    }

    TEST_CASE("fitzhugh nagumo field matches hand evaluation") {
        const OdeModel m = make_fitzhugh_nagumo();
        const Vector f = m.eval_field(Vector{{-1.0, 1.0}}, Vector{{0.5, 0.2, 3.0}});
        CHECK(f[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(f[1] == doctest::Approx(13.0 / 30.0).epsilon(1e-14));
    }

    TEST_CASE("lotka volterra parameter jacobian matches hand derivation") {
        const OdeModel m = make_lotka_volterra();
        const Matrix j = m.eval_param_jacobian(Vector{{5.0, 3.0}}, Vector{{2.0, 1.0, 4.0, 1.0}});
        Matrix expected(2, 4);
        expected << 5.0, -15.0, 0.0, 0.0, 0.0, 0.0, 15.0, -3.0;
        CHECK((j - expected).norm() == doctest::Approx(0.0));
    }

    TEST_CASE("lorenz96 parameter jacobian is a column of ones") {
        const OdeModel m = make_lorenz96(12);
        CounterRng rng(7);
        const Vector x = test_support::random_vector(rng, 12, -5.0, 5.0);
        const Matrix j = m.eval_param_jacobian(x, Vector::Constant(1, 8.0));
        CHECK(j.rows() == 12);
        CHECK(j.cols() == 1);
        CHECK((j - Matrix::Ones(12, 1)).norm() == doctest::Approx(0.0));
    }

    TEST_CASE("jacobians match central finite differences") {
        CounterRng rng(11);
        for (const OdeModel &m : all_models()) {
            CAPTURE(m.name);
            for (int probe = 0; probe < 10; ++probe) {
                const Vector x = test_support::random_vector(rng, m.state_dim, -2.0, 2.0);
                const Vector theta = typical_theta(m, rng);
                const Matrix jx_fd = fd_jacobian(
                    [&](const Vector &xx) { return m.eval_field(xx, theta); }, x);
                const Matrix jth_fd = fd_jacobian(
                    [&](const Vector &th) { return m.eval_field(x, th); }, theta);
                CHECK(test_support::relative_error(m.eval_state_jacobian(x, theta), jx_fd) < 1e-6);
                CHECK(test_support::relative_error(m.eval_param_jacobian(x, theta), jth_fd) < 1e-6);
            }
        }
    }

    TEST_CASE("linear decompositions reproduce the field") {
        CounterRng rng(13);
        for (const OdeModel &m : all_models()) {
            if (!m.linear.has_value()) { continue; }
            CAPTURE(m.name);
            for (int probe = 0; probe < 20; ++probe) {
                const Vector x = test_support::random_vector(rng, m.state_dim, -3.0, 3.0);
                const Vector theta = test_support::random_vector(rng, m.param_dim, -2.0, 4.0);
                const Vector f = m.eval_field(x, theta);
                Vector f0(m.state_dim);
                Matrix f1(m.state_dim, m.param_dim);
                m.linear->f0(x, f0);
                m.linear->f1(x, f1);
                CHECK((f - (f0 + f1 * theta)).norm() <= 1e-12 * (1.0 + f.norm()));
                // Where a linear decomposition exists the parameter Jacobian
                // is f1 itself.
                CHECK((m.eval_param_jacobian(x, theta) - f1).norm() == doctest::Approx(0.0));
            }
        }
    }

    TEST_CASE("fitzhugh nagumo original parameterization has no linear form") {
        CHECK_FALSE(make_fitzhugh_nagumo().linear.has_value());
    }

    TEST_CASE("reparameterized fitzhugh nagumo agrees with the original") {
        const OdeModel orig = make_fitzhugh_nagumo();
        const OdeModel lin = make_fitzhugh_nagumo_linear();
        CounterRng rng(17);
        for (int probe = 0; probe < 20; ++probe) {
            const Vector x = test_support::random_vector(rng, 2, -2.0, 2.0);
            Vector theta = test_support::random_vector(rng, 3, 0.5, 4.0);
            const Vector c = fitzhugh_nagumo_linear_parameters(theta);
            CHECK((orig.eval_field(x, theta) - lin.eval_field(x, c)).norm() < 1e-12);
        }
    }

    TEST_CASE("parameter jacobian independent of theta for linear models") {
        CounterRng rng(19);
        for (const char *name : {"lotka_volterra", "rossler", "lorenz96"}) {
            const OdeModel m = benchmark_registry(name).model;
            const Vector x = test_support::random_vector(rng, m.state_dim, -2.0, 2.0);
            const Vector th1 = test_support::random_vector(rng, m.param_dim, -3.0, 3.0);
            const Vector th2 = test_support::random_vector(rng, m.param_dim, -3.0, 3.0);
            CHECK((m.eval_param_jacobian(x, th1) - m.eval_param_jacobian(x, th2)).norm() ==
                  doctest::Approx(0.0));
        }
    }

    TEST_CASE("lorenz96 jacobian transpose product matches the dense jacobian") {
        const OdeModel m = make_lorenz96(14);
        REQUIRE(static_cast<bool>(m.state_jacobian_tvp));
        CounterRng rng(29);
        for (int probe = 0; probe < 10; ++probe) {
            const Vector x = test_support::random_vector(rng, 14, -4.0, 4.0);
            const Vector w = test_support::random_vector(rng, 14, -2.0, 2.0);
            const Vector theta = Vector::Constant(1, 8.0);
            const Matrix jx = m.eval_state_jacobian(x, theta);
            Vector fast = Vector::Zero(14);
            m.state_jacobian_tvp(x, theta, w, fast);
            CHECK((fast - jx.transpose() * w).cwiseAbs().maxCoeff() < 1e-13);
        }
    }

    TEST_CASE("lorenz96 wraparound: cyclic rotation commutes with the field") {
        const int d = 10;
        const OdeModel m = make_lorenz96(d);
        CounterRng rng(23);
        const Vector x = test_support::random_vector(rng, d, -4.0, 4.0);
        const Vector theta = Vector::Constant(1, 8.0);
        const Vector f = m.eval_field(x, theta);
        for (int shift : {1, 3, d - 1}) {
            Vector xr(d), fr_expected(d);
            for (int k = 0; k < d; ++k) {
                xr[(k + shift) % d] = x[k];
                fr_expected[(k + shift) % d] = f[k];
            }
            CHECK((m.eval_field(xr, theta) - fr_expected).norm() < 1e-12);
        }
    }

    TEST_CASE("registry entries match the benchmark settings") {
        const BenchmarkSetup lv = benchmark_registry("lotka_volterra");
        CHECK(lv.model.param_dim == 4);
        CHECK(lv.model.state_dim == 2);
        CHECK((lv.theta_true - Vector{{2.0, 1.0, 1.0, 4.0}}).norm() == doctest::Approx(0.0));
        CHECK(lv.grid.size() == 21);
        CHECK(lv.grid.time(1) - lv.grid.time(0) == doctest::Approx(0.1));

        const BenchmarkSetup fhn = benchmark_registry("fitzhugh_nagumo");
        CHECK((fhn.theta_true - Vector{{0.5, 0.2, 3.0}}).norm() == doctest::Approx(0.0));
        CHECK((fhn.initial_state - Vector{{-1.0, 1.0}}).norm() == doctest::Approx(0.0));
        CHECK(fhn.grid.size() == 401);

        const BenchmarkSetup ros = benchmark_registry("rossler");
        CHECK((ros.initial_state - Vector{{1.13, -1.74, 0.02}}).norm() == doctest::Approx(0.0));
        CHECK((ros.theta_true - Vector{{0.2, 0.2, 3.0}}).norm() == doctest::Approx(0.0));

        const BenchmarkSetup l96 = benchmark_registry("lorenz96");
        CHECK(l96.model.state_dim == 40);
        CHECK(l96.model.param_dim == 1);
        CHECK(l96.theta_true[0] == doctest::Approx(8.0));
        CHECK(l96.grid.size() == 401);
        // Seeded initial state: reproducible, seed-sensitive.
        const BenchmarkSetup again = benchmark_registry("lorenz96");
        CHECK((l96.initial_state - again.initial_state).norm() == doctest::Approx(0.0));
        const BenchmarkSetup other = benchmark_registry("lorenz96", 99);
        CHECK((l96.initial_state - other.initial_state).norm() > 1e-6);
    }

    TEST_CASE("registry rejects unknown names") {
        CHECK_THROWS_AS(benchmark_registry("van_der_pol"), ContractError);
        CHECK_FALSE(is_benchmark_name("van_der_pol"));
        CHECK(is_benchmark_name("rossler"));
    }

    TEST_CASE("checked evaluation enforces dimensions and finiteness") {
        const OdeModel m = make_lotka_volterra();
        CHECK_THROWS_AS(m.eval_field(Vector{{1.0}}, Vector{{1.0, 1.0, 1.0, 1.0}}), ContractError);
        CHECK_THROWS_AS(m.eval_field(Vector{{1.0, 1.0}}, Vector{{1.0}}), ContractError);
        const double big = 1e308;
        CHECK_THROWS_AS(m.eval_field(Vector{{big, big}}, Vector{{big, big, big, big}}),
                        NumericError);
    }

    TEST_CASE("zero field when the decomposition cancels") {
        // theta chosen so f0(x) = -f1(x) theta; for the predator-prey field
        // f0 = 0, so theta = 0 gives a zero field.
        const OdeModel m = make_lotka_volterra();
        const Vector f = m.eval_field(Vector{{2.0, 1.0}}, Vector::Zero(4));
        CHECK(f.norm() == doctest::Approx(0.0));
    }
}
