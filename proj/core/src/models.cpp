#include "bcdprox/models.hpp"

#include "bcdprox/rng.hpp"

namespace bcdprox {

OdeModel make_lotka_volterra() {
    OdeModel m;
    m.name = "lotka_volterra";
    m.state_dim = 2;
    m.param_dim = 4;
    m.field = [](ConstVectorRef x, ConstVectorRef th, VectorRef out) {
        out[0] = th[0] * x[0] - th[1] * x[0] * x[1];
        out[1] = th[2] * x[0] * x[1] - th[3] * x[1];
    };
    m.state_jacobian = [](ConstVectorRef x, ConstVectorRef th, MatrixRef out) {
        out(0, 0) = th[0] - th[1] * x[1];
        out(0, 1) = -th[1] * x[0];
        out(1, 0) = th[2] * x[1];
        out(1, 1) = th[2] * x[0] - th[3];
    };
    m.param_jacobian = [](ConstVectorRef x, ConstVectorRef, MatrixRef out) {
        out.setZero();
        out(0, 0) = x[0];
        out(0, 1) = -x[0] * x[1];
        out(1, 2) = x[0] * x[1];
        out(1, 3) = -x[1];
    };
    m.linear = OdeModel::LinearDecomposition{
        [](ConstVectorRef, VectorRef out) { out.setZero(); },
        [](ConstVectorRef x, MatrixRef out) {
            out.setZero();
            out(0, 0) = x[0];
            out(0, 1) = -x[0] * x[1];
            out(1, 2) = x[0] * x[1];
            out(1, 3) = -x[1];
        }};
    return m;
}

OdeModel make_fitzhugh_nagumo() {
    OdeModel m;
    m.name = "fitzhugh_nagumo";
    m.state_dim = 2;
    m.param_dim = 3;
    m.field = [](ConstVectorRef x, ConstVectorRef th, VectorRef out) {
        out[0] = th[2] * (x[0] - x[0] * x[0] * x[0] / 3.0 + x[1]);
        out[1] = -(x[0] - th[0] + th[1] * x[1]) / th[2];
    };
    m.state_jacobian = [](ConstVectorRef x, ConstVectorRef th, MatrixRef out) {
        out(0, 0) = th[2] * (1.0 - x[0] * x[0]);
        out(0, 1) = th[2];
        out(1, 0) = -1.0 / th[2];
        out(1, 1) = -th[1] / th[2];
    };
    m.param_jacobian = [](ConstVectorRef x, ConstVectorRef th, MatrixRef out) {
        const double inv = 1.0 / th[2];
        out(0, 0) = 0.0;
        out(0, 1) = 0.0;
        out(0, 2) = x[0] - x[0] * x[0] * x[0] / 3.0 + x[1];
        out(1, 0) = inv;
        out(1, 1) = -x[1] * inv;
        out(1, 2) = (x[0] - th[0] + th[1] * x[1]) * inv * inv;
    };
    return m;
}

OdeModel make_fitzhugh_nagumo_linear() {
    OdeModel m;
    m.name = "fitzhugh_nagumo_linear";
    m.state_dim = 2;
    m.param_dim = 4;
    m.field = [](ConstVectorRef x, ConstVectorRef c, VectorRef out) {
        out[0] = c[0] * (x[0] - x[0] * x[0] * x[0] / 3.0 + x[1]);
        out[1] = -c[1] * x[0] + c[2] - c[3] * x[1];
    };
    m.state_jacobian = [](ConstVectorRef x, ConstVectorRef c, MatrixRef out) {
        out(0, 0) = c[0] * (1.0 - x[0] * x[0]);
        out(0, 1) = c[0];
        out(1, 0) = -c[1];
        out(1, 1) = -c[3];
    };
    m.param_jacobian = [](ConstVectorRef x, ConstVectorRef, MatrixRef out) {
        out.setZero();
        out(0, 0) = x[0] - x[0] * x[0] * x[0] / 3.0 + x[1];
        out(1, 1) = -x[0];
        out(1, 2) = 1.0;
        out(1, 3) = -x[1];
    };
    m.linear = OdeModel::LinearDecomposition{
        [](ConstVectorRef, VectorRef out) { out.setZero(); },
        [](ConstVectorRef x, MatrixRef out) {
            out.setZero();
            out(0, 0) = x[0] - x[0] * x[0] * x[0] / 3.0 + x[1];
            out(1, 1) = -x[0];
            out(1, 2) = 1.0;
            out(1, 3) = -x[1];
        }};
    return m;
}

Vector fitzhugh_nagumo_linear_parameters(const Vector &theta) {
    if (theta.size() != 3) { throw ContractError("fitzhugh_nagumo_linear_parameters: expected 3 parameters"); }
    Vector c(4);
    c[0] = theta[2];
    c[1] = 1.0 / theta[2];
    c[2] = theta[0] / theta[2];
    c[3] = theta[1] / theta[2];
    return c;
}

OdeModel make_rossler() {
    OdeModel m;
    m.name = "rossler";
    m.state_dim = 3;
    m.param_dim = 3;
    m.field = [](ConstVectorRef x, ConstVectorRef th, VectorRef out) {
        out[0] = -x[1] - x[2];
        out[1] = x[0] + th[0] * x[1];
        out[2] = th[1] + x[2] * (x[0] - th[2]);
    };
    m.state_jacobian = [](ConstVectorRef x, ConstVectorRef th, MatrixRef out) {
        out.setZero();
        out(0, 1) = -1.0;
        out(0, 2) = -1.0;
        out(1, 0) = 1.0;
        out(1, 1) = th[0];
        out(2, 0) = x[2];
        out(2, 2) = x[0] - th[2];
    };
    m.param_jacobian = [](ConstVectorRef x, ConstVectorRef, MatrixRef out) {
        out.setZero();
        out(1, 0) = x[1];
        out(2, 1) = 1.0;
        out(2, 2) = -x[2];
    };
    m.linear = OdeModel::LinearDecomposition{
        [](ConstVectorRef x, VectorRef out) {
            out[0] = -x[1] - x[2];
            out[1] = x[0];
            out[2] = x[2] * x[0];
        },
        [](ConstVectorRef x, MatrixRef out) {
            out.setZero();
            out(1, 0) = x[1];
            out(2, 1) = 1.0;
            out(2, 2) = -x[2];
        }};
    return m;
}

OdeModel make_lorenz96(int dim) {
    if (dim < 4) { throw ContractError("make_lorenz96: need dim >= 4"); }
    OdeModel m;
    m.name = "lorenz96";
    m.state_dim = dim;
    m.param_dim = 1;
    const int d = dim;
    // Indices wrap cyclically: x_{-1} = x_{d-1}, x_{-2} = x_{d-2}, x_d = x_0.
    auto wrap = [d](int k) { return ((k % d) + d) % d; };
    m.field = [d, wrap](ConstVectorRef x, ConstVectorRef th, VectorRef out) {
        for (int k = 0; k < d; ++k) {
            out[k] = (x[wrap(k + 1)] - x[wrap(k - 2)]) * x[wrap(k - 1)] - x[k] + th[0];
        }
    };
    m.state_jacobian = [d, wrap](ConstVectorRef x, ConstVectorRef, MatrixRef out) {
        out.setZero();
        for (int k = 0; k < d; ++k) {
            out(k, wrap(k + 1)) += x[wrap(k - 1)];
            out(k, wrap(k - 2)) += -x[wrap(k - 1)];
            out(k, wrap(k - 1)) += x[wrap(k + 1)] - x[wrap(k - 2)];
            out(k, k) += -1.0;
        }
    };
    // Four entries per row; the transpose product skips the dense matrix.
    m.state_jacobian_tvp = [d, wrap](ConstVectorRef x, ConstVectorRef, ConstVectorRef w,
                                     VectorRef out) {
        for (int k = 0; k < d; ++k) {
            out[wrap(k + 1)] += x[wrap(k - 1)] * w[k];
            out[wrap(k - 2)] -= x[wrap(k - 1)] * w[k];
            out[wrap(k - 1)] += (x[wrap(k + 1)] - x[wrap(k - 2)]) * w[k];
            out[k] -= w[k];
        }
    };
    m.param_jacobian = [d](ConstVectorRef, ConstVectorRef, MatrixRef out) {
        for (int k = 0; k < d; ++k) { out(k, 0) = 1.0; }
    };
    m.linear = OdeModel::LinearDecomposition{
        [d, wrap](ConstVectorRef x, VectorRef out) {
            for (int k = 0; k < d; ++k) {
                out[k] = (x[wrap(k + 1)] - x[wrap(k - 2)]) * x[wrap(k - 1)] - x[k];
            }
        },
        [d](ConstVectorRef, MatrixRef out) {
            for (int k = 0; k < d; ++k) { out(k, 0) = 1.0; }
        }};
    return m;
}

BenchmarkSetup benchmark_registry(const std::string &name, std::uint64_t init_seed) {
    if (name == "lotka_volterra") {
        BenchmarkSetup s;
        s.model = make_lotka_volterra();
        // Dondelinger et al. predator-prey setting: prey x0' = x0 (2 - x1),
        // predator x1' = -x1 (4 - x0), i.e. coupling 1 and death rate 4 in
        // this parameter layout. The sample grid resolves these dynamics.
        s.theta_true = Vector{{2.0, 1.0, 1.0, 4.0}};
        s.initial_state = Vector{{5.0, 3.0}};
        s.grid = uniform_grid(0.0, 2.0, 0.1);
        return s;
    }
    if (name == "fitzhugh_nagumo") {
        BenchmarkSetup s;
        s.model = make_fitzhugh_nagumo();
        s.theta_true = Vector{{0.5, 0.2, 3.0}};
        s.initial_state = Vector{{-1.0, 1.0}};
        s.grid = uniform_grid(0.0, 20.0, 0.05);
        return s;
    }
    if (name == "rossler") {
        BenchmarkSetup s;
        s.model = make_rossler();
        s.theta_true = Vector{{0.2, 0.2, 3.0}};
        s.initial_state = Vector{{1.13, -1.74, 0.02}};
        s.grid = uniform_grid(0.0, 20.0, 0.05);
        return s;
    }
    if (name == "lorenz96") {
        BenchmarkSetup s;
        s.model = make_lorenz96(40);
        s.theta_true = Vector::Constant(1, 8.0);
        CounterRng rng = CounterRng::stream(init_seed, 0, stream_purpose::initial_state);
        s.initial_state.resize(40);
        for (int k = 0; k < 40; ++k) { s.initial_state[k] = rng.normal(1.0); }
        s.grid = uniform_grid(0.0, 4.0, 0.01);
        return s;
    }
    throw ContractError("benchmark_registry: unknown model name '" + name + "'");
}

bool is_benchmark_name(const std::string &name) {
    return name == "lotka_volterra" || name == "fitzhugh_nagumo" || name == "rossler" ||
           name == "lorenz96";
}

} // namespace bcdprox
