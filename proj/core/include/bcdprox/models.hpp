#pragma once

#include <cstdint>

#include "bcdprox/model.hpp"

namespace bcdprox {

/// A benchmark problem: the model plus its true parameters, initial state
/// and sample grid.
struct BenchmarkSetup {
    OdeModel model;
    Vector theta_true;
    Vector initial_state;
    TimeGrid grid;
};

/// Predator-prey dynamics, d = 2, p = 4.
OdeModel make_lotka_volterra();

/// Neuron spike dynamics in the original parameterization (theta0, theta1,
/// theta2), d = 2, p = 3. Not linear in the parameters (terms in 1/theta2),
/// so no linear decomposition is attached.
OdeModel make_fitzhugh_nagumo();

/// Reparameterized spike dynamics with free coefficients (c1, c2, c3, c4),
/// linear in the coefficients. Used for curvature diagnostics.
OdeModel make_fitzhugh_nagumo_linear();

/// Maps (theta0, theta1, theta2) of the original parameterization onto the
/// coefficients (c1, c2, c3, c4) = (theta2, 1/theta2, theta0/theta2,
/// theta1/theta2) of the linear form.
Vector fitzhugh_nagumo_linear_parameters(const Vector &theta);

/// Chaotic attractor, d = 3, p = 3.
OdeModel make_rossler();

/// Cyclic atmosphere toy model, p = 1, configurable dimension.
OdeModel make_lorenz96(int dim = 40);

/// Benchmark settings by name: one of "lotka_volterra", "fitzhugh_nagumo",
/// "rossler", "lorenz96". `init_seed` only affects lorenz96, whose initial
/// state is drawn from a standard Gaussian stream. Returns fresh copies.
BenchmarkSetup benchmark_registry(const std::string &name, std::uint64_t init_seed = 0);

bool is_benchmark_name(const std::string &name);

} // namespace bcdprox
