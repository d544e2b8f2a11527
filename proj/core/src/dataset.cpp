#include "bcdprox/dataset.hpp"

#include <cmath>

#include "bcdprox/rk.hpp"
#include "bcdprox/rng.hpp"

namespace bcdprox {

Dataset generate_dataset(const BenchmarkSetup &setup, const NoiseSpec &noise) {
    if (!(noise.variance >= 0.0) || !std::isfinite(noise.variance)) {
        throw ContractError("generate_dataset: noise variance must be finite and nonnegative");
    }
    Dataset ds;
    ds.model_name = setup.model.name;
    ds.grid = setup.grid;
    ds.theta_true = setup.theta_true;
    ds.noise_spec = noise;
    ds.clean = rk_integrate(setup.model, setup.theta_true, setup.initial_state, setup.grid);

    const int d = setup.model.state_dim;
    const int T = ds.grid.size();
    ds.noise = Matrix::Zero(d, T);
    if (noise.variance > 0.0) {
        const double sd = std::sqrt(noise.variance);
        const double scale = sd / std::sqrt(2.0); // Laplace scale with matching variance
        CounterRng rng = CounterRng::stream(noise.seed, 0, stream_purpose::noise);
        for (int t = 0; t < T; ++t) {
            for (int c = 0; c < d; ++c) {
                rng.set_counter(2 * static_cast<std::uint64_t>(t * d + c));
                ds.noise(c, t) = (noise.kind == NoiseSpec::Kind::gaussian) ? rng.normal(sd)
                                                                           : rng.laplace(scale);
            }
        }
    }
    ds.observed = TimeSeries(ds.grid, ds.clean.values + ds.noise);
    return ds;
}

Dataset generate_dataset(const std::string &model_name, const NoiseSpec &noise,
                         const std::optional<TimeGrid> &grid_override,
                         const std::optional<Vector> &theta_true_override) {
    BenchmarkSetup setup = benchmark_registry(model_name, noise.seed);
    if (grid_override.has_value()) { setup.grid = *grid_override; }
    if (theta_true_override.has_value()) {
        if (theta_true_override->size() != setup.model.param_dim) {
            throw ContractError("generate_dataset: theta_true override dimension mismatch");
        }
        setup.theta_true = *theta_true_override;
    }
    return generate_dataset(setup, noise);
}

Vector perturb_parameters(const Vector &theta_true, double sigma2, std::uint64_t seed) {
    if (!(sigma2 >= 0.0)) { throw ContractError("perturb_parameters: sigma2 must be nonnegative"); }
    Vector theta = theta_true;
    if (sigma2 > 0.0) {
        CounterRng rng = CounterRng::stream(seed, 0, stream_purpose::theta_init);
        const double sd = std::sqrt(sigma2);
        for (Eigen::Index i = 0; i < theta.size(); ++i) { theta[i] += rng.normal(sd); }
    }
    return theta;
}

} // namespace bcdprox
