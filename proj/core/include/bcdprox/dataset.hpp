#pragma once

#include <cstdint>
#include <optional>

#include "bcdprox/models.hpp"

namespace bcdprox {

/// Observation noise description. Laplacian draws are variance-matched: the
/// scale b is chosen so that 2 b^2 equals the requested variance.
struct NoiseSpec {
    enum class Kind { gaussian, laplacian };
    Kind kind = Kind::gaussian;
    double variance = 0.0;
    std::uint64_t seed = 0;
};

/// A generated experiment dataset: clean trajectory, realized noise and the
/// observations (observed = clean + noise exactly).
struct Dataset {
    std::string model_name;
    TimeGrid grid;
    TimeSeries clean;
    TimeSeries observed;
    Matrix noise;
    Vector theta_true;
    NoiseSpec noise_spec;
};

/// Clean states via the fifth-order integrator at the given settings, then
/// i.i.d. per-entry noise on top. Fully determined by the noise seed. Noise
/// draws are indexed by entry (column-major), so the realization does not
/// depend on evaluation order.
Dataset generate_dataset(const BenchmarkSetup &setup, const NoiseSpec &noise);

/// Convenience overload resolving the registry by name, with optional grid
/// and true-parameter overrides.
Dataset generate_dataset(const std::string &model_name, const NoiseSpec &noise,
                         const std::optional<TimeGrid> &grid_override = std::nullopt,
                         const std::optional<Vector> &theta_true_override = std::nullopt);

/// theta0 = theta_true + N(0, sigma2 I), seeded.
Vector perturb_parameters(const Vector &theta_true, double sigma2, std::uint64_t seed);

} // namespace bcdprox
