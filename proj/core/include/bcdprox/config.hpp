#pragma once

#include <filesystem>

#include "bcdprox/experiment.hpp"

namespace bcdprox {

/// Parses an experiment config from JSON text. Accepted keys (all optional
/// except `model`): model, t0, t_end, dt, noise {kind, variance, seed},
/// lambda, order, theta_init {sigma2, seed}, theta_true (array), replicates,
/// methods (array of names), out_dir. Unknown keys are rejected.
ExperimentConfig parse_config(const std::string &json_text);

ExperimentConfig load_config(const std::filesystem::path &path);

} // namespace bcdprox
