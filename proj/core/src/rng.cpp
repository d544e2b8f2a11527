#include "bcdprox/rng.hpp"

#include <cmath>

namespace bcdprox {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr double kTwoPi = 6.283185307179586476925286766559;
} // namespace

std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

CounterRng CounterRng::stream(std::uint64_t master, std::uint64_t index, std::uint64_t purpose) {
    std::uint64_t key = mix64(master + kGolden);
    key = mix64(key ^ (index + kGolden));
    key = mix64(key ^ (purpose + kGolden));
    return CounterRng(key);
}

std::uint64_t CounterRng::next_u64() {
    return mix64(key_ + kGolden * ++counter_);
}

double CounterRng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::normal(double stddev) {
    // u1 shifted into (0, 1] so the log stays finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double CounterRng::laplace(double scale) {
    const double u = uniform() - 0.5;
    // mag in [0, 1]; clamp away from 0 so the log stays finite.
    const double mag = 1.0 - 2.0 * std::abs(u);
    const double sign = (u >= 0.0) ? 1.0 : -1.0;
    return -scale * sign * std::log(mag > 0x1.0p-53 ? mag : 0x1.0p-53);
}

} // namespace bcdprox
