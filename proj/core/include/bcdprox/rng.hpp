#pragma once

#include <cstdint>

namespace bcdprox {

/// One round of the splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

/// Counter-based 64-bit generator. Every output is a hash of (key, counter),
/// so draws are random-access and independent of evaluation order. Streams
/// for replicates and purposes are derived by re-keying, which keeps parallel
/// schedules reproducible.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t key, std::uint64_t counter = 0)
        : key_(key), counter_(counter) {}

    /// Independent stream derived from (master seed, index, purpose tag).
    static CounterRng stream(std::uint64_t master, std::uint64_t index, std::uint64_t purpose);

    std::uint64_t next_u64();

    /// Uniform draw in [0, 1) with 53 random bits.
    double uniform();

    /// Gaussian draw, mean 0. Consumes two counter positions (Box-Muller).
    double normal(double stddev);

    /// Laplace draw, mean 0, given scale b (variance 2 b^2).
    double laplace(double scale);

    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return counter_; }
    void set_counter(std::uint64_t c) { counter_ = c; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

/// Purpose tags for stream derivation.
namespace stream_purpose {
inline constexpr std::uint64_t noise = 0x6e6f697365;        // "noise"
inline constexpr std::uint64_t theta_init = 0x7468657461;   // "theta"
inline constexpr std::uint64_t initial_state = 0x696e6974;  // "init"
} // namespace stream_purpose

} // namespace bcdprox
