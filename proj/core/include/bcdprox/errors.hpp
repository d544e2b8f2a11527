#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bcdprox {

/// Argument violates a documented precondition (dimension mismatch,
/// unknown name, out-of-range order).
class ContractError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Evaluation produced a numerically unusable result (non-finite values,
/// covariance repair beyond tolerance, ...).
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A trajectory left the admissible region. Carries the index of the last
/// state that was still valid.
class DivergedError : public NumericError {
  public:
    DivergedError(const std::string &what, std::ptrdiff_t last_valid_index)
        : NumericError(what), last_valid_index_(last_valid_index) {}

    std::ptrdiff_t last_valid_index() const noexcept { return last_valid_index_; }

  private:
    std::ptrdiff_t last_valid_index_;
};

} // namespace bcdprox
