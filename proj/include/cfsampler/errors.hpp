#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cfsampler {

/// A distribution parameter (or derived requirement such as square
/// integrability) is outside the supported domain.
class InvalidParameters : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A Custom distribution was asked for derivatives it does not provide and
/// the finite-difference fallback is disabled.
class MissingDerivatives : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Adaptive quadrature hit its subdivision limit.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double partial_value,
                  double abs_error_estimate)
      : std::runtime_error(what),
        partial_value_(partial_value),
        abs_error_estimate_(abs_error_estimate) {}

  double partial_value() const noexcept { return partial_value_; }
  double abs_error_estimate() const noexcept { return abs_error_estimate_; }

 private:
  double partial_value_;
  double abs_error_estimate_;
};

/// An inverted probability came out clearly negative, which means the
/// supplied characteristic function is not one.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The rejection loop rejected too many proposals in a row.
class IterationLimitError : public std::runtime_error {
 public:
  IterationLimitError(const std::string& what, std::uint64_t rejections)
      : std::runtime_error(what), rejections_(rejections) {}
  std::uint64_t rejections() const noexcept { return rejections_; }

 private:
  std::uint64_t rejections_;
};

class InsufficientData : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace cfsampler
