#pragma once

#include <stdexcept>

namespace aparareal {

/// Inconsistent or out-of-range configuration (shapes, step ratios, kernels).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical precondition failed at runtime (zero reference norm,
/// non-real inverse transform).
class NumericError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Parareal iterates blew up.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace aparareal
