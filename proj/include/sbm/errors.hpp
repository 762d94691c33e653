#pragma once

#include <stdexcept>
#include <string>

namespace sbm {

/// Argument outside the mathematical domain of an operation (lambda <= 0, x outside D, ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Value not representable or not reachable (overflow, inversion target out of range).
struct RangeError : std::range_error {
  using std::range_error::range_error;
};

/// Catalog entry violates a Bernstein-function property on the evaluation grid.
struct ModelError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Quadrature or fit failed to meet its tolerance.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedError : std::logic_error {
  using std::logic_error::logic_error;
};

struct InsufficientSamplesError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace sbm
