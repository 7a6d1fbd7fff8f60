#pragma once

#include <stdexcept>
#include <string>

namespace polymer_traps {

/// Argument outside the mathematical domain of an operation (t <= 0, alpha >= 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Discretization or run parameters that cannot produce a valid result.
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A trap field whose box does not cover the path range enlarged by the trap radius.
class CoverageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Quadrature or fitting failure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace polymer_traps
