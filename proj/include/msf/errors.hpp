#pragma once

#include <stdexcept>
#include <string>

namespace msf {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Quantum numbers inconsistent with the sector ranges (j, l).
class SectorError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A multivalued factor would have to be evaluated across its branch cut.
class BranchError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Result is not representable as an unscaled double.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// An iterative or adaptive method did not reach the requested tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

/// A truncated representation would exceed its configured size cap.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace msf
