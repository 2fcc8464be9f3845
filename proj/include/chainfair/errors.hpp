#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace chainfair {

/// Caller broke a precondition on shapes or states (dimension mismatch,
/// invalid slot state).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Iterative method stopped without meeting its tolerance. Carries the last
/// iterate and its sup-norm residual so callers can report them.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> last_iterate,
                   double residual)
      : std::runtime_error(what),
        last_iterate_(std::move(last_iterate)),
        residual_(residual) {}

  const std::vector<double>& last_iterate() const { return last_iterate_; }
  double residual() const { return residual_; }

 private:
  std::vector<double> last_iterate_;
  double residual_;
};

class LinearSolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested value cannot be produced; reports the achievable interval.
class RangeError : public std::out_of_range {
 public:
  RangeError(const std::string& what, double lo, double hi)
      : std::out_of_range(what), lo_(lo), hi_(hi) {}
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_;
  double hi_;
};

class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class NormalizationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace chainfair
