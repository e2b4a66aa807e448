#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace conegeo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point lies outside the (non-periodic part of the) chart domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Metric failed the Cholesky test at some point.
class DegenerateMetricError : public Error {
 public:
  using Error::Error;
};

/// A derivative was requested beyond the order a jet carries.
class OrderError : public Error {
 public:
  using Error::Error;
};

/// Cone radial interval touches r = 0 (or is otherwise not inside (0, inf)).
class CompletionError : public Error {
 public:
  using Error::Error;
};

/// The candidate field violates phi^2 = -Id + eta (x) xi (or unit length).
class NotContactMetricError : public Error {
 public:
  NotContactMetricError(const std::string& what, double max_residual, std::vector<double> witness)
      : Error(what), max_residual_(max_residual), witness_(std::move(witness)) {}

  double max_residual() const noexcept { return max_residual_; }
  const std::vector<double>& witness() const noexcept { return witness_; }

 private:
  double max_residual_;
  std::vector<double> witness_;
};

/// J built from Omega does not square to -Id.
class IncompatibleStructureError : public Error {
 public:
  using Error::Error;
};

/// |lambda| > 2: the two structures cannot both be orthogonal complex structures.
class ImpossiblePairError : public Error {
 public:
  using Error::Error;
};

/// |lambda| = 2, i.e. J' = +-J; no third structure exists.
class DegeneratePairError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace conegeo
