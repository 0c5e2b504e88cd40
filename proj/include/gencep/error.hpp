// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gencep {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed (no convergence, degenerate input, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The circulant covariance handed to the periodic generator is not
/// positive definite.
class DefinitenessError : public NumericalError {
 public:
  DefinitenessError(std::size_t index, double eigenvalue)
      : NumericalError("circulant covariance is not positive definite: eigenvalue " +
                       std::to_string(index) + " = " + std::to_string(eigenvalue)),
        index_(index),
        eigenvalue_(eigenvalue) {}

  std::size_t index() const noexcept { return index_; }
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  std::size_t index_;
  double eigenvalue_;
};

/// A dual iterate has a nonpositive P or Q value on the grid.
class InfeasiblePointError : public DomainError {
 public:
  InfeasiblePointError(const std::string& which, std::size_t node, double value)
      : DomainError(which + " is not strictly positive at grid node " + std::to_string(node) +
                    " (value " + std::to_string(value) + ")"),
        node_(node) {}

  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

/// Spectral factorization failed to reach its residual tolerance.
class FactorizationError : public NumericalError {
 public:
  FactorizationError(const std::string& what, double residual)
      : NumericalError(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A 2-d polynomial is not numerically separable.
class SeparabilityError : public NumericalError {
 public:
  explicit SeparabilityError(double ratio)
      : NumericalError("polynomial is not separable: singular value ratio " + std::to_string(ratio)),
        ratio_(ratio) {}

  double singular_value_ratio() const noexcept { return ratio_; }

 private:
  double ratio_;
};

}  // namespace gencep
