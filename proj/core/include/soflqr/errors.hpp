#pragma once

#include <stdexcept>
#include <string>

namespace soflqr {

/// Base class for every error raised by the library.
class SofError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent matrix shapes, reported with the offending field name.
class DimensionError : public SofError {
 public:
  using SofError::SofError;
};

/// Input data violates a documented precondition (symmetry, definiteness, ...).
class InvalidArgumentError : public SofError {
 public:
  using SofError::SofError;
};

/// The closed-loop matrix is not Hurwitz, so the Lyapunov equation has no
/// usable solution. Raised by the Lyapunov kernel.
class NotHurwitzError : public SofError {
 public:
  NotHurwitzError(const std::string& what, double abscissa)
      : SofError(what), abscissa_(abscissa) {}
  double abscissa() const { return abscissa_; }

 private:
  double abscissa_;
};

/// The gain leaves the stabilizing set; the LQR cost is unbounded there.
class InfiniteCostError : public SofError {
 public:
  InfiniteCostError(const std::string& what, double abscissa)
      : SofError(what), abscissa_(abscissa) {}
  double abscissa() const { return abscissa_; }

 private:
  double abscissa_;
};

/// Right-hand side of the flattened constraints lies outside the range of the
/// constraint matrix.
class InfeasibleConstraintsError : public SofError {
 public:
  using SofError::SofError;
};

/// Initial gain violates the structural constraints.
class InfeasibleGainError : public SofError {
 public:
  using SofError::SofError;
};

/// Initial gain does not stabilize the closed loop.
class UnstableGainError : public SofError {
 public:
  using SofError::SofError;
};

/// Backtracking shrank the step below the underflow floor without acceptance.
class LineSearchStalledError : public SofError {
 public:
  using SofError::SofError;
};

/// Eigen/Schur/factorization failures and singular linear systems.
class NumericalError : public SofError {
 public:
  using SofError::SofError;
};

}  // namespace soflqr
