#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geospectral {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand dimensions do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Elimination hit a pivot below the singularity threshold.
class SingularMatrixError : public Error {
 public:
  explicit SingularMatrixError(std::size_t pivot)
      : Error("matrix is singular to working precision (pivot " + std::to_string(pivot) + ")"),
        pivot_(pivot) {}
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

/// Shifted QR did not deflate within the sweep budget.
class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(std::size_t index)
      : Error("QR iteration did not converge (stuck at subdiagonal index " + std::to_string(index) +
              ")"),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// An eigenvector failed its residual check.
class AccuracyError : public Error {
 public:
  explicit AccuracyError(double residual)
      : Error("eigenvector residual " + std::to_string(residual) + " exceeds tolerance"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class NotDiagonalizableError : public Error {
 public:
  NotDiagonalizableError() : Error("matrix is not diagonalizable within tolerance") {}
  explicit NotDiagonalizableError(const std::string& detail)
      : Error("matrix is not diagonalizable within tolerance: " + detail) {}
};

/// A right/left vector pair has (numerically) vanishing overlap.
class DegeneratePairError : public Error {
 public:
  using Error::Error;
};

/// Two vectors do not span a plane.
class DegeneratePlaneError : public Error {
 public:
  using Error::Error;
};

class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// A block the Schur stage should have split reached eigenvalue extraction.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace geospectral
