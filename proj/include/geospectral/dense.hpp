#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "geospectral/errors.hpp"

namespace geospectral {

// Row-major dense storage throughout; the matrices handled here are small.
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

template <typename DerivedA, typename DerivedB>
void require_same_size(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                       const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError(what);
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
  return a.array().isFinite().all();
}

template <typename Scalar>
Matrix<Scalar> mat_mul(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  if (a.cols() != b.rows()) throw ShapeError("mat_mul: inner dimensions differ");
  return a * b;
}

template <typename Scalar>
Scalar frobenius_norm(const Matrix<Scalar>& a) {
  return a.norm();
}

/// Plain left-to-right summation, so dot(u, v) == dot(v, u) bit for bit.
template <typename Scalar>
Scalar dot(const Vector<Scalar>& u, const Vector<Scalar>& v) {
  if (u.size() != v.size()) throw ShapeError("dot: dimensions differ");
  Scalar sum{0};
  for (Eigen::Index i = 0; i < u.size(); ++i) sum += u[i] * v[i];
  return sum;
}

template <typename Scalar>
Scalar norm1(const Matrix<Scalar>& a) {
  if (a.size() == 0) return Scalar{0};
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

/// Solves A X = B by Gaussian elimination with partial pivoting.
///
/// A pivot smaller than n * eps * max|A| raises SingularMatrixError carrying
/// the elimination step at which it occurred.
template <typename Scalar>
Matrix<Scalar> solve_linear(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw ShapeError("solve_linear: matrix is not square");
  if (b.rows() != n) throw ShapeError("solve_linear: right-hand side has wrong row count");

  Matrix<Scalar> lu = a;
  Matrix<Scalar> x = b;
  const Scalar threshold =
      static_cast<Scalar>(n) * std::numeric_limits<Scalar>::epsilon() * a.cwiseAbs().maxCoeff();

  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot_row = k;
    Scalar pivot_abs = std::abs(lu(k, k));
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (std::abs(lu(i, k)) > pivot_abs) {
        pivot_abs = std::abs(lu(i, k));
        pivot_row = i;
      }
    }
    if (!(pivot_abs > threshold)) throw SingularMatrixError(static_cast<std::size_t>(k));
    if (pivot_row != k) {
      lu.row(k).swap(lu.row(pivot_row));
      x.row(k).swap(x.row(pivot_row));
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const Scalar factor = lu(i, k) / lu(k, k);
      if (factor == Scalar{0}) continue;
      lu.row(i).tail(n - k - 1) -= factor * lu.row(k).tail(n - k - 1);
      lu(i, k) = Scalar{0};
      x.row(i) -= factor * x.row(k);
    }
  }
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    if (k + 1 < n) x.row(k) -= lu.row(k).tail(n - k - 1) * x.bottomRows(n - k - 1);
    x.row(k) /= lu(k, k);
  }
  return x;
}

template <typename Scalar>
Matrix<Scalar> inverse(const Matrix<Scalar>& a) {
  return solve_linear<Scalar>(a, Matrix<Scalar>::Identity(a.rows(), a.cols()));
}

/// Reciprocal 1-norm condition number, 1 / (|A|_1 |A^-1|_1), given A^-1.
template <typename Scalar>
Scalar reciprocal_condition(const Matrix<Scalar>& a, const Matrix<Scalar>& a_inv) {
  const Scalar denom = norm1(a) * norm1(a_inv);
  return denom > Scalar{0} ? Scalar{1} / denom : Scalar{0};
}

}  // namespace geospectral
