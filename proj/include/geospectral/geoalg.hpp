#pragma once

// 2-blades as antisymmetric matrices: u ^ v = u v^T - v u^T.

#include <cmath>
#include <utility>

#include "geospectral/dense.hpp"

namespace geospectral {

template <typename Scalar>
class Bivector {
 public:
  Bivector() = default;

  /// Keeps only the antisymmetric part of `rep`.
  explicit Bivector(const Matrix<Scalar>& rep) : rep_((rep - rep.transpose()) / Scalar{2}) {
    if (rep.rows() != rep.cols()) throw ShapeError("Bivector: representation must be square");
  }

  static Bivector zero(Eigen::Index n) { return Bivector(Matrix<Scalar>::Zero(n, n)); }

  const Matrix<Scalar>& matrix() const noexcept { return rep_; }
  Eigen::Index dim() const noexcept { return rep_.rows(); }
  Scalar norm() const { return rep_.norm(); }

 private:
  Matrix<Scalar> rep_;
};

/// Vector geometric product: scalar part u.v plus bivector part u ^ v.
template <typename Scalar>
struct GeometricNumber {
  Scalar scalar{};
  Bivector<Scalar> bivector;
};

template <typename Scalar>
Bivector<Scalar> wedge(const Vector<Scalar>& u, const Vector<Scalar>& v) {
  if (u.size() != v.size()) throw ShapeError("wedge: dimensions differ");
  return Bivector<Scalar>(u * v.transpose() - v * u.transpose());
}

template <typename Scalar>
GeometricNumber<Scalar> geometric_product(const Vector<Scalar>& u, const Vector<Scalar>& v) {
  if (u.size() != v.size()) throw ShapeError("geometric_product: dimensions differ");
  return {dot(u, v), wedge(u, v)};
}

/// (u ^ v) x = u (v.x) - v (u.x): lies in span(u, v) and is orthogonal to x.
template <typename Scalar>
Vector<Scalar> bivector_apply(const Bivector<Scalar>& b, const Vector<Scalar>& x) {
  if (b.dim() != x.size()) throw ShapeError("bivector_apply: dimensions differ");
  return b.matrix() * x;
}

/// For a blade of orthonormal generators this is minus the projector onto its plane.
template <typename Scalar>
Matrix<Scalar> bivector_square(const Bivector<Scalar>& b) {
  return b.matrix() * b.matrix();
}

template <typename Scalar>
std::pair<Vector<Scalar>, Vector<Scalar>> orthonormalize_pair(const Vector<Scalar>& u,
                                                              const Vector<Scalar>& v) {
  if (u.size() != v.size()) throw ShapeError("orthonormalize_pair: dimensions differ");
  const Scalar u_norm = u.norm();
  if (!(u_norm > Scalar{0})) throw DegeneratePlaneError("orthonormalize_pair: first vector is zero");
  Vector<Scalar> e1 = u / u_norm;
  Vector<Scalar> e2 = v - dot(v, e1) * e1;
  const Scalar residual = e2.norm();
  if (!(residual > Scalar(1e-12) * v.norm()))
    throw DegeneratePlaneError("orthonormalize_pair: vectors are linearly dependent");
  e2 /= residual;
  return {std::move(e1), std::move(e2)};
}

}  // namespace geospectral
