#pragma once

// Real spectral decomposition
//
//   M = sum_i alpha_i a_i c_i^T / (c_i . a_i) + sum_k M_k,
//
// where every complex conjugate pair sigma +- i omega with right eigenvector
// b + i p and left eigenvector d + i q contributes the real plane term
//
//   M_k = (1/nu) (b ^ p) [omega (d d^T + q q^T) - sigma (d ^ q)]
//       = (1/nu) [omega (b b^T + p p^T) - sigma (b ^ p)] (d ^ q),
//   nu  = (d.b)^2 + (q.b)^2.
//
// Nothing on this path uses complex arithmetic.

#include <algorithm>
#include <cmath>
#include <vector>

#include "geospectral/dense.hpp"
#include "geospectral/eigensolve.hpp"
#include "geospectral/errors.hpp"
#include "geospectral/geoalg.hpp"

namespace geospectral {

template <typename Scalar>
struct BiorthogonalityResidual {
  Scalar r1{};  // d.b - q.p
  Scalar r2{};  // q.b + d.p
};

/// Real split of d^T b = 0 (the partner left vector against b). Vanishes for
/// a same-pair split and, term by term, for vectors of different pairs.
template <typename Scalar>
BiorthogonalityResidual<Scalar> biorthogonality_residual(const Vector<Scalar>& b,
                                                         const Vector<Scalar>& p,
                                                         const Vector<Scalar>& d,
                                                         const Vector<Scalar>& q) {
  return {dot(d, b) - dot(q, p), dot(q, b) + dot(d, p)};
}

template <typename Scalar>
Scalar nu(const Vector<Scalar>& b, const Vector<Scalar>& d, const Vector<Scalar>& q) {
  const Scalar db = dot(d, b);
  const Scalar qb = dot(q, b);
  const Scalar value = db * db + qb * qb;
  const Scalar scale = d.norm() * b.norm() + q.norm() * b.norm();
  if (!(value >= Scalar(1e-24) * scale * scale) || !(value > Scalar{0}))
    throw DegeneratePairError("plane term normalization vanishes");
  return value;
}

/// One complex conjugate pair, stored through its omega > 0 representative.
template <typename Scalar>
struct ComplexPlaneTerm {
  Scalar sigma{};
  Scalar omega{};
  Vector<Scalar> b, p, d, q;
  Scalar nu{};
  BiorthogonalityResidual<Scalar> biorthogonality;

  static ComplexPlaneTerm make(Scalar sigma, Scalar omega, Vector<Scalar> b, Vector<Scalar> p,
                               Vector<Scalar> d, Vector<Scalar> q) {
    if (!(omega > Scalar{0})) throw InvalidInputError("plane term needs omega > 0");
    const auto n = b.size();
    if (p.size() != n || d.size() != n || q.size() != n)
      throw ShapeError("plane term vectors differ in dimension");
    ComplexPlaneTerm t;
    t.sigma = sigma;
    t.omega = omega;
    t.nu = geospectral::nu(b, d, q);
    t.biorthogonality = biorthogonality_residual(b, p, d, q);
    t.b = std::move(b);
    t.p = std::move(p);
    t.d = std::move(d);
    t.q = std::move(q);
    return t;
  }

  Eigen::Index dim() const noexcept { return b.size(); }
};

template <typename Scalar>
struct RealTerm {
  Scalar alpha{};
  Vector<Scalar> a, c;

  static RealTerm make(Scalar alpha, Vector<Scalar> a, Vector<Scalar> c) {
    if (a.size() != c.size()) throw ShapeError("real term vectors differ in dimension");
    const Scalar overlap = dot(c, a);
    if (!(std::abs(overlap) > Scalar(1e-12) * a.norm() * c.norm()))
      throw DegeneratePairError("left and right eigenvectors are orthogonal");
    return {alpha, std::move(a), std::move(c)};
  }

  Eigen::Index dim() const noexcept { return a.size(); }
};

template <typename Scalar>
struct Diagnostics {
  /// |M - reconstruct|_F / |M|_F.
  Scalar reconstruction_residual{};
  /// Largest eigenvector residual relative to |M|_F and the vector norms.
  Scalar max_eigen_residual{};
  /// Largest |d.b - q.p| or |q.b + d.p| over the plane terms.
  Scalar max_biorthogonality_residual{};
  Scalar reciprocal_condition{1};
  int sweeps = 0;
};

template <typename Scalar>
struct SpectralDecomposition {
  Eigen::Index dim = 0;
  std::vector<RealTerm<Scalar>> real_terms;
  std::vector<ComplexPlaneTerm<Scalar>> plane_terms;
  Diagnostics<Scalar> diagnostics;

  void validate() const {
    if (static_cast<Eigen::Index>(real_terms.size() + 2 * plane_terms.size()) != dim)
      throw ShapeError("decomposition term count does not match dimension");
    for (const auto& t : real_terms)
      if (t.dim() != dim) throw ShapeError("real term has wrong dimension");
    for (const auto& t : plane_terms)
      if (t.dim() != dim) throw ShapeError("plane term has wrong dimension");
  }

  std::vector<Eigenvalue<Scalar>> eigenvalues() const {
    std::vector<Eigenvalue<Scalar>> out;
    for (const auto& t : real_terms) out.push_back(Eigenvalue<Scalar>::real(t.alpha));
    for (const auto& t : plane_terms) out.push_back(Eigenvalue<Scalar>::pair(t.sigma, t.omega));
    return out;
  }
};

/// Left-blade form for arbitrary (sigma, omega); no sign or nu checks.
template <typename Scalar>
Matrix<Scalar> plane_matrix(Scalar sigma, Scalar omega, const Vector<Scalar>& b,
                            const Vector<Scalar>& p, const Vector<Scalar>& d,
                            const Vector<Scalar>& q, Scalar normalization) {
  const Matrix<Scalar> left_sym = d * d.transpose() + q * q.transpose();
  const Matrix<Scalar> bracket = omega * left_sym - sigma * wedge(d, q).matrix();
  return (wedge(b, p).matrix() * bracket) / normalization;
}

template <typename Scalar>
Matrix<Scalar> plane_term_left_form(const ComplexPlaneTerm<Scalar>& t) {
  return plane_matrix(t.sigma, t.omega, t.b, t.p, t.d, t.q, nu(t.b, t.d, t.q));
}

template <typename Scalar>
Matrix<Scalar> plane_term_right_form(const ComplexPlaneTerm<Scalar>& t) {
  const Scalar n = nu(t.b, t.d, t.q);
  const Matrix<Scalar> right_sym = t.b * t.b.transpose() + t.p * t.p.transpose();
  const Matrix<Scalar> bracket = t.omega * right_sym - t.sigma * wedge(t.b, t.p).matrix();
  return (bracket * wedge(t.d, t.q).matrix()) / n;
}

template <typename Scalar>
Matrix<Scalar> real_rank_one_term(const RealTerm<Scalar>& t) {
  const Scalar overlap = dot(t.c, t.a);
  if (!(std::abs(overlap) > Scalar(1e-12) * t.a.norm() * t.c.norm()))
    throw DegeneratePairError("left and right eigenvectors are orthogonal");
  return (t.alpha / overlap) * (t.a * t.c.transpose());
}

/// Swapping the right pair (b, p) with the left pair (d, q) and flipping the
/// sign of omega transposes the plane term. The omega flip is folded into
/// conjugated vectors so the result keeps omega > 0.
template <typename Scalar>
ComplexPlaneTerm<Scalar> transpose_term(const ComplexPlaneTerm<Scalar>& t) {
  return ComplexPlaneTerm<Scalar>::make(t.sigma, t.omega, t.d, -t.q, t.b, -t.p);
}

template <typename Scalar>
Matrix<Scalar> reconstruct(const SpectralDecomposition<Scalar>& dec) {
  dec.validate();
  Matrix<Scalar> m = Matrix<Scalar>::Zero(dec.dim, dec.dim);
  for (const auto& t : dec.real_terms) m += real_rank_one_term(t);
  for (const auto& t : dec.plane_terms) m += plane_term_left_form(t);
  return m;
}

/// Action on x evaluated term by term, O(n) per term.
template <typename Scalar>
Vector<Scalar> apply(const SpectralDecomposition<Scalar>& dec, const Vector<Scalar>& x) {
  if (x.size() != dec.dim) throw ShapeError("apply: dimension mismatch");
  Vector<Scalar> y = Vector<Scalar>::Zero(dec.dim);
  for (const auto& t : dec.real_terms) y += (t.alpha * dot(t.c, x) / dot(t.c, t.a)) * t.a;
  for (const auto& t : dec.plane_terms) {
    const Scalar dx = dot(t.d, x);
    const Scalar qx = dot(t.q, x);
    // [omega (d d^T + q q^T) - sigma (d q^T - q d^T)] x
    const Vector<Scalar> inner = (t.omega * dx - t.sigma * qx) * t.d + (t.omega * qx + t.sigma * dx) * t.q;
    // (b p^T - p b^T) inner
    y += (dot(t.p, inner) * t.b - dot(t.b, inner) * t.p) / nu(t.b, t.d, t.q);
  }
  return y;
}

/// Block-diagonal real canonical form M = B L B^-1.
template <typename Scalar>
struct CanonicalForm {
  Matrix<Scalar> basis;          // columns a_i, then (b_k, p_k) pairs
  Matrix<Scalar> blocks;         // alpha_i, then [[sigma, omega], [-omega, sigma]]
  Matrix<Scalar> basis_inverse;

  Matrix<Scalar> similarity() const { return basis * blocks * basis_inverse; }
};

template <typename Scalar>
CanonicalForm<Scalar> real_canonical_form(const SpectralDecomposition<Scalar>& dec,
                                          Scalar min_rcond = Scalar(1e-12)) {
  dec.validate();
  const Eigen::Index n = dec.dim;
  CanonicalForm<Scalar> cf{Matrix<Scalar>::Zero(n, n), Matrix<Scalar>::Zero(n, n), {}};
  Eigen::Index col = 0;
  for (const auto& t : dec.real_terms) {
    cf.basis.col(col) = t.a;
    cf.blocks(col, col) = t.alpha;
    ++col;
  }
  for (const auto& t : dec.plane_terms) {
    cf.basis.col(col) = t.b;
    cf.basis.col(col + 1) = t.p;
    cf.blocks(col, col) = t.sigma;
    cf.blocks(col, col + 1) = t.omega;
    cf.blocks(col + 1, col) = -t.omega;
    cf.blocks(col + 1, col + 1) = t.sigma;
    col += 2;
  }
  try {
    cf.basis_inverse = inverse(cf.basis);
  } catch (const SingularMatrixError&) {
    throw NotDiagonalizableError("canonical basis is singular");
  }
  if (reciprocal_condition(cf.basis, cf.basis_inverse) < min_rcond)
    throw NotDiagonalizableError("canonical basis is too ill-conditioned");
  return cf;
}

/// Relative eigen-residual of every term against m.
template <typename Scalar>
Scalar max_eigen_residual(const SpectralDecomposition<Scalar>& dec, const Matrix<Scalar>& m) {
  const Scalar scale = std::max(m.norm(), std::numeric_limits<Scalar>::min());
  Scalar worst{0};
  for (const auto& t : dec.real_terms)
    worst = std::max(worst, (m * t.a - t.alpha * t.a).norm() / (scale * t.a.norm()));
  for (const auto& t : dec.plane_terms) {
    const Scalar r = (m * t.b - (t.sigma * t.b - t.omega * t.p)).norm() +
                     (m * t.p - (t.omega * t.b + t.sigma * t.p)).norm();
    worst = std::max(worst, r / (scale * (t.b.norm() + t.p.norm())));
  }
  return worst;
}

/// Runs the eigensolver and assembles the real decomposition.
///
/// Real terms are ordered by ascending alpha, plane terms by ascending sigma
/// then omega. `tol` bounds the relative eigenvector residuals.
template <typename Scalar>
SpectralDecomposition<Scalar> decompose(const Matrix<Scalar>& m, Scalar tol = Scalar(1e-9)) {
  EigenOptions<Scalar> opts;
  opts.residual_tol = tol;
  const auto sys = eigensystem(m, opts);

  SpectralDecomposition<Scalar> dec;
  dec.dim = sys.dim;
  for (std::size_t i = 0; i < sys.eigenvalues.size(); ++i) {
    const auto& ev = sys.eigenvalues[i];
    const auto& r = sys.right[i];
    const auto& l = sys.left[i];
    if (ev.is_real())
      dec.real_terms.push_back(RealTerm<Scalar>::make(ev.alpha, r.re, l.re));
    else
      dec.plane_terms.push_back(
          ComplexPlaneTerm<Scalar>::make(ev.sigma, ev.omega, r.re, r.im, l.re, l.im));
  }
  std::stable_sort(dec.real_terms.begin(), dec.real_terms.end(),
                   [](const auto& x, const auto& y) { return x.alpha < y.alpha; });
  std::stable_sort(dec.plane_terms.begin(), dec.plane_terms.end(), [](const auto& x, const auto& y) {
    return x.sigma < y.sigma || (x.sigma == y.sigma && x.omega < y.omega);
  });

  auto& diag = dec.diagnostics;
  diag.reciprocal_condition = sys.reciprocal_condition;
  diag.sweeps = sys.sweeps;
  diag.max_eigen_residual = max_eigen_residual(dec, m);
  for (const auto& t : dec.plane_terms)
    diag.max_biorthogonality_residual = std::max(
        {diag.max_biorthogonality_residual, std::abs(t.biorthogonality.r1), std::abs(t.biorthogonality.r2)});
  const Scalar m_norm = m.norm();
  const Scalar err = (m - reconstruct(dec)).norm();
  diag.reconstruction_residual = m_norm > Scalar{0} ? err / m_norm : err;
  return dec;
}

}  // namespace geospectral
