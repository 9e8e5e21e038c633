#pragma once

// Dense real eigensolver: Householder reduction to Hessenberg form, Francis
// double-shift QR to real Schur form, Schur back-substitution for the right
// eigenvectors and one solve against the eigenvector basis for the left ones.
//
// Complex pairs are always stored through the representative with omega > 0
// and their eigenvectors as a real/imaginary split (re, im).

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

#include "geospectral/dense.hpp"
#include "geospectral/errors.hpp"

namespace geospectral {

enum class EigenKind { Real, ComplexPair };

template <typename Scalar>
struct Eigenvalue {
  EigenKind kind = EigenKind::Real;
  Scalar alpha{};
  Scalar sigma{};
  Scalar omega{};

  static Eigenvalue real(Scalar a) { return {EigenKind::Real, a, Scalar{}, Scalar{}}; }

  /// Either sign of omega names the same conjugate pair.
  static Eigenvalue pair(Scalar s, Scalar w) {
    if (!(std::abs(w) > Scalar{0})) throw InvalidInputError("complex pair needs nonzero omega");
    return {EigenKind::ComplexPair, Scalar{}, s, std::abs(w)};
  }

  bool is_real() const noexcept { return kind == EigenKind::Real; }
  int multiplicity() const noexcept { return is_real() ? 1 : 2; }
  std::complex<Scalar> value() const {
    return is_real() ? std::complex<Scalar>(alpha, 0) : std::complex<Scalar>(sigma, omega);
  }
};

/// Real and imaginary parts of a complex vector re + i im.
template <typename Scalar>
struct ComplexVectorSplit {
  Vector<Scalar> re;
  Vector<Scalar> im;

  Eigen::Index dim() const noexcept { return re.size(); }
};

template <typename Scalar>
struct HessenbergForm {
  Matrix<Scalar> h;
  Matrix<Scalar> q;
};

template <typename Scalar>
struct SchurForm {
  Matrix<Scalar> t;
  Matrix<Scalar> z;
  int sweeps = 0;
};

/// Right and left eigenvectors aligned index-by-index with the eigenvalues.
/// Entries belonging to real eigenvalues carry a zero imaginary part.
template <typename Scalar>
struct EigenSystem {
  Eigen::Index dim = 0;
  std::vector<Eigenvalue<Scalar>> eigenvalues;
  std::vector<ComplexVectorSplit<Scalar>> right;
  std::vector<ComplexVectorSplit<Scalar>> left;
  Scalar reciprocal_condition{1};
  int sweeps = 0;
};

template <typename Scalar>
struct EigenOptions {
  /// Eigenvector residual bound, relative to |M|_F and the vector norms.
  Scalar residual_tol = Scalar(1e-9);
  /// Eigenvalues closer than this (relative to |M|_F) form a cluster.
  Scalar cluster_tol = Scalar(1e-8);
  /// Smallest acceptable reciprocal condition number of the eigenvector basis.
  Scalar min_rcond = Scalar(1e-12);
  int sweeps_per_row = 30;
};

namespace detail {

/// Householder vector for x (m <= 3): (I - tau v v^T) x = beta e1 with v = (1, ess).
template <typename Scalar>
struct Reflector {
  Scalar ess[2] = {Scalar{0}, Scalar{0}};
  Scalar tau{0};
  Scalar beta{0};
};

template <typename Scalar>
Reflector<Scalar> make_reflector(const Scalar* x, int m) {
  Reflector<Scalar> r;
  Scalar tail_sq{0};
  for (int i = 1; i < m; ++i) tail_sq += x[i] * x[i];
  const Scalar c0 = x[0];
  if (tail_sq <= std::numeric_limits<Scalar>::min()) {
    r.beta = c0;
    return r;
  }
  r.beta = std::sqrt(c0 * c0 + tail_sq);
  if (c0 >= Scalar{0}) r.beta = -r.beta;
  for (int i = 1; i < m; ++i) r.ess[i - 1] = x[i] / (c0 - r.beta);
  r.tau = (r.beta - c0) / r.beta;
  return r;
}

// Rows [row0, row0+m) of columns [col0, cols) get (I - tau v v^T) from the left.
template <typename Scalar>
void reflect_rows(Matrix<Scalar>& a, const Reflector<Scalar>& r, int m, Eigen::Index row0,
                  Eigen::Index col0) {
  if (r.tau == Scalar{0}) return;
  for (Eigen::Index j = col0; j < a.cols(); ++j) {
    Scalar s = a(row0, j);
    for (int i = 1; i < m; ++i) s += r.ess[i - 1] * a(row0 + i, j);
    s *= r.tau;
    a(row0, j) -= s;
    for (int i = 1; i < m; ++i) a(row0 + i, j) -= s * r.ess[i - 1];
  }
}

// Columns [col0, col0+m) of rows [0, row_end] get (I - tau v v^T) from the right.
template <typename Scalar>
void reflect_cols(Matrix<Scalar>& a, const Reflector<Scalar>& r, int m, Eigen::Index col0,
                  Eigen::Index row_end) {
  if (r.tau == Scalar{0}) return;
  for (Eigen::Index i = 0; i <= row_end; ++i) {
    Scalar s = a(i, col0);
    for (int j = 1; j < m; ++j) s += r.ess[j - 1] * a(i, col0 + j);
    s *= r.tau;
    a(i, col0) -= s;
    for (int j = 1; j < m; ++j) a(i, col0 + j) -= s * r.ess[j - 1];
  }
}

struct Block {
  Eigen::Index start;
  int size;
};

template <typename Scalar>
std::vector<Block> diagonal_blocks(const Matrix<Scalar>& t) {
  std::vector<Block> blocks;
  const Eigen::Index n = t.rows();
  for (Eigen::Index i = 0; i < n;) {
    if (i + 1 < n && t(i + 1, i) != Scalar{0}) {
      blocks.push_back({i, 2});
      i += 2;
    } else {
      blocks.push_back({i, 1});
      i += 1;
    }
  }
  return blocks;
}

template <typename Scalar>
using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
Scalar max_abs(const CVector<Scalar>& x) {
  Scalar m{0};
  for (Eigen::Index i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i]));
  return m;
}

}  // namespace detail

/// Householder reduction M = Q H Q^T with H upper Hessenberg.
template <typename Scalar>
HessenbergForm<Scalar> hessenberg_reduce(const Matrix<Scalar>& m) {
  const Eigen::Index n = m.rows();
  if (m.cols() != n) throw ShapeError("hessenberg_reduce: matrix is not square");
  HessenbergForm<Scalar> out{m, Matrix<Scalar>::Identity(n, n)};
  Matrix<Scalar>& h = out.h;
  Matrix<Scalar>& q = out.q;

  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index len = n - k - 1;
    Vector<Scalar> v = h.col(k).tail(len);
    const Scalar tail_norm = v.tail(len - 1).norm();
    if (tail_norm == Scalar{0}) continue;
    const Scalar alpha = v.norm();
    const Scalar signed_alpha = v[0] >= Scalar{0} ? alpha : -alpha;
    v[0] += signed_alpha;
    v /= v.norm();

    // H <- P H P with P = I - 2 v v^T acting on indices k+1..n-1.
    auto rows = h.bottomRows(len);
    const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> vt_rows = v.transpose() * rows;
    rows.noalias() -= Scalar{2} * v * vt_rows;
    auto cols = h.rightCols(len);
    const Vector<Scalar> cols_v = cols * v;
    cols.noalias() -= Scalar{2} * cols_v * v.transpose();
    auto qcols = q.rightCols(len);
    const Vector<Scalar> q_v = qcols * v;
    qcols.noalias() -= Scalar{2} * q_v * v.transpose();

    h(k + 1, k) = -signed_alpha;
    h.col(k).tail(len - 1).setZero();
  }
  return out;
}

/// Francis double-shift QR on a Hessenberg matrix, accumulating into q.
///
/// A subdiagonal entry is deflated once |h(i+1,i)| <= eps * (|h(i,i)| + |h(i+1,i+1)|),
/// with tol as the floor of that scale. 2x2 blocks with real eigenvalues are
/// split by a Givens rotation, so every remaining 2x2 block is a complex pair.
template <typename Scalar>
SchurForm<Scalar> real_schur(const Matrix<Scalar>& h, const Matrix<Scalar>& q, Scalar tol,
                             int max_sweeps) {
  using std::abs;
  using std::sqrt;
  const Eigen::Index n = h.rows();
  if (h.cols() != n || q.rows() != n || q.cols() != n)
    throw ShapeError("real_schur: inconsistent dimensions");

  SchurForm<Scalar> out{h, q, 0};
  Matrix<Scalar>& t = out.t;
  Matrix<Scalar>& z = out.z;
  if (n == 0) return out;

  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  Scalar norm{0};
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= std::min<Eigen::Index>(n - 1, j + 1); ++i) norm += abs(t(i, j));
  if (norm == Scalar{0}) return out;
  const Scalar floor = std::max(tol, std::numeric_limits<Scalar>::min());

  auto find_small_subdiag = [&](Eigen::Index iu) {
    Eigen::Index res = iu;
    while (res > 0) {
      const Scalar s = std::max(abs(t(res - 1, res - 1)) + abs(t(res, res)), floor);
      if (abs(t(res, res - 1)) <= eps * s) break;
      --res;
    }
    return res;
  };

  Eigen::Index iu = n - 1;
  int iter = 0;
  int total = 0;
  Scalar exshift{0};

  while (iu >= 0) {
    const Eigen::Index il = find_small_subdiag(iu);
    if (il == iu) {
      t(iu, iu) += exshift;
      if (iu > 0) t(iu, iu - 1) = Scalar{0};
      --iu;
      iter = 0;
      continue;
    }
    if (il == iu - 1) {
      // Two roots: split real pairs by a rotation, keep complex ones as a block.
      const Eigen::Index i = iu - 1;
      const Scalar w = t(iu, i) * t(i, iu);
      Scalar p = (t(i, i) - t(iu, iu)) / Scalar{2};
      const Scalar disc = p * p + w;
      t(iu, iu) += exshift;
      t(i, i) += exshift;
      if (disc >= Scalar{0}) {
        Scalar zz = sqrt(abs(disc));
        zz = p >= Scalar{0} ? p + zz : p - zz;
        const Scalar x = t(iu, i);
        const Scalar s = abs(x) + abs(zz);
        if (s > Scalar{0}) {
          Scalar pr = x / s;
          Scalar qr = zz / s;
          const Scalar r = sqrt(pr * pr + qr * qr);
          pr /= r;
          qr /= r;
          for (Eigen::Index j = i; j < n; ++j) {
            const Scalar a = t(i, j);
            t(i, j) = qr * a + pr * t(iu, j);
            t(iu, j) = qr * t(iu, j) - pr * a;
          }
          for (Eigen::Index r2 = 0; r2 <= iu; ++r2) {
            const Scalar a = t(r2, i);
            t(r2, i) = qr * a + pr * t(r2, iu);
            t(r2, iu) = qr * t(r2, iu) - pr * a;
          }
          for (Eigen::Index r2 = 0; r2 < n; ++r2) {
            const Scalar a = z(r2, i);
            z(r2, i) = qr * a + pr * z(r2, iu);
            z(r2, iu) = qr * z(r2, iu) - pr * a;
          }
        }
        t(iu, i) = Scalar{0};
      }
      if (iu > 1) t(i, i - 1) = Scalar{0};
      iu -= 2;
      iter = 0;
      continue;
    }

    // Shift selection, with the classic exceptional shifts at sweeps 10 and 30.
    Scalar shift[3] = {t(iu, iu), t(iu - 1, iu - 1), t(iu, iu - 1) * t(iu - 1, iu)};
    if (iter == 10) {
      exshift += shift[0];
      for (Eigen::Index i = 0; i <= iu; ++i) t(i, i) -= shift[0];
      const Scalar s = abs(t(iu, iu - 1)) + abs(t(iu - 1, iu - 2));
      shift[0] = Scalar(0.75) * s;
      shift[1] = Scalar(0.75) * s;
      shift[2] = Scalar(-0.4375) * s * s;
    }
    if (iter == 30) {
      Scalar s = (shift[1] - shift[0]) / Scalar{2};
      s = s * s + shift[2];
      if (s > Scalar{0}) {
        s = sqrt(s);
        if (shift[1] < shift[0]) s = -s;
        s = s + (shift[1] - shift[0]) / Scalar{2};
        s = shift[0] - shift[2] / s;
        exshift += s;
        for (Eigen::Index i = 0; i <= iu; ++i) t(i, i) -= s;
        shift[0] = shift[1] = shift[2] = Scalar(0.964);
      }
    }
    ++iter;
    ++total;
    out.sweeps = total;
    if (total > max_sweeps) throw ConvergenceError(static_cast<std::size_t>(iu));

    // Look for two consecutive small subdiagonals to start the bulge.
    Scalar v[3] = {};
    Eigen::Index im = iu - 2;
    for (; im >= il; --im) {
      const Scalar tmm = t(im, im);
      const Scalar r = shift[0] - tmm;
      const Scalar s = shift[1] - tmm;
      v[0] = (r * s - shift[2]) / t(im + 1, im) + t(im, im + 1);
      v[1] = t(im + 1, im + 1) - tmm - r - s;
      v[2] = t(im + 2, im + 1);
      if (im == il) break;
      const Scalar lhs = t(im, im - 1) * (abs(v[1]) + abs(v[2]));
      const Scalar rhs = v[0] * (abs(t(im - 1, im - 1)) + abs(tmm) + abs(t(im + 1, im + 1)));
      if (abs(lhs) < eps * rhs) break;
    }

    // Chase the bulge down to row iu.
    for (Eigen::Index k = im; k <= iu - 2; ++k) {
      const bool first = (k == im);
      Scalar x[3];
      if (first) {
        x[0] = v[0];
        x[1] = v[1];
        x[2] = v[2];
      } else {
        x[0] = t(k, k - 1);
        x[1] = t(k + 1, k - 1);
        x[2] = t(k + 2, k - 1);
      }
      const auto refl = detail::make_reflector(x, 3);
      if (refl.beta != Scalar{0}) {
        if (first && k > il)
          t(k, k - 1) = -t(k, k - 1);
        else if (!first)
          t(k, k - 1) = refl.beta;
        detail::reflect_rows(t, refl, 3, k, k);
        detail::reflect_cols(t, refl, 3, k, std::min(iu, k + 3));
        detail::reflect_cols(z, refl, 3, k, n - 1);
      }
    }
    {
      Scalar x[2] = {t(iu - 1, iu - 2), t(iu, iu - 2)};
      const auto refl = detail::make_reflector(x, 2);
      if (refl.beta != Scalar{0}) {
        t(iu - 1, iu - 2) = refl.beta;
        detail::reflect_rows(t, refl, 2, iu - 1, iu - 1);
        detail::reflect_cols(t, refl, 2, iu - 1, iu);
        detail::reflect_cols(z, refl, 2, iu - 1, n - 1);
      }
    }
    for (Eigen::Index i = im + 2; i <= iu; ++i) {
      t(i, i - 2) = Scalar{0};
      if (i > im + 2) t(i, i - 3) = Scalar{0};
    }
  }
  return out;
}

/// Reads eigenvalues off the diagonal blocks of a quasi-upper-triangular matrix.
template <typename Scalar>
std::vector<Eigenvalue<Scalar>> extract_eigenvalues(const Matrix<Scalar>& t) {
  std::vector<Eigenvalue<Scalar>> eigs;
  for (const auto& b : detail::diagonal_blocks(t)) {
    const Eigen::Index i = b.start;
    if (b.size == 1) {
      eigs.push_back(Eigenvalue<Scalar>::real(t(i, i)));
      continue;
    }
    const Scalar a = t(i, i), bb = t(i, i + 1), c = t(i + 1, i), d = t(i + 1, i + 1);
    const Scalar p = (a - d) / Scalar{2};
    const Scalar disc = p * p + bb * c;
    if (disc >= Scalar{0})
      throw InternalError("2x2 Schur block with real eigenvalues at index " + std::to_string(i));
    eigs.push_back(Eigenvalue<Scalar>::pair((a + d) / Scalar{2}, std::sqrt(-disc)));
  }
  return eigs;
}

/// Multiplies re + i im by a unit phase so its largest-magnitude entry is real
/// and positive. Near-ties (relative 1e-12) go to the lowest index.
template <typename Scalar>
ComplexVectorSplit<Scalar> canonicalize_phase(const ComplexVectorSplit<Scalar>& split) {
  if (split.re.size() != split.im.size()) throw ShapeError("canonicalize_phase: dimensions differ");
  const Eigen::Index n = split.re.size();
  Scalar max_sq{0};
  for (Eigen::Index i = 0; i < n; ++i)
    max_sq = std::max(max_sq, split.re[i] * split.re[i] + split.im[i] * split.im[i]);
  if (!(max_sq > Scalar{0})) throw InvalidInputError("canonicalize_phase: zero vector");

  const Scalar cutoff = max_sq * (Scalar{1} - Scalar(2e-12));
  Eigen::Index k = 0;
  while (split.re[k] * split.re[k] + split.im[k] * split.im[k] < cutoff) ++k;
  if (split.im[k] == Scalar{0} && split.re[k] > Scalar{0}) return split;

  const Scalar mag = std::hypot(split.re[k], split.im[k]);
  const Scalar c = split.re[k] / mag;
  const Scalar s = -split.im[k] / mag;
  ComplexVectorSplit<Scalar> out{c * split.re - s * split.im, s * split.re + c * split.im};
  out.re[k] = mag;
  out.im[k] = Scalar{0};
  return out;
}

/// Eigenvectors of M from its real Schur form M = Z T Z^T, aligned with eigs.
///
/// Real eigenvalues give unit vectors whose largest entry is positive; complex
/// pairs are phase-canonicalized and scaled so their largest entry equals 1.
/// Within a cluster of (numerically) repeated eigenvalues the vectors are
/// orthonormalized by modified Gram-Schmidt before normalization.
template <typename Scalar>
std::vector<ComplexVectorSplit<Scalar>> right_eigenvectors(
    const Matrix<Scalar>& m, const SchurForm<Scalar>& schur,
    const std::vector<Eigenvalue<Scalar>>& eigs, const EigenOptions<Scalar>& opts = {}) {
  using C = std::complex<Scalar>;
  using CVec = detail::CVector<Scalar>;
  const Matrix<Scalar>& t = schur.t;
  const Eigen::Index n = t.rows();
  const auto blocks = detail::diagonal_blocks(t);
  if (blocks.size() != eigs.size())
    throw InvalidInputError("right_eigenvectors: eigenvalues do not match Schur blocks");

  const Scalar m_norm = m.norm();
  const Scalar cluster_tol = opts.cluster_tol * m_norm;
  const Scalar defect_tol = std::sqrt(std::numeric_limits<Scalar>::epsilon()) * m_norm;

  std::vector<CVec> vecs;
  vecs.reserve(eigs.size());
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const auto& blk = blocks[bi];
    const C lambda = eigs[bi].value();
    const Eigen::Index k = blk.start;
    CVec x = CVec::Zero(n);
    Eigen::Index last = k;
    if (blk.size == 1) {
      x[k] = C(1);
    } else {
      last = k + 1;
      x[k + 1] = C(1);
      x[k] = -t(k, k + 1) / (C(t(k, k)) - lambda);
    }

    for (std::size_t bj = bi; bj-- > 0;) {
      const auto& up = blocks[bj];
      const Eigen::Index s = up.start;
      C r[2] = {C(0), C(0)};
      for (int row = 0; row < up.size; ++row)
        for (Eigen::Index j = s + up.size; j <= last; ++j) r[row] += t(s + row, j) * x[j];

      const C mu = eigs[bj].value();
      const Scalar gap = std::min(std::abs(mu - lambda), std::abs(std::conj(mu) - lambda));
      if (gap <= cluster_tol) {
        const Scalar scale = detail::max_abs<Scalar>(x);
        if (std::max(std::abs(r[0]), std::abs(r[1])) > defect_tol * scale)
          throw NotDiagonalizableError("defective eigenvalue cluster");
        continue;
      }
      if (up.size == 1) {
        x[s] = -r[0] / (C(t(s, s)) - lambda);
      } else {
        const C a00 = C(t(s, s)) - lambda, a01 = t(s, s + 1);
        const C a10 = t(s + 1, s), a11 = C(t(s + 1, s + 1)) - lambda;
        const C det = a00 * a11 - a01 * a10;
        x[s] = (-r[0] * a11 + r[1] * a01) / det;
        x[s + 1] = (-r[1] * a00 + r[0] * a10) / det;
      }
    }
    const Matrix<Scalar>& z = schur.z;
    vecs.push_back(z.template cast<C>() * x);
  }

  // Orthonormalize inside clusters of repeated eigenvalues.
  std::vector<bool> seen(eigs.size(), false);
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    if (seen[i]) continue;
    std::vector<std::size_t> cluster{i};
    for (std::size_t j = i + 1; j < eigs.size(); ++j)
      if (!seen[j] && eigs[j].kind == eigs[i].kind &&
          std::abs(eigs[j].value() - eigs[i].value()) <= cluster_tol)
        cluster.push_back(j);
    for (auto c : cluster) seen[c] = true;
    if (cluster.size() < 2) continue;
    for (std::size_t a = 0; a < cluster.size(); ++a) {
      CVec& va = vecs[cluster[a]];
      for (std::size_t b = 0; b < a; ++b) {
        const CVec& vb = vecs[cluster[b]];
        va -= vb.dot(va) * vb;
      }
      const Scalar nrm = va.norm();
      if (!(nrm > defect_tol)) throw NotDiagonalizableError("dependent eigenvectors in cluster");
      va /= nrm;
    }
  }

  std::vector<ComplexVectorSplit<Scalar>> out;
  out.reserve(eigs.size());
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    const auto& ev = eigs[i];
    ComplexVectorSplit<Scalar> split{vecs[i].real(), vecs[i].imag()};
    Scalar residual{0};
    if (ev.is_real()) {
      split.im.setZero();
      split = canonicalize_phase(split);
      split.re /= split.re.norm();
      split.im.setZero();
      residual = (m * split.re - ev.alpha * split.re).norm() / (m_norm * split.re.norm());
    } else {
      split = canonicalize_phase(split);
      const Scalar peak = split.re.cwiseAbs().maxCoeff();
      split.re /= peak;
      split.im /= peak;
      const auto& b = split.re;
      const auto& p = split.im;
      residual = ((m * b - (ev.sigma * b - ev.omega * p)).norm() +
                  (m * p - (ev.omega * b + ev.sigma * p)).norm()) /
                 (m_norm * (b.norm() + p.norm()));
    }
    if (!(residual <= opts.residual_tol)) throw AccuracyError(static_cast<double>(residual));
    out.push_back(std::move(split));
  }
  return out;
}

/// Real eigenvector basis: a for real eigenvalues, the pair (b, p) for complex ones.
template <typename Scalar>
Matrix<Scalar> eigenvector_basis(const std::vector<Eigenvalue<Scalar>>& eigs,
                                 const std::vector<ComplexVectorSplit<Scalar>>& right) {
  if (right.empty()) return Matrix<Scalar>(0, 0);
  const Eigen::Index n = right.front().dim();
  Matrix<Scalar> basis(n, n);
  Eigen::Index col = 0;
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    if (col + eigs[i].multiplicity() > n) throw ShapeError("eigenvector_basis: too many vectors");
    basis.col(col++) = right[i].re;
    if (!eigs[i].is_real()) basis.col(col++) = right[i].im;
  }
  if (col != n) throw ShapeError("eigenvector_basis: vectors do not fill the space");
  return basis;
}

template <typename Scalar>
struct LeftEigenvectors {
  std::vector<ComplexVectorSplit<Scalar>> vectors;
  Scalar reciprocal_condition{1};
};

/// Left eigenvectors as conjugate-transposed rows of B^-1, so d_i^H b_j = delta_ij.
///
/// With B the complex basis, the rows for a pair (b, p) of the real basis
/// inverse, r_b and r_p, give d = r_b / 2 and q = r_p / 2.
template <typename Scalar>
LeftEigenvectors<Scalar> left_eigenvectors(const std::vector<Eigenvalue<Scalar>>& eigs,
                                           const std::vector<ComplexVectorSplit<Scalar>>& right,
                                           const EigenOptions<Scalar>& opts = {}) {
  const Matrix<Scalar> basis = eigenvector_basis(eigs, right);
  Matrix<Scalar> inv;
  try {
    inv = inverse(basis);
  } catch (const SingularMatrixError&) {
    throw NotDiagonalizableError("eigenvector basis is singular");
  }
  LeftEigenvectors<Scalar> out;
  out.reciprocal_condition = reciprocal_condition(basis, inv);
  if (out.reciprocal_condition < opts.min_rcond)
    throw NotDiagonalizableError("eigenvector basis is too ill-conditioned");

  Eigen::Index row = 0;
  for (const auto& ev : eigs) {
    if (ev.is_real()) {
      const Vector<Scalar> c = inv.row(row++).transpose();
      out.vectors.push_back({c, Vector<Scalar>::Zero(c.size())});
    } else {
      const Vector<Scalar> d = inv.row(row).transpose() / Scalar{2};
      const Vector<Scalar> q = inv.row(row + 1).transpose() / Scalar{2};
      row += 2;
      out.vectors.push_back({d, q});
    }
  }
  return out;
}

/// Full eigensystem of a real square matrix.
///
/// The matrix is scaled by 1/|M|_F before the QR stage; eigenvalues are scaled back.
template <typename Scalar>
EigenSystem<Scalar> eigensystem(const Matrix<Scalar>& m, const EigenOptions<Scalar>& opts = {}) {
  const Eigen::Index n = m.rows();
  if (m.cols() != n) throw ShapeError("eigensystem: matrix is not square");
  if (!all_finite(m)) throw InvalidInputError("eigensystem: matrix has non-finite entries");

  EigenSystem<Scalar> sys;
  sys.dim = n;
  const Scalar scale = m.norm();
  if (scale == Scalar{0}) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vector<Scalar> e = Vector<Scalar>::Unit(n, i);
      sys.eigenvalues.push_back(Eigenvalue<Scalar>::real(Scalar{0}));
      sys.right.push_back({e, Vector<Scalar>::Zero(n)});
      sys.left.push_back({e, Vector<Scalar>::Zero(n)});
    }
    return sys;
  }

  const Matrix<Scalar> scaled = m / scale;
  const auto hess = hessenberg_reduce(scaled);
  const Scalar tol =
      static_cast<Scalar>(n) * std::numeric_limits<Scalar>::epsilon() * hess.h.norm();
  const auto schur = real_schur(hess.h, hess.q, tol, opts.sweeps_per_row * static_cast<int>(n));
  sys.sweeps = schur.sweeps;

  const auto eigs = extract_eigenvalues(schur.t);
  sys.right = right_eigenvectors(scaled, schur, eigs, opts);
  auto left = left_eigenvectors(eigs, sys.right, opts);
  sys.left = std::move(left.vectors);
  sys.reciprocal_condition = left.reciprocal_condition;

  for (const auto& ev : eigs) {
    sys.eigenvalues.push_back(ev.is_real() ? Eigenvalue<Scalar>::real(ev.alpha * scale)
                                           : Eigenvalue<Scalar>::pair(ev.sigma * scale,
                                                                      ev.omega * scale));
  }
  return sys;
}

}  // namespace geospectral
