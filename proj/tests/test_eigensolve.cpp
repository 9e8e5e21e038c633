#include <doctest.h>

#include <algorithm>
#include <cstring>
#include <numbers>

#include "geospectral/eigensolve.hpp"
#include "geospectral/verify.hpp"
#include "oracles.hpp"

using namespace geospectral;
using oracle::mat;
using oracle::vec;

namespace {

MatrixXd random_matrix(verify::SplitMix64& rng, Eigen::Index n) {
  MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rng.normal();
  return m;
}

bool is_quasi_triangular(const MatrixXd& t) {
  const Eigen::Index n = t.rows();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 2; i < n; ++i)
      if (t(i, j) != 0.0) return false;
  for (Eigen::Index i = 0; i + 2 < n; ++i)
    if (t(i + 1, i) != 0.0 && t(i + 2, i + 1) != 0.0) return false;
  return true;
}

SchurForm<double> schur_of(const MatrixXd& m) {
  const auto h = hessenberg_reduce(m);
  const double tol = static_cast<double>(m.rows()) * std::numeric_limits<double>::epsilon() * h.h.norm();
  return real_schur(h.h, h.q, tol, 30 * static_cast<int>(m.rows()));
}

}  // namespace

TEST_CASE("hessenberg_reduce leaves Hessenberg input alone") {
  const MatrixXd m2 = mat({{1, 2}, {3, 4}});
  auto hq = hessenberg_reduce(m2);
  CHECK(hq.h == m2);
  CHECK(hq.q == MatrixXd::Identity(2, 2));

  const MatrixXd upper = mat({{1, 2, 3, 4}, {0, 5, 6, 7}, {0, 0, 8, 9}, {0, 0, 0, 10}});
  hq = hessenberg_reduce(upper);
  CHECK(hq.h == upper);
  CHECK(hq.q == MatrixXd::Identity(4, 4));
}

TEST_CASE("hessenberg_reduce on random matrices") {
  verify::SplitMix64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 3 + trial % 10;
    const MatrixXd m = random_matrix(rng, n);
    const auto hq = hessenberg_reduce(m);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = j + 2; i < n; ++i) CHECK(hq.h(i, j) == 0.0);
    CHECK((hq.q * hq.h * hq.q.transpose() - m).norm() <= 1e-12 * m.norm());
    CHECK((hq.q.transpose() * hq.q - MatrixXd::Identity(n, n)).norm() <= 1e-13 * static_cast<double>(n));
  }
}

TEST_CASE("real_schur examples") {
  const MatrixXd d = mat({{3, 0, 0}, {0, -1, 0}, {0, 0, 2}});
  auto s = real_schur<double>(d, MatrixXd::Identity(3, 3), 1e-15, 90);
  CHECK(s.t == d);
  CHECK(s.z == MatrixXd::Identity(3, 3));

  const MatrixXd rot = mat({{0, -1}, {1, 0}});
  s = real_schur<double>(rot, MatrixXd::Identity(2, 2), 1e-15, 60);
  CHECK(s.t == rot);
  const auto eigs = extract_eigenvalues(s.t);
  REQUIRE(eigs.size() == 1);
  CHECK(eigs[0].kind == EigenKind::ComplexPair);
  CHECK(eigs[0].sigma == 0.0);
  CHECK(eigs[0].omega == 1.0);

  // Companion matrix of (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6.
  const MatrixXd companion = mat({{6, -11, 6}, {1, 0, 0}, {0, 1, 0}});
  s = schur_of(companion);
  CHECK(is_quasi_triangular(s.t));
  std::vector<double> diag{s.t(0, 0), s.t(1, 1), s.t(2, 2)};
  std::sort(diag.begin(), diag.end());
  CHECK(diag[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(diag[1] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(diag[2] == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("real_schur structure and similarity on random matrices") {
  verify::SplitMix64 rng(33);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index n = 2 + trial % 15;
    const MatrixXd m = random_matrix(rng, n);
    const auto h = hessenberg_reduce(m);
    const double tol = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * h.h.norm();
    const auto s = real_schur(h.h, h.q, tol, 30 * static_cast<int>(n));
    CHECK(is_quasi_triangular(s.t));
    CHECK((s.z * s.t * s.z.transpose() - h.q * h.h * h.q.transpose()).norm() <=
          10.0 * static_cast<double>(n) * tol * h.h.norm());
    CHECK((s.z.transpose() * s.z - MatrixXd::Identity(n, n)).norm() <= 1e-13 * static_cast<double>(n));
    CHECK_NOTHROW(extract_eigenvalues(s.t));
  }
}

TEST_CASE("real_schur reports non-convergence") {
  verify::SplitMix64 rng(4);
  const MatrixXd m = random_matrix(rng, 6);
  const auto h = hessenberg_reduce(m);
  try {
    real_schur<double>(h.h, h.q, 1e-15, 0);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.index() == 5);
  }
}

TEST_CASE("extract_eigenvalues") {
  auto eigs = extract_eigenvalues<double>(mat({{1, 0}, {0, 2}}));
  REQUIRE(eigs.size() == 2);
  CHECK(eigs[0].is_real());
  CHECK(eigs[0].alpha == 1.0);
  CHECK(eigs[1].alpha == 2.0);

  eigs = extract_eigenvalues<double>(mat({{1, 2}, {-2, 1}}));
  REQUIRE(eigs.size() == 1);
  CHECK(eigs[0].sigma == 1.0);
  CHECK(eigs[0].omega == 2.0);

  eigs = extract_eigenvalues<double>(mat({{0, -1}, {1, 0}}));
  REQUIRE(eigs.size() == 1);
  CHECK(eigs[0].sigma == 0.0);
  CHECK(eigs[0].omega == 1.0);

  CHECK_THROWS_AS(extract_eigenvalues<double>(mat({{1, 2}, {3, 4}})), InternalError);
}

TEST_CASE("Eigenvalue keeps the positive-omega representative") {
  const auto e = Eigenvalue<double>::pair(0.5, -3.0);
  CHECK(e.omega == 3.0);
  CHECK_THROWS_AS(Eigenvalue<double>::pair(1.0, 0.0), InvalidInputError);
}

TEST_CASE("right eigenvectors of small matrices") {
  auto sys = eigensystem<double>(mat({{3, 0}, {0, 7}}));
  REQUIRE(sys.eigenvalues.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    const VectorXd expected = sys.eigenvalues[i].alpha == 3.0 ? vec({1, 0}) : vec({0, 1});
    CHECK((sys.right[i].re.cwiseAbs() - expected).norm() == 0.0);
  }

  sys = eigensystem<double>(mat({{1, 2}, {-2, 1}}));
  REQUIRE(sys.eigenvalues.size() == 1);
  CHECK(sys.eigenvalues[0].sigma == doctest::Approx(1.0));
  CHECK(sys.eigenvalues[0].omega == doctest::Approx(2.0));
  CHECK((sys.right[0].re - vec({1, 0})).norm() <= 1e-15);
  CHECK((sys.right[0].im - vec({0, 1})).norm() <= 1e-15);

  sys = eigensystem<double>(mat({{0, 1}, {-1, 0}}));
  CHECK(sys.eigenvalues[0].sigma == doctest::Approx(0.0));
  CHECK(sys.eigenvalues[0].omega == doctest::Approx(1.0));
  CHECK((sys.right[0].re - vec({1, 0})).norm() <= 1e-15);
  CHECK((sys.right[0].im - vec({0, 1})).norm() <= 1e-15);
}

TEST_CASE("left eigenvectors") {
  // Symmetric: left and right coincide.
  const MatrixXd sym = mat({{2, 1, 0}, {1, 3, 1}, {0, 1, 4}});
  auto sys = eigensystem<double>(sym);
  for (std::size_t i = 0; i < sys.right.size(); ++i)
    CHECK((sys.left[i].re - sys.right[i].re).norm() <= 1e-13);

  sys = eigensystem<double>(mat({{1, 2}, {-2, 1}}));
  CHECK((sys.left[0].re - vec({0.5, 0})).norm() <= 1e-15);
  CHECK((sys.left[0].im - vec({0, 0.5})).norm() <= 1e-15);

  const MatrixXd upper = mat({{2, 1}, {0, 3}});
  sys = eigensystem<double>(upper);
  const auto it = std::find_if(sys.eigenvalues.begin(), sys.eigenvalues.end(),
                               [](const auto& e) { return std::abs(e.alpha - 2.0) < 1e-12; });
  REQUIRE(it != sys.eigenvalues.end());
  const VectorXd c = sys.left[static_cast<std::size_t>(it - sys.eigenvalues.begin())].re;
  CHECK(std::abs(c.normalized().dot(vec({1, -1}).normalized())) == doctest::Approx(1.0));
  CHECK((upper.transpose() * c - 2.0 * c).norm() <= 1e-13 * c.norm());
}

TEST_CASE("left_eigenvectors rejects a singular basis") {
  std::vector<Eigenvalue<double>> eigs{Eigenvalue<double>::real(1), Eigenvalue<double>::real(2)};
  std::vector<ComplexVectorSplit<double>> right{{vec({1, 0}), vec({0, 0})}, {vec({1, 0}), vec({0, 0})}};
  CHECK_THROWS_AS(left_eigenvectors(eigs, right), NotDiagonalizableError);
}

TEST_CASE("canonicalize_phase") {
  const ComplexVectorSplit<double> canon{vec({1, 0}), vec({0, 1})};
  auto out = canonicalize_phase(canon);
  CHECK(out.re == canon.re);
  CHECK(out.im == canon.im);

  // e^{0.7 i} (b + i p) comes back to (b, p).
  const ComplexVectorSplit<double> base{vec({2, 0.5, -1}), vec({0, 1, 0.25})};
  const double c = std::cos(0.7), s = std::sin(0.7);
  const ComplexVectorSplit<double> rotated{c * base.re - s * base.im, s * base.re + c * base.im};
  out = canonicalize_phase(rotated);
  CHECK((out.re - base.re).norm() <= 1e-12);
  CHECK((out.im - base.im).norm() <= 1e-12);

  out = canonicalize_phase(ComplexVectorSplit<double>{vec({0, 0}), vec({2, 0})});
  CHECK(out.re == vec({2, 0}));
  CHECK(out.im.cwiseAbs() == vec({0, 0}));

  CHECK_THROWS_AS(canonicalize_phase(ComplexVectorSplit<double>{vec({0, 0}), vec({0, 0})}),
                  InvalidInputError);
}

TEST_CASE("canonicalize_phase is idempotent bit for bit") {
  verify::SplitMix64 rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index n = 1 + trial % 8;
    ComplexVectorSplit<double> v{VectorXd(n), VectorXd(n)};
    for (Eigen::Index i = 0; i < n; ++i) {
      v.re[i] = rng.normal();
      v.im[i] = rng.normal();
    }
    if (trial % 3 == 0) v.im = v.re.reverse();  // magnitude ties
    const auto once = canonicalize_phase(v);
    const auto twice = canonicalize_phase(once);
    CHECK(std::memcmp(once.re.data(), twice.re.data(), sizeof(double) * n) == 0);
    CHECK(std::memcmp(once.im.data(), twice.im.data(), sizeof(double) * n) == 0);
  }
}

TEST_CASE("eigensystem recovers planted spectra") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const int n = 2 + static_cast<int>(seed % 13);
    const int pairs = static_cast<int>(seed % static_cast<std::uint64_t>(n / 2 + 1));
    const auto spec = verify::random_spectrum(n - 2 * pairs, pairs, seed);
    const MatrixXd m = verify::gen_test_matrix(spec);
    const auto sys = eigensystem(m);
    const double scale = m.norm();

    CAPTURE(seed);
    std::size_t reals = 0, cplx = 0;
    for (std::size_t i = 0; i < sys.eigenvalues.size(); ++i) {
      const auto& ev = sys.eigenvalues[i];
      const auto& r = sys.right[i];
      if (ev.is_real()) {
        ++reals;
        double best = 1e300;
        for (double a : spec.real_eigs) best = std::min(best, std::abs(a - ev.alpha));
        CHECK(best <= 1e-8 * scale);
        CHECK((m * r.re - ev.alpha * r.re).norm() <= 1e-9 * scale * r.re.norm());
      } else {
        ++cplx;
        double best = 1e300;
        for (auto [s, w] : spec.complex_pairs) best = std::min(best, std::hypot(s - ev.sigma, w - ev.omega));
        CHECK(best <= 1e-8 * scale);
        const double res = (m * r.re - (ev.sigma * r.re - ev.omega * r.im)).norm() +
                           (m * r.im - (ev.omega * r.re + ev.sigma * r.im)).norm();
        CHECK(res <= 1e-9 * scale * (r.re.norm() + r.im.norm()));
      }
    }
    CHECK(reals == spec.real_eigs.size());
    CHECK(cplx == spec.complex_pairs.size());
    CHECK(static_cast<Eigen::Index>(reals + 2 * cplx) == sys.dim);

    // d_i^H b_j = delta_ij through the real splits.
    for (std::size_t i = 0; i < sys.eigenvalues.size(); ++i) {
      for (std::size_t j = 0; j < sys.eigenvalues.size(); ++j) {
        const auto& l = sys.left[i];
        const auto& r = sys.right[j];
        const double re = l.re.dot(r.re) + l.im.dot(r.im);
        const double im = l.re.dot(r.im) - l.im.dot(r.re);
        CHECK(std::abs(re - (i == j ? 1.0 : 0.0)) <= 1e-10);
        CHECK(std::abs(im) <= 1e-10);
        if (!sys.eigenvalues[j].is_real()) {
          // Against the conjugate partner b*: (d.b - q.p) and (q.b + d.p) vanish.
          CHECK(std::abs(l.re.dot(r.re) - l.im.dot(r.im)) <= 1e-10);
          CHECK(std::abs(l.im.dot(r.re) + l.re.dot(r.im)) <= 1e-10);
        }
      }
    }
  }
}

TEST_CASE("defective matrices are refused") {
  CHECK_THROWS_AS(eigensystem<double>(mat({{1, 1}, {0, 1}})), NotDiagonalizableError);
  CHECK_THROWS_AS(eigensystem<double>(mat({{2, 1, 0}, {0, 2, 1}, {0, 0, 2}})), NotDiagonalizableError);
  // Defective complex pair: [[J, I], [0, J]].
  MatrixXd m = MatrixXd::Zero(4, 4);
  m.block(0, 0, 2, 2) = mat({{0, 1}, {-1, 0}});
  m.block(2, 2, 2, 2) = mat({{0, 1}, {-1, 0}});
  m.block(0, 2, 2, 2) = MatrixXd::Identity(2, 2);
  CHECK_THROWS_AS(eigensystem<double>(m), NotDiagonalizableError);
}

TEST_CASE("repeated eigenvalues of diagonalizable matrices") {
  verify::SplitMix64 rng(8);
  const MatrixXd basis = random_matrix(rng, 4);
  MatrixXd l = MatrixXd::Zero(4, 4);
  l.diagonal() << 1.5, 1.5, 1.5, -2.0;
  const MatrixXd m = basis * l * inverse(basis);
  const auto sys = eigensystem(m);
  REQUIRE(sys.eigenvalues.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& ev = sys.eigenvalues[i];
    CHECK((m * sys.right[i].re - ev.alpha * sys.right[i].re).norm() <= 1e-9 * m.norm());
  }

  // Two copies of the same rotation block, mixed by an orthogonal basis.
  MatrixXd rot = MatrixXd::Zero(5, 5);
  rot.block(0, 0, 2, 2) = mat({{0.5, 2}, {-2, 0.5}});
  rot.block(2, 2, 2, 2) = mat({{0.5, 2}, {-2, 0.5}});
  rot(4, 4) = 3.0;
  const auto q = hessenberg_reduce(random_matrix(rng, 5)).q;
  const MatrixXd mixed = q * rot * q.transpose();
  const auto sys2 = eigensystem(mixed);
  int pairs = 0;
  for (const auto& ev : sys2.eigenvalues)
    if (!ev.is_real()) {
      ++pairs;
      CHECK(ev.sigma == doctest::Approx(0.5).epsilon(1e-9));
      CHECK(ev.omega == doctest::Approx(2.0).epsilon(1e-9));
    }
  CHECK(pairs == 2);
}

TEST_CASE("zero and non-finite input") {
  const auto sys = eigensystem<double>(MatrixXd::Zero(3, 3));
  CHECK(sys.eigenvalues.size() == 3);
  MatrixXd bad = MatrixXd::Identity(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(eigensystem<double>(bad), InvalidInputError);
  CHECK_THROWS_AS(eigensystem<double>(mat({{1, 2, 3}})), ShapeError);
}
