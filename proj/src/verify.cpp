#include "geospectral/verify.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "geospectral/realdecomp.hpp"

namespace geospectral::verify {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

std::vector<std::complex<double>> all_eigenvalues(const PlantedSpectrum& s) {
  std::vector<std::complex<double>> out;
  for (double a : s.real_eigs) out.emplace_back(a, 0.0);
  for (auto [sigma, omega] : s.complex_pairs) {
    out.emplace_back(sigma, omega);
    out.emplace_back(sigma, -omega);
  }
  return out;
}

MatrixXd canonical_blocks(const PlantedSpectrum& s) {
  const Eigen::Index n = s.dim();
  MatrixXd l = MatrixXd::Zero(n, n);
  Eigen::Index i = 0;
  for (double a : s.real_eigs) {
    l(i, i) = a;
    ++i;
  }
  for (auto [sigma, omega] : s.complex_pairs) {
    l(i, i) = sigma;
    l(i, i + 1) = omega;
    l(i + 1, i) = -omega;
    l(i + 1, i + 1) = sigma;
    i += 2;
  }
  return l;
}

double safe_scale(double x) { return std::max(x, 1e-14); }

}  // namespace

double PlantedSpectrum::min_separation() const {
  const auto eigs = all_eigenvalues(*this);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < eigs.size(); ++i)
    for (std::size_t j = i + 1; j < eigs.size(); ++j) best = std::min(best, std::abs(eigs[i] - eigs[j]));
  return best;
}

void PlantedSpectrum::validate() const {
  if (dim() == 0) throw InvalidInputError("planted spectrum is empty");
  for (double a : real_eigs)
    if (!std::isfinite(a)) throw InvalidInputError("planted eigenvalue is not finite");
  for (auto [sigma, omega] : complex_pairs)
    if (!std::isfinite(sigma) || !std::isfinite(omega) || !(omega > 0))
      throw InvalidInputError("planted pair needs finite sigma and omega > 0");
  if (!(condition_cap >= 1.0)) throw InvalidInputError("condition cap must be at least 1");
}

PlantedSpectrum random_spectrum(int real_count, int pair_count, std::uint64_t seed,
                                double condition_cap, double min_separation) {
  if (real_count < 0 || pair_count < 0 || real_count + pair_count == 0)
    throw InvalidInputError("random_spectrum: need a positive number of eigenvalues");
  SplitMix64 rng(seed ^ 0xA5A5A5A55A5A5A5AULL);
  PlantedSpectrum s;
  s.basis_seed = seed;
  s.condition_cap = condition_cap;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    s.real_eigs.clear();
    s.complex_pairs.clear();
    for (int i = 0; i < real_count; ++i) s.real_eigs.push_back(rng.uniform(-4.0, 4.0));
    for (int i = 0; i < pair_count; ++i)
      s.complex_pairs.emplace_back(rng.uniform(-4.0, 4.0), rng.uniform(0.25, 4.0));
    if (s.min_separation() >= min_separation) return s;
  }
  throw GenerationError("random_spectrum: could not reach the requested separation");
}

MatrixXd gen_test_matrix(const PlantedSpectrum& spec) {
  spec.validate();
  const Eigen::Index n = spec.dim();
  const MatrixXd l = canonical_blocks(spec);
  if (spec.identity_basis) return l;

  SplitMix64 rng(spec.basis_seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    MatrixXd basis(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) basis(i, j) = rng.normal();
    MatrixXd basis_inv;
    try {
      basis_inv = inverse(basis);
    } catch (const SingularMatrixError&) {
      continue;
    }
    if (1.0 / reciprocal_condition(basis, basis_inv) <= spec.condition_cap)
      return basis * l * basis_inv;
  }
  throw GenerationError("gen_test_matrix: condition cap not reached after 100 resamples");
}

MatrixXd gen_normal_matrix(const PlantedSpectrum& spec) {
  spec.validate();
  const Eigen::Index n = spec.dim();
  SplitMix64 rng(spec.basis_seed);
  MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = rng.normal();
  const MatrixXd q = Eigen::HouseholderQR<MatrixXd>(g).householderQ();
  return q * canonical_blocks(spec) * q.transpose();
}

ToleranceProfile ToleranceProfile::loose() {
  ToleranceProfile t;
  for (double* v : {&t.reconstruction, &t.oracle_agreement, &t.oracle_imaginary, &t.eigen_residual,
                    &t.biorthogonality, &t.form_equality, &t.plane_action, &t.phase_invariance,
                    &t.conjugate_symmetry, &t.transposition, &t.blade_orthogonality,
                    &t.bivector_square, &t.canonical_form, &t.apply_action, &t.normal_geometry,
                    &t.decompose_tol})
    *v *= 100.0;
  return t;
}

ToleranceProfile ToleranceProfile::by_name(const std::string& name) {
  if (name == "default") return standard();
  if (name == "loose") return loose();
  throw InvalidInputError("unknown tolerance profile '" + name + "'");
}

const CheckResult* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

BruteForceResult brute_force_sum(const MatrixXd& m) {
  using C = std::complex<double>;
  using CMatrix = Eigen::MatrixXcd;
  const auto sys = eigensystem(m);
  const Eigen::Index n = sys.dim;

  CMatrix basis(n, n);
  std::vector<C> lambdas;
  Eigen::Index col = 0;
  for (std::size_t i = 0; i < sys.eigenvalues.size(); ++i) {
    const auto& ev = sys.eigenvalues[i];
    const auto& r = sys.right[i];
    if (ev.is_real()) {
      basis.col(col++) = r.re.cast<C>();
      lambdas.push_back(ev.alpha);
    } else {
      const Eigen::VectorXcd b = r.re.cast<C>() + C(0, 1) * r.im.cast<C>();
      basis.col(col++) = b;
      basis.col(col++) = b.conjugate();
      lambdas.push_back(ev.value());
      lambdas.push_back(std::conj(ev.value()));
    }
  }
  const CMatrix dual = Eigen::PartialPivLU<CMatrix>(basis).inverse();

  CMatrix sum = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::RowVectorXcd d_h = dual.row(i);
    const C overlap = (d_h * basis.col(i))(0, 0);
    sum += (lambdas[static_cast<std::size_t>(i)] / overlap) * basis.col(i) * d_h;
  }
  BruteForceResult out;
  out.real_part = sum.real();
  const double scale = m.norm();
  out.imaginary_residue = sum.imag().norm() / safe_scale(scale);
  return out;
}

MatrixXd brute_force_reconstruct(const MatrixXd& m) {
  auto res = brute_force_sum(m);
  if (res.imaginary_residue > 1e-10)
    throw OracleInconsistencyError("complex reconstruction has an imaginary residue of " +
                                   std::to_string(res.imaginary_residue));
  return std::move(res.real_part);
}

namespace {

class SuiteBuilder {
 public:
  explicit SuiteBuilder(VerificationReport& r) : report_(r) {}

  void add(std::string name, double residual, double tolerance, std::string detail = {}) {
    const bool ok = std::isfinite(residual) && residual <= tolerance;
    report_.checks.push_back({std::move(name), residual, tolerance, ok, std::move(detail)});
  }
  void fail(std::string name, std::string detail) {
    report_.checks.push_back({std::move(name), std::numeric_limits<double>::infinity(), 0.0, false,
                              std::move(detail)});
  }

 private:
  VerificationReport& report_;
};

using Term = ComplexPlaneTerm<double>;

Term rotate_phase(const Term& t, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return Term::make(t.sigma, t.omega, c * t.b - s * t.p, s * t.b + c * t.p, c * t.d - s * t.q,
                    s * t.d + c * t.q);
}

void run_plane_checks(const MatrixXd& m, const SpectralDecomposition<double>& dec,
                      const ToleranceProfile& tol, std::uint64_t seed, SuiteBuilder& suite) {
  SplitMix64 rng(seed);
  const Eigen::Index n = dec.dim;
  double form = 0, action_r = 0, action_l = 0, annihilation = 0, phase = 0, conj = 0, transp = 0;
  double blade = 0, square = 0;

  for (std::size_t k = 0; k < dec.plane_terms.size(); ++k) {
    const auto& t = dec.plane_terms[k];
    const MatrixXd left = plane_term_left_form(t);
    const MatrixXd right = plane_term_right_form(t);
    const double scale = safe_scale(left.norm());
    form = std::max(form, (left - right).norm() / scale);

    const double r_right = (left * t.b - (t.sigma * t.b - t.omega * t.p)).norm() +
                           (left * t.p - (t.omega * t.b + t.sigma * t.p)).norm();
    action_r = std::max(action_r, r_right / (scale * safe_scale(t.b.norm() + t.p.norm())));
    // d^T M = sigma d^T + omega q^T,  q^T M = sigma q^T - omega d^T
    const MatrixXd lt = left.transpose();
    const double r_left = (lt * t.d - (t.sigma * t.d + t.omega * t.q)).norm() +
                          (lt * t.q - (t.sigma * t.q - t.omega * t.d)).norm();
    action_l = std::max(action_l, r_left / (scale * safe_scale(t.d.norm() + t.q.norm())));

    auto annihilate = [&](const VectorXd& right_vec, const VectorXd& left_vec) {
      annihilation = std::max(annihilation, (left * right_vec).norm() / (scale * safe_scale(right_vec.norm())));
      annihilation = std::max(annihilation, (lt * left_vec).norm() / (scale * safe_scale(left_vec.norm())));
    };
    for (const auto& r : dec.real_terms) annihilate(r.a, r.c);
    for (std::size_t j = 0; j < dec.plane_terms.size(); ++j) {
      if (j == k) continue;
      annihilate(dec.plane_terms[j].b, dec.plane_terms[j].d);
      annihilate(dec.plane_terms[j].p, dec.plane_terms[j].q);
    }

    for (int i = 0; i < 100; ++i) {
      const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
      phase = std::max(phase, (plane_term_left_form(rotate_phase(t, theta)) - left).norm() / scale);
    }
    const MatrixXd conjugate = plane_matrix(t.sigma, -t.omega, t.b, VectorXd(-t.p), t.d,
                                            VectorXd(-t.q), t.nu);
    conj = std::max(conj, (conjugate - left).norm() / scale);
    transp = std::max(transp, (plane_term_left_form(transpose_term(t)) - left.transpose()).norm() / scale);

    for (const auto& w : {wedge(t.b, t.p), wedge(t.d, t.q)}) {
      for (int i = 0; i < 20; ++i) {
        VectorXd x(n);
        for (Eigen::Index j = 0; j < n; ++j) x[j] = rng.normal();
        const double value = std::abs(dot(x, bivector_apply(w, x)));
        blade = std::max(blade, value / safe_scale(x.squaredNorm() * w.norm()));
      }
    }
    const auto [e1, e2] = orthonormalize_pair(t.b, t.p);
    const MatrixXd projector = e1 * e1.transpose() + e2 * e2.transpose();
    square = std::max(square, (bivector_square(wedge(e1, e2)) + projector).norm());
  }

  suite.add("form_equality", form, tol.form_equality);
  suite.add("plane_action_right", action_r, tol.plane_action);
  suite.add("plane_action_left", action_l, tol.plane_action);
  suite.add("plane_annihilation", annihilation, tol.plane_action);
  suite.add("phase_invariance", phase, tol.phase_invariance);
  suite.add("conjugate_symmetry", conj, tol.conjugate_symmetry);
  suite.add("transposition", transp, tol.transposition);
  suite.add("blade_orthogonality", blade, tol.blade_orthogonality);
  suite.add("bivector_square", square, tol.bivector_square);

  const MatrixXd commutator = m * m.transpose() - m.transpose() * m;
  if (commutator.norm() <= 1e-12 * safe_scale(m.squaredNorm())) {
    double geometry = 0;
    for (const auto& t : dec.plane_terms) {
      const double bn = t.b.norm(), pn = t.p.norm();
      geometry = std::max(geometry, std::abs(dot(t.b, t.p)) / safe_scale(bn * pn));
      geometry = std::max(geometry, std::abs(bn - pn) / safe_scale(bn));
    }
    suite.add("normal_pair_geometry", geometry, tol.normal_geometry);
  }
}

/// Largest deviation of D^H B from the identity, evaluated through real splits.
std::pair<double, double> biorthogonality_errors(const SpectralDecomposition<double>& dec) {
  struct Entry {
    VectorXd re_r, im_r, re_l, im_l;
    bool pair;
  };
  std::vector<Entry> entries;
  for (const auto& t : dec.real_terms) entries.push_back({t.a, VectorXd(), t.c, VectorXd(), false});
  for (const auto& t : dec.plane_terms) entries.push_back({t.b, t.p, t.d, t.q, true});

  double same = 0, cross = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = 0; j < entries.size(); ++j) {
      const auto& l = entries[i];
      const auto& r = entries[j];
      // Complex overlaps (d - i q)^T (b + i p) and (d - i q)^T (b - i p).
      double worst = 0;
      if (!l.pair && !r.pair) {
        worst = std::abs(dot(l.re_l, r.re_r) - (i == j ? 1.0 : 0.0));
      } else if (!l.pair) {
        worst = std::max(std::abs(dot(l.re_l, r.re_r)), std::abs(dot(l.re_l, r.im_r)));
      } else if (!r.pair) {
        worst = std::max(std::abs(dot(l.re_l, r.re_r)), std::abs(dot(l.im_l, r.re_r)));
      } else {
        const double db = dot(l.re_l, r.re_r), qp = dot(l.im_l, r.im_r);
        const double dp = dot(l.re_l, r.im_r), qb = dot(l.im_l, r.re_r);
        const double direct = std::hypot(db + qp - (i == j ? 1.0 : 0.0), dp - qb);
        const double partner = std::hypot(db - qp, dp + qb);
        worst = std::max(direct, partner);
      }
      (i == j ? same : cross) = std::max(i == j ? same : cross, worst);
    }
  }
  return {same, cross};
}

}  // namespace

VerificationReport run_identity_suite(const MatrixXd& m, const ToleranceProfile& tol,
                                      std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport report;
  SuiteBuilder suite(report);
  auto finish = [&] {
    report.passed = !report.checks.empty() &&
                    std::all_of(report.checks.begin(), report.checks.end(),
                                [](const CheckResult& c) { return c.passed; });
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
  };

  SpectralDecomposition<double> dec;
  try {
    dec = decompose(m, tol.decompose_tol);
    suite.add("decompose", 0.0, 0.0);
  } catch (const std::exception& e) {
    suite.fail("decompose", e.what());
    return finish();
  }

  const double m_norm = m.norm();
  const double count_error = std::abs(static_cast<double>(dec.real_terms.size() + 2 * dec.plane_terms.size()) -
                                      static_cast<double>(dec.dim));
  suite.add("term_count", count_error, 0.0);

  const MatrixXd rebuilt = reconstruct(dec);
  suite.add("reconstruction", (m - rebuilt).norm() / safe_scale(m_norm), tol.reconstruction);

  try {
    const auto oracle = brute_force_sum(m);
    suite.add("oracle_agreement", (oracle.real_part - rebuilt).norm() / safe_scale(m_norm),
              tol.oracle_agreement);
    suite.add("oracle_imaginary_residue", oracle.imaginary_residue, tol.oracle_imaginary);
  } catch (const std::exception& e) {
    suite.fail("oracle_agreement", e.what());
  }

  suite.add("eigen_residual", max_eigen_residual(dec, m), tol.eigen_residual);

  const auto [same, cross] = biorthogonality_errors(dec);
  suite.add("biorthogonality_same", same, tol.biorthogonality);
  suite.add("biorthogonality_cross", cross, tol.biorthogonality);

  if (!dec.plane_terms.empty()) {
    try {
      run_plane_checks(m, dec, tol, seed, suite);
    } catch (const std::exception& e) {
      suite.fail("plane_terms", e.what());
    }
  }

  try {
    const auto cf = real_canonical_form(dec);
    suite.add("canonical_form", (cf.similarity() - m).norm() / safe_scale(m_norm), tol.canonical_form);
  } catch (const std::exception& e) {
    suite.fail("canonical_form", e.what());
  }

  SplitMix64 rng(seed ^ 0xC0FFEEULL);
  double action = 0;
  for (int i = 0; i < 8; ++i) {
    VectorXd x(dec.dim);
    for (Eigen::Index j = 0; j < dec.dim; ++j) x[j] = rng.normal();
    const VectorXd dense = rebuilt * x;
    action = std::max(action, (apply(dec, x) - dense).norm() / safe_scale(rebuilt.norm() * x.norm()));
  }
  suite.add("apply_action", action, tol.apply_action);

  return finish();
}

}  // namespace geospectral::verify
