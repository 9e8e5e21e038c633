#pragma once

// Test oracles: planted-spectrum matrix generation, a complex-arithmetic
// reconstruction oracle, and the identity suite behind `geospectral verify`.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "geospectral/dense.hpp"
#include "geospectral/errors.hpp"

namespace geospectral::verify {

/// SplitMix64 (Steele, Lea, Flood): state += 0x9E3779B97F4A7C15, then the
/// output mix x ^= x >> 30; x *= 0xBF58476D1CE4E5B9; x ^= x >> 27;
/// x *= 0x94D049BB133111EB; x ^= x >> 31. Doubles take the top 53 bits and
/// normals come from Box-Muller, so streams are identical on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();

 private:
  std::uint64_t state_;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

class OracleInconsistencyError : public Error {
 public:
  using Error::Error;
};

struct PlantedSpectrum {
  std::vector<double> real_eigs;
  std::vector<std::pair<double, double>> complex_pairs;  // (sigma, omega > 0)
  std::uint64_t basis_seed = 0;
  double condition_cap = 1e4;
  /// Use B = I instead of a random basis.
  bool identity_basis = false;

  Eigen::Index dim() const {
    return static_cast<Eigen::Index>(real_eigs.size() + 2 * complex_pairs.size());
  }
  /// Smallest distance between any two planted eigenvalues, conjugates included.
  double min_separation() const;
  void validate() const;
};

/// Well-separated random spectrum: real eigenvalues in [-4, 4], pairs with
/// sigma in [-4, 4] and omega in [0.25, 4].
PlantedSpectrum random_spectrum(int real_count, int pair_count, std::uint64_t seed,
                                double condition_cap = 1e4, double min_separation = 0.1);

/// M = B L B^-1 with L the block-diagonal canonical form of the spectrum.
MatrixXd gen_test_matrix(const PlantedSpectrum& spec);

/// Random normal matrix Q L Q^T with Q orthogonal.
MatrixXd gen_normal_matrix(const PlantedSpectrum& spec);

struct ToleranceProfile {
  double reconstruction = 1e-9;
  double oracle_agreement = 1e-9;
  double oracle_imaginary = 1e-10;
  double eigen_residual = 1e-9;
  double biorthogonality = 1e-10;
  double form_equality = 1e-10;
  double plane_action = 1e-9;
  double phase_invariance = 1e-10;
  double conjugate_symmetry = 1e-12;
  double transposition = 1e-12;
  double blade_orthogonality = 1e-12;
  double bivector_square = 1e-13;
  double canonical_form = 1e-9;
  double apply_action = 1e-11;
  double normal_geometry = 1e-9;
  /// Eigenvector residual bound handed to decompose().
  double decompose_tol = 1e-9;

  static ToleranceProfile standard() { return {}; }
  /// Every tolerance times 100.
  static ToleranceProfile loose();
  /// "default" or "loose"; anything else throws InvalidInputError.
  static ToleranceProfile by_name(const std::string& name);
};

struct CheckResult {
  std::string name;
  double residual = 0;
  double tolerance = 0;
  bool passed = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool passed = false;
  double elapsed_seconds = 0;

  const CheckResult* find(const std::string& name) const;
};

/// Decomposes m and checks every identity of the construction. Failures of
/// the decomposition itself become a failed "decompose" check.
VerificationReport run_identity_suite(const MatrixXd& m, const ToleranceProfile& tol = {},
                                      std::uint64_t seed = 0x5eed);

struct BruteForceResult {
  MatrixXd real_part;
  /// |Im(sum)|_F / |M|_F.
  double imaginary_residue = 0;
};

/// sum_i lambda_i b_i d_i^H / (d_i^H b_i) in complex arithmetic, with d_i^H
/// the rows of the complex eigenvector basis inverse.
BruteForceResult brute_force_sum(const MatrixXd& m);

/// Real part of brute_force_sum; throws OracleInconsistencyError when the
/// imaginary residue exceeds 1e-10.
MatrixXd brute_force_reconstruct(const MatrixXd& m);

}  // namespace geospectral::verify
