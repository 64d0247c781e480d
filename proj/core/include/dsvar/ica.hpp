#pragma once

#include "dsvar/common.hpp"
#include "dsvar/distance_covariance.hpp"
#include "dsvar/prewhitening.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dsvar {

/// Givens angles for the planes (0,1), (0,2), ..., (n-2,n-1), in that order.
struct OrthogonalParam {
  std::vector<double> angles;
};

int angle_count(int n);

/// Exact product G(0,1,a_0) G(0,2,a_1) ... of plane rotations.
Matrix rotation_from_angles(const OrthogonalParam& param, int n);

/// Derivative-free coordinate descent over the Givens angles.
///
/// Each sweep runs a golden-section search per angle on [a - step, a + step]
/// and keeps the best point seen. The step is halved after a sweep in which no
/// angle moved by more than step/2; the run converges once the step is at
/// `min_step` and a sweep improves the objective by less than `tolerance`.
/// Restart 0 starts at the identity, the others at seeded uniform angles in
/// [-pi, pi).
struct OptimizerSettings {
  int restarts = 8;
  int max_sweeps = 500;
  double tolerance = 1e-9;
  double initial_step = 0.7853981633974483;
  double min_step = 1e-3;
  int line_search_evaluations = 8;
  std::uint64_t seed = 0;
  int threads = 1;
  void validate() const;
};

struct OptimizerReport {
  int iterations = 0;   ///< sweeps of the winning restart
  int evaluations = 0;  ///< objective evaluations over all restarts
  int restarts = 0;
  int best_restart = 0;
  bool converged = false;
  double start_objective = 0.0;  ///< objective at the identity rotation
};

/// Estimated unmixing with two scale conventions.
///
/// W_omega has unit-norm rows with a positive max-modulus element, rows sorted
/// by descending shock kurtosis, and B_omega = W_omega^-1. W_hat / B_hat use
/// unit-variance shocks: W_hat = diag(1/sd) W_omega and B_hat = B_omega diag(sd).
struct IcaResult {
  Whitener whitener;
  Matrix O_hat;
  Matrix W_omega;
  Matrix B_omega;
  Matrix W_hat;
  Matrix B_hat;
  Matrix shocks_hat;  ///< T' x n, unit sample variance, = residuals * W_hat^T
  Vector kurtosis;    ///< non-increasing
  double objective_value = 0.0;
  OptimizerReport report;
};

/// Minimize aggregate_objective(whitened * O^T) over orthogonal O.
///
/// The raw unmixing O * factor^-1 is Omega-normalized (unit rows, positive
/// max-modulus element, rows in lexicographic order) and then reordered by
/// descending kurtosis of the recovered shocks, ties by position.
IcaResult estimate_unmixing(const Eigen::Ref<const Matrix>& residuals, const WhitenerVariant& whitener,
                            const DistCovConfig& config = {}, const OptimizerSettings& optimizer = {});

/// Unit-norm rows, positive max-modulus element, rows sorted lexicographically.
Matrix omega_normalize(const Eigen::Ref<const Matrix>& w);

/// True when a precedes b lexicographically.
bool lexicographic_less(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b);

/// Bach-Jordan distance on r = A0 A^-1:
///   1/(2n) sum_i (sum_j |r_ij| / max_j |r_ij| - 1) + 1/(2n) sum_j (sum_i |r_ij| / max_i |r_ij| - 1).
double amari_distance(const Eigen::Ref<const Matrix>& a0, const Eigen::Ref<const Matrix>& a);

/// amari_distance(|A0|, |A|), insensitive to sign flips of either argument.
double amari_distance_abs(const Eigen::Ref<const Matrix>& a0, const Eigen::Ref<const Matrix>& a);

/// Columns of `estimate` permuted and sign-flipped to minimize the Frobenius
/// distance to `reference` (exhaustive over permutations, n <= 8).
Matrix match_columns(const Eigen::Ref<const Matrix>& estimate, const Eigen::Ref<const Matrix>& reference);

struct SignRule {
  enum class Kind { None, ImpactNegative, ImpactPositive };
  Kind kind = Kind::None;
  int variable = 0;  ///< 0-based row of B

  static SignRule none() { return {}; }
  static SignRule impact_negative(int v) { return {Kind::ImpactNegative, v}; }
  static SignRule impact_positive(int v) { return {Kind::ImpactPositive, v}; }
};

/// Parses "none", "neg:k" or "pos:k" with k 1-based.
SignRule parse_sign_rule(const std::string& text);

struct LabeledShock {
  int index = 0;
  IcaResult result;
};

/// The disaster shock is component 0 (largest kurtosis). Under a sign rule its
/// row of W, column of B and shock series are negated as needed; a zero impact
/// on the named variable throws AmbiguityError.
LabeledShock label_disaster_shock(const IcaResult& result, const SignRule& rule = {});

}  // namespace dsvar
