#pragma once

#include "dsvar/common.hpp"

#include <cstdint>
#include <string>
#include <variant>

namespace dsvar {

/// Stable law S(alpha, beta) with unit scale and zero location.
struct StableSpec {
  double alpha = 1.5;
  double beta_skew = 0.0;
};

/// Classic Pareto on [1, inf): P(X > x) = x^-alpha.
struct ParetoSpec {
  double alpha = 1.0;
};

struct StudentTSpec {
  double dof = 5.0;
  bool standardized = true;  ///< rescale by sqrt((dof - 2) / dof) to unit variance
};

/// Any distribution with these four population moments; kurtosis is the raw
/// standardized fourth moment (Gaussian = 3).
struct PearsonMomentsSpec {
  double mean = 0.0;
  double variance = 1.0;
  double skewness = 0.0;
  double kurtosis = 3.0;
};

struct GaussianSpec {};

using ShockSpec = std::variant<StableSpec, ParetoSpec, StudentTSpec, PearsonMomentsSpec, GaussianSpec>;

/// Throws ParameterError if the spec violates its invariants.
void validate(const ShockSpec& spec);

/// Short human-readable label, e.g. "stable(1.1,0)" or "t5".
std::string describe(const ShockSpec& spec);

/// `count` iid draws; bit-identical for identical (spec, count, seed).
Vector sample_shock(const ShockSpec& spec, Eigen::Index count, std::uint64_t seed);

struct StableLimitSample {
  double alpha = 1.0;
  int truncation = 0;
  Vector values;
};

/// Draws of sum_{m=1}^{M} Gamma_m^(-1/alpha), Gamma_m the arrival times of a
/// unit-rate Poisson process (partial sums of standard exponentials).
StableLimitSample simulate_stable_limit(double alpha, int truncation, Eigen::Index draws,
                                        std::uint64_t seed);

/// Demeaned kurtosis T * sum x^4 / (sum x^2)^2; about 3 for Gaussian data.
double sample_kurtosis(const Eigen::Ref<const Vector>& x);

/// The same ratio without demeaning, as used for the heavy-tail quantile table.
double moment_ratio_kurtosis(const Eigen::Ref<const Vector>& x);

/// Hill estimate of the tail index from the k largest |x|.
double hill_tail_index(const Eigen::Ref<const Vector>& x, Eigen::Index k);

}  // namespace dsvar
