#pragma once

#include "dsvar/rng.hpp"

#include <string>

namespace dsvar {

/// Member of the Pearson system matched to a target moment vector.
enum class PearsonType { Normal, I, III, IV, V, VI };

std::string to_string(PearsonType type);

/// A Pearson distribution fitted to (mean, variance, skewness, kurtosis).
///
/// Parameters are held for the standardized, nonnegatively skewed variable x;
/// a draw is mean + sd * sign * x. Kurtosis is the raw fourth standardized
/// moment (3 for a Gaussian).
struct PearsonFit {
  PearsonType type = PearsonType::Normal;
  double mean = 0.0;
  double sd = 1.0;
  double sign = 1.0;

  // Quadratic b0 + b1 x + b2 x^2 of the Pearson differential equation.
  double b0 = 1.0;
  double b1 = 0.0;
  double b2 = 0.0;

  // Type I / VI: real roots and the exponents of |x - root|.
  double root_lo = 0.0;
  double root_hi = 0.0;
  double exp_lo = 0.0;
  double exp_hi = 0.0;

  // Type IV: density (1 + ((x - location)/scale)^2)^(-m) exp(-nu atan(...)).
  double m = 0.0;
  double nu = 0.0;
  double location = 0.0;
  double scale = 1.0;

  // Type III / V: gamma or inverse-gamma shape, scale and shift.
  double shape = 0.0;
  double gscale = 1.0;
  double shift = 0.0;
};

/// Throws ParameterError when kurtosis <= skewness^2 + 1 or when no Pearson
/// member with a finite fourth moment matches.
PearsonFit fit_pearson(double mean, double variance, double skewness, double kurtosis);

double sample_pearson(const PearsonFit& fit, Rng& rng);

}  // namespace dsvar
