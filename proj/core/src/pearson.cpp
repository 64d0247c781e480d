#include "dsvar/pearson.hpp"

#include "dsvar/common.hpp"

#include <cmath>
#include <numbers>

namespace dsvar {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

// Three-piece exponential envelope for the log-concave angle density of a
// type IV draw: log g(t) = (2m - 2) log cos t - nu t on (-pi/2, pi/2).
double sample_type_iv_angle(double m, double nu, Rng& rng) {
  const double c = 2.0 * m - 2.0;
  auto logg = [&](double t) { return c * std::log(std::cos(t)) - nu * t; };
  auto dlogg = [&](double t) { return -c * std::tan(t) - nu; };

  const double mode = std::atan(-nu / c);
  const double curvature = c / (std::cos(mode) * std::cos(mode));
  const double delta = 1.0 / std::sqrt(curvature);
  const double eps = 1e-12;
  const double tl = std::max(mode - delta, -kHalfPi + eps);
  const double tr = std::min(mode + delta, kHalfPi - eps);
  const double hmax = logg(mode);

  const double hl = logg(tl) - hmax;
  const double sl = dlogg(tl);
  const double hr = logg(tr) - hmax;
  const double sr = dlogg(tr);

  // Masses of the pieces relative to exp(hmax).
  const double wl = (sl > 0.0) ? std::exp(hl) * (-std::expm1(-sl * (tl + kHalfPi))) / sl : 0.0;
  const double wc = tr - tl;
  const double wr = (sr < 0.0) ? std::exp(hr) * (-std::expm1(sr * (kHalfPi - tr))) / (-sr) : 0.0;
  const double total = wl + wc + wr;

  for (;;) {
    const double pick = rng.uniform() * total;
    double t;
    double log_env;
    if (pick < wl) {
      const double span = tl + kHalfPi;
      const double u = rng.uniform_open();
      const double back = -std::log1p(u * std::expm1(-sl * span)) / sl;
      t = tl - back;
      log_env = hl - sl * back;
    } else if (pick < wl + wc) {
      t = tl + rng.uniform() * wc;
      log_env = 0.0;
    } else {
      const double span = kHalfPi - tr;
      const double u = rng.uniform_open();
      const double fwd = -std::log1p(u * std::expm1(sr * span)) / (-sr);
      t = tr + fwd;
      log_env = hr + sr * fwd;
    }
    if (t <= -kHalfPi || t >= kHalfPi) continue;
    if (std::log(rng.uniform_open()) <= logg(t) - hmax - log_env) return t;
  }
}

}  // namespace

std::string to_string(PearsonType type) {
  switch (type) {
    case PearsonType::Normal: return "normal";
    case PearsonType::I: return "I";
    case PearsonType::III: return "III";
    case PearsonType::IV: return "IV";
    case PearsonType::V: return "V";
    case PearsonType::VI: return "VI";
  }
  return "?";
}

PearsonFit fit_pearson(double mean, double variance, double skewness, double kurtosis) {
  if (!(variance > 0.0) || !std::isfinite(variance))
    throw ParameterError("pearson: variance must be positive");
  if (!std::isfinite(mean) || !std::isfinite(skewness) || !std::isfinite(kurtosis))
    throw ParameterError("pearson: moments must be finite");
  if (!(kurtosis > skewness * skewness + 1.0))
    throw ParameterError("pearson: infeasible moments, kurtosis must exceed skewness^2 + 1");

  PearsonFit fit;
  fit.mean = mean;
  fit.sd = std::sqrt(variance);
  fit.sign = skewness < 0.0 ? -1.0 : 1.0;

  const double gamma1 = std::abs(skewness);
  const double beta1 = gamma1 * gamma1;
  const double beta2 = kurtosis;
  const double denom = 10.0 * beta2 - 12.0 * beta1 - 18.0;
  if (std::abs(denom) < 1e-10)
    throw ParameterError("pearson: moment vector lies on the 10*b2 - 12*b1 - 18 = 0 line");

  fit.b0 = (4.0 * beta2 - 3.0 * beta1) / denom;
  fit.b1 = gamma1 * (beta2 + 3.0) / denom;
  fit.b2 = (2.0 * beta2 - 3.0 * beta1 - 6.0) / denom;
  const double b0 = fit.b0, b1 = fit.b1, b2 = fit.b2;
  constexpr double tiny = 1e-12;

  if (std::abs(b2) < tiny) {
    if (std::abs(b1) < tiny) {
      fit.type = PearsonType::Normal;
      return fit;
    }
    // f ~ y^(k-1) exp(-y/b1) with y = x + b0/b1.
    fit.type = PearsonType::III;
    fit.shape = b0 / (b1 * b1);
    fit.gscale = b1;
    fit.shift = -b0 / b1;
    return fit;
  }

  const double disc = b1 * b1 - 4.0 * b0 * b2;
  if (std::abs(disc) < 1e-12 * std::max(1.0, b1 * b1)) {
    // Repeated root r: f ~ y^(-1/b2) exp(((r + b1)/b2) / y), y = x - r.
    fit.type = PearsonType::V;
    const double r = -b1 / (2.0 * b2);
    const double c = (r + b1) / b2;
    fit.shape = 1.0 / b2 - 1.0;
    fit.gscale = -c;
    fit.shift = r;
    if (!(fit.gscale > 0.0) || !(fit.shape > 4.0))
      throw ParameterError("pearson: type V fit has no finite fourth moment");
    return fit;
  }

  if (disc < 0.0) {
    fit.type = PearsonType::IV;
    fit.location = -b1 / (2.0 * b2);
    fit.scale = std::sqrt(b0 / b2 - b1 * b1 / (4.0 * b2 * b2));
    fit.m = 1.0 / (2.0 * b2);
    fit.nu = (fit.location + b1) / (b2 * fit.scale);
    if (!(fit.m > 2.5))
      throw ParameterError("pearson: type IV fit has no finite fourth moment");
    return fit;
  }

  const double sq = std::sqrt(disc);
  double r1 = (-b1 - sq) / (2.0 * b2);
  double r2 = (-b1 + sq) / (2.0 * b2);
  fit.root_lo = std::min(r1, r2);
  fit.root_hi = std::max(r1, r2);
  fit.exp_lo = -(fit.root_lo + b1) / (b2 * (fit.root_lo - fit.root_hi));
  fit.exp_hi = -(fit.root_hi + b1) / (b2 * (fit.root_hi - fit.root_lo));

  if (fit.root_lo < 0.0 && fit.root_hi > 0.0) {
    fit.type = PearsonType::I;
    if (!(fit.exp_lo > -1.0) || !(fit.exp_hi > -1.0))
      throw ParameterError("pearson: type I fit is not integrable");
    return fit;
  }
  if (fit.root_hi < 0.0) {
    fit.type = PearsonType::VI;
    const double p = fit.exp_hi + 1.0;
    const double q = -fit.exp_lo - fit.exp_hi - 1.0;
    if (!(p > 0.0) || !(q > 4.0))
      throw ParameterError("pearson: type VI fit has no finite fourth moment");
    return fit;
  }
  throw ParameterError("pearson: no Pearson member matches the requested moments");
}

double sample_pearson(const PearsonFit& fit, Rng& rng) {
  double x = 0.0;
  switch (fit.type) {
    case PearsonType::Normal:
      x = rng.normal();
      break;
    case PearsonType::III:
      x = fit.shift + fit.gscale * rng.gamma(fit.shape);
      break;
    case PearsonType::V:
      x = fit.shift + fit.gscale / rng.gamma(fit.shape);
      break;
    case PearsonType::IV: {
      const double t = sample_type_iv_angle(fit.m, fit.nu, rng);
      x = fit.location + fit.scale * std::tan(t);
      break;
    }
    case PearsonType::I:
      x = fit.root_lo + (fit.root_hi - fit.root_lo) * rng.beta(fit.exp_lo + 1.0, fit.exp_hi + 1.0);
      break;
    case PearsonType::VI: {
      const double p = fit.exp_hi + 1.0;
      const double q = -fit.exp_lo - fit.exp_hi - 1.0;
      const double ratio = rng.gamma(p) / rng.gamma(q);
      x = fit.root_hi + (fit.root_hi - fit.root_lo) * ratio;
      break;
    }
  }
  return fit.mean + fit.sd * fit.sign * x;
}

}  // namespace dsvar
