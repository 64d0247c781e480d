#include "dsvar/distributions.hpp"

#include "dsvar/pearson.hpp"
#include "dsvar/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace dsvar {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Chambers-Mallows-Stuck, S1 parameterization (Weron 1996).
double draw_stable(double alpha, double beta, Rng& rng) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  const double v = std::numbers::pi * (rng.uniform_open() - 0.5);
  const double w = rng.exponential();
  if (std::abs(alpha - 1.0) < 1e-12) {
    const double a = half_pi + beta * v;
    return (a * std::tan(v) - beta * std::log(half_pi * w * std::cos(v) / a)) / half_pi;
  }
  const double t = beta * std::tan(half_pi * alpha);
  const double b = std::atan(t) / alpha;
  const double s = std::pow(1.0 + t * t, 1.0 / (2.0 * alpha));
  const double av = alpha * (v + b);
  return s * std::sin(av) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos(v - av) / w, (1.0 - alpha) / alpha);
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

void validate(const ShockSpec& spec) {
  std::visit(overloaded{
                 [](const StableSpec& s) {
                   if (!(s.alpha > 0.0 && s.alpha <= 2.0))
                     throw ParameterError("stable: alpha must lie in (0, 2]");
                   if (!(s.beta_skew >= -1.0 && s.beta_skew <= 1.0))
                     throw ParameterError("stable: beta must lie in [-1, 1]");
                 },
                 [](const ParetoSpec& s) {
                   if (!(s.alpha > 0.0)) throw ParameterError("pareto: alpha must be positive");
                 },
                 [](const StudentTSpec& s) {
                   if (!(s.dof > 0.0)) throw ParameterError("student-t: dof must be positive");
                   if (s.standardized && !(s.dof > 2.0))
                     throw ParameterError("student-t: standardization needs dof > 2");
                 },
                 [](const PearsonMomentsSpec& s) {
                   (void)fit_pearson(s.mean, s.variance, s.skewness, s.kurtosis);
                 },
                 [](const GaussianSpec&) {},
             },
             spec);
}

std::string describe(const ShockSpec& spec) {
  return std::visit(
      overloaded{
          [](const StableSpec& s) { return "stable(" + fmt(s.alpha) + "," + fmt(s.beta_skew) + ")"; },
          [](const ParetoSpec& s) { return "pareto(" + fmt(s.alpha) + ")"; },
          [](const StudentTSpec& s) { return "t" + fmt(s.dof) + (s.standardized ? "" : "(raw)"); },
          [](const PearsonMomentsSpec& s) {
            return "pearson(" + fmt(s.mean) + "," + fmt(s.variance) + "," + fmt(s.skewness) + "," +
                   fmt(s.kurtosis) + ")";
          },
          [](const GaussianSpec&) { return std::string("gaussian"); },
      },
      spec);
}

Vector sample_shock(const ShockSpec& spec, Eigen::Index count, std::uint64_t seed) {
  if (count < 1) throw ParameterError("sample_shock: count must be positive");
  validate(spec);
  Rng rng(seed);
  Vector out(count);
  std::visit(overloaded{
                 [&](const StableSpec& s) {
                   for (Eigen::Index i = 0; i < count; ++i) out[i] = draw_stable(s.alpha, s.beta_skew, rng);
                 },
                 [&](const ParetoSpec& s) {
                   for (Eigen::Index i = 0; i < count; ++i)
                     out[i] = std::pow(rng.uniform_open(), -1.0 / s.alpha);
                 },
                 [&](const StudentTSpec& s) {
                   const double scale = s.standardized ? std::sqrt((s.dof - 2.0) / s.dof) : 1.0;
                   for (Eigen::Index i = 0; i < count; ++i) out[i] = scale * rng.student_t(s.dof);
                 },
                 [&](const PearsonMomentsSpec& s) {
                   const PearsonFit fit = fit_pearson(s.mean, s.variance, s.skewness, s.kurtosis);
                   for (Eigen::Index i = 0; i < count; ++i) out[i] = sample_pearson(fit, rng);
                 },
                 [&](const GaussianSpec&) {
                   for (Eigen::Index i = 0; i < count; ++i) out[i] = rng.normal();
                 },
             },
             spec);
  return out;
}

StableLimitSample simulate_stable_limit(double alpha, int truncation, Eigen::Index draws,
                                        std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw ParameterError("stable limit: alpha must lie in (0, 2)");
  if (truncation < 1) throw ParameterError("stable limit: truncation M must be positive");
  if (draws < 1) throw ParameterError("stable limit: draws must be positive");
  Rng rng(seed);
  StableLimitSample out{alpha, truncation, Vector(draws)};
  const double power = -1.0 / alpha;
  for (Eigen::Index j = 0; j < draws; ++j) {
    double arrival = 0.0;
    long double sum = 0.0L;
    for (int m = 0; m < truncation; ++m) {
      arrival += rng.exponential();
      sum += std::pow(arrival, power);
    }
    out.values[j] = static_cast<double>(sum);
  }
  return out;
}

double moment_ratio_kurtosis(const Eigen::Ref<const Vector>& x) {
  if (x.size() < 4) throw ParameterError("kurtosis: need at least 4 observations");
  long double s2 = 0.0L, s4 = 0.0L;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const long double v = x[i];
    s2 += v * v;
    s4 += v * v * v * v;
  }
  if (!(s2 > 0.0L)) throw DegenerateInputError("kurtosis: zero second moment");
  return static_cast<double>(static_cast<long double>(x.size()) * s4 / (s2 * s2));
}

double sample_kurtosis(const Eigen::Ref<const Vector>& x) {
  if (x.size() < 4) throw ParameterError("kurtosis: need at least 4 observations");
  const double mean = x.mean();
  const Vector centered = x.array() - mean;
  const double scale = centered.cwiseAbs().maxCoeff();
  if (!(scale > 1e-300) || centered.squaredNorm() <= 1e-28 * scale * scale * static_cast<double>(x.size()))
    throw DegenerateInputError("kurtosis: input is constant");
  return moment_ratio_kurtosis(centered);
}

double hill_tail_index(const Eigen::Ref<const Vector>& x, Eigen::Index k) {
  const Eigen::Index n = x.size();
  if (k < 2) throw ParameterError("hill: k must be at least 2");
  if (k >= n) throw ParameterError("hill: k must be smaller than the sample size");
  std::vector<double> mags(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) mags[static_cast<std::size_t>(i)] = std::abs(x[i]);
  std::nth_element(mags.begin(), mags.begin() + k, mags.end(), std::greater<>());
  const double threshold = mags[static_cast<std::size_t>(k)];
  if (!(threshold > 0.0)) throw ParameterError("hill: the (k+1)-th largest magnitude is zero");
  long double sum = 0.0L;
  for (Eigen::Index i = 0; i < k; ++i) sum += std::log(mags[static_cast<std::size_t>(i)] / threshold);
  const long double mean_log = sum / static_cast<long double>(k);
  if (!(mean_log > 0.0L)) throw ParameterError("hill: top order statistics are tied");
  return static_cast<double>(1.0L / mean_log);
}

}  // namespace dsvar
