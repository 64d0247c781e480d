#include "dsvar/ica.hpp"

#include "dsvar/parallel.hpp"
#include "dsvar/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dsvar {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct RestartOutcome {
  std::vector<double> angles;
  double objective = 0.0;
  int sweeps = 0;
  int evaluations = 0;
  bool converged = false;
};

class RotationObjective {
 public:
  RotationObjective(const Matrix& whitened, const DistCovConfig& config) : z_(whitened), config_(config) {}

  double operator()(const std::vector<double>& angles) {
    ++evaluations_;
    const Matrix o = rotation_from_angles({angles}, static_cast<int>(z_.cols()));
    return aggregate_objective(z_ * o.transpose(), config_);
  }
  int evaluations() const noexcept { return evaluations_; }

 private:
  const Matrix& z_;
  DistCovConfig config_;
  int evaluations_ = 0;
};

RestartOutcome local_search(RotationObjective& f, std::vector<double> angles, const OptimizerSettings& s) {
  constexpr double kInvPhi = 0.6180339887498949;
  RestartOutcome out;
  double best = f(angles);
  double step = s.initial_step;
  for (int sweep = 1; sweep <= s.max_sweeps; ++sweep) {
    out.sweeps = sweep;
    const double before = best;
    double largest_move = 0.0;
    for (std::size_t k = 0; k < angles.size(); ++k) {
      const double centre = angles[k];
      auto at = [&](double t) {
        std::vector<double> trial = angles;
        trial[k] = t;
        return f(trial);
      };
      double lo = centre - step, hi = centre + step;
      double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
      double f1 = at(x1), f2 = at(x2);
      double best_t = centre, best_f = best;
      auto consider = [&](double t, double v) {
        if (v < best_f) {
          best_f = v;
          best_t = t;
        }
      };
      consider(x1, f1);
      consider(x2, f2);
      for (int e = 2; e < s.line_search_evaluations; ++e) {
        if (f1 <= f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - kInvPhi * (hi - lo);
          f1 = at(x1);
          consider(x1, f1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + kInvPhi * (hi - lo);
          f2 = at(x2);
          consider(x2, f2);
        }
      }
      largest_move = std::max(largest_move, std::abs(best_t - centre));
      angles[k] = best_t;
      best = best_f;
    }
    if (step <= s.min_step && before - best < s.tolerance) {
      out.converged = true;
      break;
    }
    // Minima well inside the bracket: search more finely.
    if (largest_move < 0.5 * step) step = std::max(0.5 * step, s.min_step);
  }
  out.angles = std::move(angles);
  out.objective = best;
  return out;
}

}  // namespace

void OptimizerSettings::validate() const {
  if (restarts < 1) throw ParameterError("optimizer: restarts must be >= 1");
  if (max_sweeps < 1) throw ParameterError("optimizer: max_sweeps must be >= 1");
  if (!(tolerance >= 0.0)) throw ParameterError("optimizer: tolerance must be >= 0");
  if (!(initial_step > 0.0) || !(min_step > 0.0) || min_step > initial_step)
    throw ParameterError("optimizer: need 0 < min_step <= initial_step");
  if (line_search_evaluations < 3) throw ParameterError("optimizer: line_search_evaluations must be >= 3");
}

int angle_count(int n) { return n * (n - 1) / 2; }

Matrix rotation_from_angles(const OrthogonalParam& param, int n) {
  if (static_cast<int>(param.angles.size()) != angle_count(n))
    throw ParameterError("rotation_from_angles: expected n(n-1)/2 angles");
  Matrix o = Matrix::Identity(n, n);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++k) {
      const double c = std::cos(param.angles[k]);
      const double s = std::sin(param.angles[k]);
      // o <- o * G(i, j)
      const Vector ci = o.col(i);
      const Vector cj = o.col(j);
      o.col(i) = c * ci + s * cj;
      o.col(j) = -s * ci + c * cj;
    }
  }
  return o;
}

bool lexicographic_less(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  for (Eigen::Index k = 0; k < std::min(a.size(), b.size()); ++k) {
    if (a[k] < b[k]) return true;
    if (a[k] > b[k]) return false;
  }
  return a.size() < b.size();
}

Matrix omega_normalize(const Eigen::Ref<const Matrix>& w) {
  const Eigen::Index n = w.rows();
  Matrix rows = w;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = rows.row(i).norm();
    if (!(norm > 0.0)) throw DegenerateInputError("omega_normalize: zero row");
    rows.row(i) /= norm;
    Eigen::Index arg = 0;
    rows.row(i).cwiseAbs().maxCoeff(&arg);
    if (rows(i, arg) < 0.0) rows.row(i) *= -1.0;
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return lexicographic_less(rows.row(a).transpose(), rows.row(b).transpose());
  });
  return permute_rows(rows, order);
}

IcaResult estimate_unmixing(const Eigen::Ref<const Matrix>& residuals, const WhitenerVariant& whitener,
                            const DistCovConfig& config, const OptimizerSettings& optimizer) {
  config.validate();
  optimizer.validate();
  const Eigen::Index T = residuals.rows();
  const Eigen::Index n = residuals.cols();
  if (n < 2) throw ParameterError("estimate_unmixing: need at least two series");
  if (T <= 10 * n) throw ParameterError("estimate_unmixing: need more than 10 n observations");

  Whitened w = whiten(residuals, whitener);
  const int dim = static_cast<int>(n);
  const std::size_t starts = static_cast<std::size_t>(optimizer.restarts);

  std::vector<RestartOutcome> outcomes(starts);
  std::vector<int> evaluations(starts, 0);
  parallel_for(starts, optimizer.threads, [&](std::size_t r) {
    std::vector<double> start(static_cast<std::size_t>(angle_count(dim)), 0.0);
    if (r > 0) {
      Rng rng(child_seed(optimizer.seed, r));
      for (double& a : start) a = rng.uniform(-kPi, kPi);
    }
    RotationObjective f(w.data, config);
    outcomes[r] = local_search(f, std::move(start), optimizer);
    evaluations[r] = f.evaluations();
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < starts; ++r)
    if (outcomes[r].objective < outcomes[best].objective) best = r;

  IcaResult result;
  result.whitener = w.whitener;
  result.O_hat = rotation_from_angles({outcomes[best].angles}, dim);
  result.objective_value = outcomes[best].objective;
  result.report.iterations = outcomes[best].sweeps;
  result.report.evaluations = std::accumulate(evaluations.begin(), evaluations.end(), 0);
  result.report.restarts = optimizer.restarts;
  result.report.best_restart = static_cast<int>(best);
  result.report.converged = outcomes[best].converged;
  {
    RotationObjective f(w.data, config);
    result.report.start_objective = f(std::vector<double>(static_cast<std::size_t>(angle_count(dim)), 0.0));
  }

  const Matrix w_omega = omega_normalize(result.O_hat * w.whitener.inverse_factor);
  const Matrix raw_shocks = residuals * w_omega.transpose();
  const Vector kurt = column_kurtosis(raw_shocks);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return kurt[a] > kurt[b]; });

  result.W_omega = permute_rows(w_omega, order);
  result.B_omega = result.W_omega.inverse();
  result.kurtosis.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) result.kurtosis[k] = kurt[order[static_cast<std::size_t>(k)]];

  const Matrix shocks = residuals * result.W_omega.transpose();
  const Matrix centred = demean(shocks);
  Vector sd(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    sd[k] = std::sqrt(centred.col(k).squaredNorm() / static_cast<double>(T));
    if (!(sd[k] > 0.0)) throw DegenerateInputError("estimate_unmixing: recovered shock has zero variance");
  }
  result.W_hat = sd.cwiseInverse().asDiagonal() * result.W_omega;
  result.B_hat = result.B_omega * sd.asDiagonal();
  result.shocks_hat = residuals * result.W_hat.transpose();
  return result;
}

double amari_distance(const Eigen::Ref<const Matrix>& a0, const Eigen::Ref<const Matrix>& a) {
  if (a0.rows() != a0.cols() || a.rows() != a.cols() || a0.rows() != a.rows())
    throw ParameterError("amari_distance: need two square matrices of equal size");
  const Eigen::Index n = a.rows();
  Eigen::FullPivLU<Matrix> lu(a);
  if (!lu.isInvertible()) throw ParameterError("amari_distance: A is singular");
  const Matrix r = (a0 * lu.inverse()).cwiseAbs();
  double rows = 0.0, cols = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double rmax = r.row(i).maxCoeff();
    const double cmax = r.col(i).maxCoeff();
    if (!(rmax > 0.0) || !(cmax > 0.0)) throw ParameterError("amari_distance: A0 is singular");
    rows += r.row(i).sum() / rmax - 1.0;
    cols += r.col(i).sum() / cmax - 1.0;
  }
  return (rows + cols) / (2.0 * static_cast<double>(n));
}

double amari_distance_abs(const Eigen::Ref<const Matrix>& a0, const Eigen::Ref<const Matrix>& a) {
  return amari_distance(a0.cwiseAbs(), a.cwiseAbs());
}

Matrix match_columns(const Eigen::Ref<const Matrix>& estimate, const Eigen::Ref<const Matrix>& reference) {
  const Eigen::Index n = estimate.cols();
  if (reference.rows() != estimate.rows() || reference.cols() != n)
    throw ParameterError("match_columns: matrices differ in shape");
  if (n > 8) throw ParameterError("match_columns: at most 8 columns");
  // cost(i, j): squared distance of estimate column i, best sign, to reference column j.
  Matrix cost(n, n);
  Matrix sign(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double plus = (estimate.col(i) - reference.col(j)).squaredNorm();
      const double minus = (estimate.col(i) + reference.col(j)).squaredNorm();
      cost(i, j) = std::min(plus, minus);
      sign(i, j) = minus < plus ? -1.0 : 1.0;
    }
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) c += cost(perm[static_cast<std::size_t>(j)], j);
    if (c < best_cost) {
      best_cost = c;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  Matrix out(estimate.rows(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const int i = best[static_cast<std::size_t>(j)];
    out.col(j) = sign(i, j) * estimate.col(i);
  }
  return out;
}

SignRule parse_sign_rule(const std::string& text) {
  if (text.empty() || text == "none") return SignRule::none();
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ParameterError("sign rule: expected none, neg:k or pos:k");
  const std::string kind = text.substr(0, colon);
  int k = 0;
  try {
    std::size_t used = 0;
    k = std::stoi(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) throw ParameterError("");
  } catch (const std::exception&) {
    throw ParameterError("sign rule: bad variable index in '" + text + "'");
  }
  if (k < 1) throw ParameterError("sign rule: variable index is 1-based");
  if (kind == "neg") return SignRule::impact_negative(k - 1);
  if (kind == "pos") return SignRule::impact_positive(k - 1);
  throw ParameterError("sign rule: expected none, neg:k or pos:k");
}

LabeledShock label_disaster_shock(const IcaResult& result, const SignRule& rule) {
  LabeledShock out{0, result};
  if (rule.kind == SignRule::Kind::None) return out;
  if (rule.variable < 0 || rule.variable >= result.B_hat.rows())
    throw ParameterError("label_disaster_shock: variable index out of range");
  const double impact = result.B_hat(rule.variable, 0);
  if (impact == 0.0) throw AmbiguityError("label_disaster_shock: zero impact on the sign variable");
  const bool want_positive = rule.kind == SignRule::Kind::ImpactPositive;
  if ((impact > 0.0) != want_positive) {
    IcaResult& r = out.result;
    r.W_omega.row(0) *= -1.0;
    r.W_hat.row(0) *= -1.0;
    r.B_omega.col(0) *= -1.0;
    r.B_hat.col(0) *= -1.0;
    r.shocks_hat.col(0) *= -1.0;
  }
  return out;
}

}  // namespace dsvar
