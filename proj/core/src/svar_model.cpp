#include "dsvar/svar_model.hpp"

#include "dsvar/rng.hpp"

#include <cmath>
#include <Eigen/Eigenvalues>

namespace dsvar {

Matrix companion_matrix(const std::vector<Matrix>& lag_matrices) {
  if (lag_matrices.empty()) throw ParameterError("companion: need at least one lag matrix");
  const Eigen::Index n = lag_matrices.front().rows();
  const Eigen::Index p = static_cast<Eigen::Index>(lag_matrices.size());
  Matrix c = Matrix::Zero(n * p, n * p);
  for (Eigen::Index h = 0; h < p; ++h) c.block(0, h * n, n, n) = lag_matrices[static_cast<std::size_t>(h)];
  if (p > 1) c.block(n, 0, n * (p - 1), n * (p - 1)).setIdentity();
  return c;
}

double spectral_radius(const std::vector<Matrix>& lag_matrices) {
  const Matrix c = companion_matrix(lag_matrices);
  Eigen::EigenSolver<Matrix> es(c, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

void validate(const SvarModel& model, const ModelLimits& limits) {
  const Eigen::Index n = model.mixing.rows();
  if (n < 2) throw ParameterError("model: dimension n must be at least 2");
  if (model.mixing.cols() != n) throw ParameterError("model: mixing matrix must be square");
  if (model.lag_matrices.empty()) throw ParameterError("model: lag order p must be at least 1");
  for (const auto& a : model.lag_matrices)
    if (a.rows() != n || a.cols() != n) throw ParameterError("model: lag matrices must be n x n");
  if (static_cast<Eigen::Index>(model.shocks.size()) != n)
    throw ParameterError("model: need one shock spec per component");
  for (const auto& s : model.shocks) validate(s);
  if (!model.names.empty() && static_cast<Eigen::Index>(model.names.size()) != n)
    throw ParameterError("model: need one name per variable");
  if (model.hl) {
    const double theta = model.hl->theta();
    if (!(model.hl->alpha > 1.0 && model.hl->alpha < 2.0) || !(theta > 0.0 && theta < 0.5))
      throw ParameterError("model: hl.alpha must lie in (1, 2)");
  }

  const double radius = spectral_radius(model.lag_matrices);
  if (!(radius < limits.max_spectral_radius))
    throw ParameterError("model: companion spectral radius " + std::to_string(radius) +
                         " violates stability");
  Eigen::JacobiSVD<Matrix> svd(model.mixing);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  if (!(cond < limits.max_mixing_condition))
    throw ParameterError("model: mixing matrix is singular or ill-conditioned (cond " +
                         std::to_string(cond) + ")");
}

EffectiveMatrices effective_matrices(const SvarModel& model, Eigen::Index T) {
  EffectiveMatrices out{model.lag_matrices, model.mixing};
  if (!model.hl) return out;
  const double damp = std::pow(static_cast<double>(T), -model.hl->theta());
  const Eigen::Index n = model.mixing.rows();
  for (auto& a : out.lag_matrices) a.col(0).tail(n - 1) *= damp;
  out.mixing.col(0).tail(n - 1) *= damp;
  return out;
}

SimulationResult simulate(const SvarModel& model, Eigen::Index T, Eigen::Index burn_in,
                          std::uint64_t seed) {
  validate(model);
  if (T < 1) throw ParameterError("simulate: T must be positive");
  if (burn_in < 0) throw ParameterError("simulate: burn_in must be nonnegative");

  const Eigen::Index n = model.dimension();
  const int p = model.lag_order();
  const Eigen::Index total = T + burn_in;
  const EffectiveMatrices eff = effective_matrices(model, T);

  Matrix u(total, n);
  for (Eigen::Index j = 0; j < n; ++j)
    u.col(j) = sample_shock(model.shocks[static_cast<std::size_t>(j)], total,
                            child_seed(seed, static_cast<std::uint64_t>(j)));

  Matrix y = Matrix::Zero(total, n);
  for (Eigen::Index t = 0; t < total; ++t) {
    Vector yt = eff.mixing * u.row(t).transpose();
    for (int h = 1; h <= p && t - h >= 0; ++h)
      yt.noalias() += eff.lag_matrices[static_cast<std::size_t>(h - 1)] * y.row(t - h).transpose();
    if (!yt.allFinite())
      throw SimulationError("simulate: non-finite value at t = " + std::to_string(t - burn_in) +
                                " (heavy tails with unstable dynamics?)",
                            static_cast<std::size_t>(t < burn_in ? 0 : t - burn_in));
    y.row(t) = yt.transpose();
  }

  std::vector<std::string> names = model.names.empty() ? TimeSeriesMatrix::default_names(n) : model.names;
  SimulationResult out;
  out.y = TimeSeriesMatrix(y.bottomRows(T), names);
  out.shocks = TimeSeriesMatrix(u.bottomRows(T), TimeSeriesMatrix::default_names(n, "u"));
  return out;
}

namespace {

Normalized finish(Matrix w) {
  Eigen::FullPivLU<Matrix> lu(w);
  if (!lu.isInvertible()) throw DegenerateInputError("normalize: normalized W is singular");
  return {w, lu.inverse()};
}

}  // namespace

Normalized normalize_w_rows_sum_one(const Eigen::Ref<const Matrix>& w_init) {
  Matrix w = w_init;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    const double s = w.row(i).sum();
    const double scale = w.row(i).cwiseAbs().sum();
    if (!(std::abs(s) > 1e-12 * std::max(scale, 1e-300)))
      throw DegenerateInputError("normalize: row " + std::to_string(i + 1) + " of W_init sums to zero");
    w.row(i) /= s;
  }
  return finish(std::move(w));
}

Normalized normalize_w_rows_unit_norm(const Eigen::Ref<const Matrix>& w_init) {
  Matrix w = w_init;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    const double norm = w.row(i).norm();
    if (!(norm > 0.0)) throw DegenerateInputError("normalize: row " + std::to_string(i + 1) + " of W_init is zero");
    w.row(i) /= norm;
  }
  return finish(std::move(w));
}

Matrix design_lag_matrix() {
  Matrix a(3, 3);
  a << 0.2, 0.0, 0.0,  //
      0.3, 0.6, 0.0,   //
      0.4, 0.3, 0.8;
  return a;
}

Matrix design_initial_mixing(MixingDesign design) {
  Matrix b(3, 3);
  if (design == MixingDesign::NotLowerTriangular) {
    b << 1, 3, 0,  //
        1, 1, 0,   //
        0, 0, 1;
  } else {
    b << 1, 0, 0,    //
        1.5, 1, 0,   //
        2, 0.5, 1;
  }
  return b;
}

Matrix design_initial_unmixing(MixingDesign design) {
  if (design == MixingDesign::NotLowerTriangular) return design_initial_mixing(design).inverse();
  // The published lower-triangular "True B" is the unit-row-norm normalization
  // of this W_init rather than of inv(B_init).
  Matrix w(3, 3);
  w << 1, 0, 0,    //
      -3, 4, 0,    //
      -21, -4, 24;
  return w;
}

Matrix design_mixing(MixingDesign design) {
  return normalize_w_rows_unit_norm(design_initial_unmixing(design)).mixing;
}

std::vector<ShockSpec> design_shocks(NoiseDesign noise, double heavy_alpha) {
  if (noise == NoiseDesign::HeavyLight)
    return {StableSpec{heavy_alpha, 0.0}, StudentTSpec{5.0, true}, StudentTSpec{10.0, true}};
  return {PearsonMomentsSpec{0.0, 1.0, 2.0, 20.0}, PearsonMomentsSpec{0.0, 1.0, -2.0, 10.0},
          StudentTSpec{15.0, true}};
}

SvarModel design_model(MixingDesign design, NoiseDesign noise, double heavy_alpha) {
  SvarModel m;
  m.lag_matrices = {design_lag_matrix()};
  m.mixing = design_mixing(design);
  m.shocks = design_shocks(noise, heavy_alpha);
  m.names = {"y1", "y2", "y3"};
  return m;
}

std::string to_string(MixingDesign design) {
  return design == MixingDesign::NotLowerTriangular ? "NLT" : "LT";
}

std::string to_string(NoiseDesign noise) { return noise == NoiseDesign::HeavyLight ? "HL" : "LL"; }

}  // namespace dsvar
