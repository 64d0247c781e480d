#include "dsvar/irf.hpp"

#include "dsvar/prewhitening.hpp"
#include "dsvar/svar_model.hpp"
#include "dsvar/var_estimation.hpp"

#include <cmath>

namespace dsvar {

std::string to_string(IrfEstimator estimator) {
  switch (estimator) {
    case IrfEstimator::VarImplied: return "var";
    case IrfEstimator::CholeskiImplied: return "chol";
    case IrfEstimator::LocalProjection: return "lp";
  }
  return "unknown";
}

namespace {

IrfTable recursion(const std::vector<Matrix>& lags, const Matrix& impact, int shock, int horizon,
                   IrfEstimator estimator) {
  if (horizon < 0) throw ParameterError("irf: horizon must be >= 0");
  if (shock < 0 || shock >= impact.cols()) throw ParameterError("irf: shock index out of range");
  IrfTable table;
  table.estimator = estimator;
  table.shock = shock;
  const auto psi = ma_coefficients(lags, impact, horizon);
  table.responses.resize(horizon + 1, impact.rows());
  for (int h = 0; h <= horizon; ++h) table.responses.row(h) = psi[static_cast<std::size_t>(h)].col(shock).transpose();
  if (!lags.empty() && spectral_radius(lags) >= 1.0)
    table.warnings.push_back("companion spectral radius >= 1: responses do not die out");
  return table;
}

}  // namespace

IrfTable irf_var_implied(const std::vector<Matrix>& lag_matrices, const Eigen::Ref<const Matrix>& mixing, int shock,
                         int horizon) {
  return recursion(lag_matrices, mixing, shock, horizon, IrfEstimator::VarImplied);
}

IrfTable irf_choleski(const std::vector<Matrix>& lag_matrices, const Eigen::Ref<const Matrix>& residual_cov,
                      const std::vector<int>& ordering, int shock, int horizon) {
  return recursion(lag_matrices, choleski_factor(residual_cov, ordering), shock, horizon,
                   IrfEstimator::CholeskiImplied);
}

IrfTable irf_local_projection(const Eigen::Ref<const Matrix>& y, const Eigen::Ref<const Matrix>& shocks, int shock,
                              int horizon, const LocalProjectionOptions& options) {
  const Eigen::Index T = y.rows();
  const Eigen::Index n = y.cols();
  const Eigen::Index ts = shocks.rows();
  const Eigen::Index m = shocks.cols();
  const int p = options.lags;
  if (horizon < 0) throw ParameterError("local projection: horizon must be >= 0");
  if (p < 0) throw ParameterError("local projection: lags must be >= 0");
  if (shock < 0 || shock >= m) throw ParameterError("local projection: shock index out of range");
  if (ts > T) throw ParameterError("local projection: more shock rows than observations");
  if (options.exog && options.exog->rows() != T) throw ParameterError("local projection: exog rows must match y");
  const Eigen::Index offset = T - ts;
  const Eigen::Index q = options.exog ? options.exog->cols() : 0;
  const Eigen::Index k = 1 + (options.other_shocks ? m - 1 : 0) + n * p + (options.constant ? 1 : 0) + q;

  // Usable dates t: shock observed, p lags available, t + h inside the sample.
  const Eigen::Index first = std::max<Eigen::Index>(offset, p);
  IrfTable table;
  table.estimator = IrfEstimator::LocalProjection;
  table.shock = shock;
  table.responses.resize(horizon + 1, n);
  Matrix se(horizon + 1, n);
  for (int h = 0; h <= horizon; ++h) {
    const Eigen::Index last = T - 1 - h;
    const Eigen::Index rows = last - first + 1;
    if (rows <= k) throw ParameterError("local projection: too few observations for horizon " + std::to_string(h));
    Matrix x(rows, k);
    Matrix target(rows, n);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Eigen::Index t = first + r;
      Eigen::Index c = 0;
      x(r, c++) = shocks(t - offset, shock);
      if (options.other_shocks)
        for (Eigen::Index j = 0; j < m; ++j)
          if (j != shock) x(r, c++) = shocks(t - offset, j);
      for (int l = 1; l <= p; ++l)
        for (Eigen::Index j = 0; j < n; ++j) x(r, c++) = y(t - l, j);
      if (options.constant) x(r, c++) = 1.0;
      for (Eigen::Index j = 0; j < q; ++j) x(r, c++) = (*options.exog)(t, j);
      target.row(r) = y.row(t + h);
    }
    const LeastSquares ls = least_squares(x, target, options.max_condition);
    const Matrix xtx_inv = (x.transpose() * x).ldlt().solve(Matrix::Identity(k, k));
    for (Eigen::Index i = 0; i < n; ++i) {
      table.responses(h, i) = ls.coefficients(0, i);
      const double s2 = ls.residuals.col(i).squaredNorm() / static_cast<double>(rows - k);
      se(h, i) = std::sqrt(std::max(0.0, s2 * xtx_inv(0, 0)));
    }
  }
  table.se = se;
  table.warnings.push_back("standard errors are conventional OLS; inference is non-standard under heavy tails");
  return table;
}

IrfTable scale_irf(const IrfTable& table, double factor) {
  if (!(factor != 0.0) || !std::isfinite(factor)) throw ParameterError("scale_irf: factor must be finite and nonzero");
  IrfTable out = table;
  out.responses *= factor;
  if (out.se) *out.se *= std::abs(factor);
  out.shock_scale *= factor;
  return out;
}

IrfTable unit_effect_rescale(const IrfTable& table, int target) {
  if (target < 0 || target >= table.responses.cols()) throw ParameterError("unit effect: target out of range");
  const double impact = table.responses(0, target);
  if (impact == 0.0) throw AmbiguityError("unit effect: zero impact on the target variable");
  return scale_irf(table, 1.0 / impact);
}

IcaResult scale_shock(const IcaResult& result, int shock, double factor) {
  if (shock < 0 || shock >= result.B_hat.cols()) throw ParameterError("scale_shock: shock index out of range");
  if (!(factor != 0.0) || !std::isfinite(factor)) throw ParameterError("scale_shock: factor must be finite and nonzero");
  IcaResult out = result;
  out.B_hat.col(shock) *= factor;
  out.B_omega.col(shock) *= factor;
  out.W_hat.row(shock) /= factor;
  out.W_omega.row(shock) /= factor;
  out.shocks_hat.col(shock) /= factor;
  return out;
}

RescaledIca unit_effect_rescale(const IcaResult& result, int target, int shock) {
  if (target < 0 || target >= result.B_hat.rows()) throw ParameterError("unit effect: target out of range");
  if (shock < 0 || shock >= result.B_hat.cols()) throw ParameterError("unit effect: shock index out of range");
  const double impact = result.B_hat(target, shock);
  if (impact == 0.0) throw AmbiguityError("unit effect: zero impact on the target variable");
  const double omega_impact = result.B_omega(target, shock);
  IcaResult out = scale_shock(result, shock, 1.0 / impact);
  // B_omega follows its own scale so that both conventions hit the unit impact.
  out.B_omega.col(shock) = result.B_omega.col(shock) / omega_impact;
  out.W_omega.row(shock) = result.W_omega.row(shock) * omega_impact;
  return {std::move(out), impact};
}

}  // namespace dsvar
