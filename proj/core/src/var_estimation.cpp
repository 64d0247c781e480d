#include "dsvar/var_estimation.hpp"

#include <cmath>
#include <numbers>

namespace dsvar {

LeastSquares least_squares(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Matrix>& y,
                           double max_condition) {
  if (x.rows() != y.rows()) throw ParameterError("least_squares: x and y have different row counts");
  if (x.rows() <= x.cols())
    throw EstimationError("least_squares: need more observations (" + std::to_string(x.rows()) +
                          ") than regressors (" + std::to_string(x.cols()) + ")");
  if (!x.allFinite() || !y.allFinite()) throw EstimationError("least_squares: non-finite data");

  LeastSquares out;
  if (x.cols() == 0) {
    out.coefficients = Matrix(0, y.cols());
    out.residuals = y;
    return out;
  }

  Eigen::JacobiSVD<Matrix> svd(x);
  const auto& sv = svd.singularValues();
  const double smallest = sv(sv.size() - 1);
  out.condition_number = smallest > 0.0 ? sv(0) / smallest : INFINITY;
  if (!(out.condition_number < max_condition))
    throw EstimationError("least_squares: singular design (condition number " +
                              std::to_string(out.condition_number) + ")",
                          out.condition_number);

  Eigen::ColPivHouseholderQR<Matrix> qr(x);
  if (qr.rank() < x.cols())
    throw EstimationError("least_squares: rank-deficient design (condition number " +
                              std::to_string(out.condition_number) + ")",
                          out.condition_number);
  out.coefficients = qr.solve(y);
  out.residuals = y - x * out.coefficients;
  return out;
}

VarFit fit_var(const TimeSeriesMatrix& y, int p, const std::optional<TimeSeriesMatrix>& exog,
               const VarOptions& options) {
  if (p < 0) throw ParameterError("fit_var: lag order must be nonnegative");
  const Eigen::Index T = y.length();
  const Eigen::Index n = y.dimension();
  if (n < 1) throw ParameterError("fit_var: no variables");
  const Eigen::Index q_exog = exog ? exog->dimension() : 0;
  if (exog && exog->length() != T) throw ParameterError("fit_var: exogenous block has a different length");
  const Eigen::Index q = q_exog + (options.include_constant ? 1 : 0);
  const Eigen::Index k = n * p + q;
  const Eigen::Index rows = T - p;
  if (T <= n * p + q + 1 || rows <= k)
    throw ParameterError("fit_var: sample too short, need T > n*p + q + 1");

  Matrix x(rows, k);
  Eigen::Index col = 0;
  for (int h = 1; h <= p; ++h, col += n) x.block(0, col, rows, n) = y.values.middleRows(p - h, rows);
  if (options.include_constant) x.col(col++).setOnes();
  if (exog) x.block(0, col, rows, q_exog) = exog->values.bottomRows(rows);

  const LeastSquares ls = least_squares(x, y.values.bottomRows(rows), options.max_condition);

  VarFit fit;
  fit.p = p;
  fit.names = y.names;
  fit.condition_number = ls.condition_number;
  fit.sum_lags = Matrix::Zero(n, n);
  for (int h = 0; h < p; ++h) {
    Matrix a = ls.coefficients.middleRows(h * n, n).transpose();
    fit.sum_lags += a;
    fit.lag_matrices.push_back(std::move(a));
  }
  fit.exog_coeffs = ls.coefficients.bottomRows(q).transpose();
  if (options.include_constant) fit.exog_names.emplace_back("const");
  if (exog) fit.exog_names.insert(fit.exog_names.end(), exog->names.begin(), exog->names.end());
  fit.residuals = ls.residuals;
  fit.residual_cov = sample_covariance(ls.residuals);
  return fit;
}

std::vector<Matrix> ma_coefficients(const std::vector<Matrix>& lag_matrices, const Eigen::Ref<const Matrix>& mixing,
                                    int horizon) {
  if (horizon < 0) throw ParameterError("ma_coefficients: horizon must be nonnegative");
  const Eigen::Index n = mixing.rows();
  const int p = static_cast<int>(lag_matrices.size());
  std::vector<Matrix> phi;
  phi.reserve(static_cast<std::size_t>(horizon) + 1);
  phi.push_back(Matrix::Identity(n, n));
  for (int h = 1; h <= horizon; ++h) {
    Matrix next = Matrix::Zero(n, n);
    for (int j = 1; j <= std::min(h, p); ++j)
      next.noalias() += lag_matrices[static_cast<std::size_t>(j - 1)] * phi[static_cast<std::size_t>(h - j)];
    phi.push_back(std::move(next));
  }
  std::vector<Matrix> psi;
  psi.reserve(phi.size());
  for (const auto& f : phi) psi.push_back(f * mixing);
  return psi;
}

TimeSeriesMatrix low_frequency_detrend(const TimeSeriesMatrix& y, int q_cosines) {
  const Eigen::Index T = y.length();
  if (q_cosines < 0) throw ParameterError("detrend: number of cosines must be nonnegative");
  if (!(2 * static_cast<Eigen::Index>(q_cosines) < T)) throw ParameterError("detrend: need q_cosines < T/2");
  Matrix x(T, q_cosines + 1);
  x.col(0).setOnes();
  for (int j = 1; j <= q_cosines; ++j)
    for (Eigen::Index t = 0; t < T; ++t)
      x(t, j) = std::cos(j * std::numbers::pi * (static_cast<double>(t) + 0.5) / static_cast<double>(T));
  TimeSeriesMatrix out = y;
  out.values = least_squares(x, y.values).residuals;
  return out;
}

TimeSeriesMatrix purge_exogenous(const TimeSeriesMatrix& y, const TimeSeriesMatrix& x, int lags_of_x,
                                 double max_condition) {
  if (lags_of_x < 0) throw ParameterError("purge_exogenous: lags must be nonnegative");
  if (x.length() != y.length()) throw ParameterError("purge_exogenous: X and Y differ in length");
  const Eigen::Index T = y.length();
  const Eigen::Index rows = T - lags_of_x;
  const Eigen::Index m = x.dimension();
  Matrix design(rows, 1 + m * (lags_of_x + 1));
  design.col(0).setOnes();
  for (int l = 0; l <= lags_of_x; ++l) design.block(0, 1 + l * m, rows, m) = x.values.middleRows(lags_of_x - l, rows);
  TimeSeriesMatrix out;
  out.names = y.names;
  out.values = least_squares(design, y.values.bottomRows(rows), max_condition).residuals;
  if (!y.dates.empty()) out.dates.assign(y.dates.begin() + lags_of_x, y.dates.end());
  return out;
}

}  // namespace dsvar
