#pragma once

#include "dsvar/common.hpp"

#include <optional>
#include <vector>

namespace dsvar {

struct LeastSquares {
  Matrix coefficients;  ///< k x m, one column per dependent variable
  Matrix residuals;     ///< T x m
  double condition_number = 0.0;
};

/// Column-wise OLS of y on x via column-pivoted QR.
///
/// Throws EstimationError (carrying the condition number of x) when x is
/// rank deficient or its condition number exceeds `max_condition`.
LeastSquares least_squares(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Matrix>& y,
                           double max_condition = 1e12);

struct VarOptions {
  bool include_constant = true;
  double max_condition = 1e12;
};

struct VarFit {
  int p = 0;
  std::vector<Matrix> lag_matrices;      ///< A_1..A_p
  Matrix exog_coeffs;                    ///< n x q: constant (if any) then exogenous columns
  std::vector<std::string> exog_names;
  Matrix residuals;                      ///< (T - p) x n, row k is observation k + p
  Matrix residual_cov;                   ///< divisor T - p
  Matrix sum_lags;                       ///< A(1) = sum_h A_h
  double condition_number = 0.0;
  std::vector<std::string> names;
};

/// Equation-by-equation least squares of a VAR(p), p >= 0.
///
/// `exog` (same T as y) enters contemporaneously; its first p rows are
/// dropped along with y's.
VarFit fit_var(const TimeSeriesMatrix& y, int p, const std::optional<TimeSeriesMatrix>& exog = std::nullopt,
               const VarOptions& options = {});

/// Psi_0..Psi_H with Phi_h = sum_{j <= min(h,p)} A_j Phi_{h-j} and Psi_h = Phi_h B.
std::vector<Matrix> ma_coefficients(const std::vector<Matrix>& lag_matrices, const Eigen::Ref<const Matrix>& mixing,
                                    int horizon);

/// Residuals of each column on a constant and cos(j pi (t - 1/2) / T), j = 1..q.
TimeSeriesMatrix low_frequency_detrend(const TimeSeriesMatrix& y, int q_cosines);

/// Residuals of each column of y on a constant and X_t, ..., X_{t-L}.
///
/// The first L observations are consumed by the lags.
TimeSeriesMatrix purge_exogenous(const TimeSeriesMatrix& y, const TimeSeriesMatrix& x, int lags_of_x,
                                 double max_condition = 1e12);

}  // namespace dsvar
