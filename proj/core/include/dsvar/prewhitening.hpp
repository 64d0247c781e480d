#pragma once

#include "dsvar/common.hpp"

#include <string>
#include <vector>

namespace dsvar {

/// How second-moment correlation is removed before ICA.
struct WhitenerVariant {
  enum class Kind { CholeskiOrdered, CovarianceSvd, DataSvd };
  Kind kind = Kind::CholeskiOrdered;
  std::vector<int> ordering;  ///< CholeskiOrdered only; 0-based, empty means natural order

  static WhitenerVariant choleski(std::vector<int> order = {}) { return {Kind::CholeskiOrdered, std::move(order)}; }
  static WhitenerVariant covariance_svd() { return {Kind::CovarianceSvd, {}}; }
  static WhitenerVariant data_svd() { return {Kind::DataSvd, {}}; }
};

/// Parses "chol", "chol:2,3,1" (1-based), "svd" or "datasvd".
WhitenerVariant parse_whitener(const std::string& text);
std::string to_string(const WhitenerVariant& variant);

/// factor * factor^T equals the sample covariance; whitened = residuals * factor^-T.
///
/// For CholeskiOrdered the factor is lower triangular after permuting rows and
/// columns by the ordering, with a positive diagonal. Whitened columns stay in
/// the original variable positions.
struct Whitener {
  WhitenerVariant variant;
  Matrix factor;
  Matrix inverse_factor;
};

struct Whitened {
  Matrix data;
  Whitener whitener;
};

/// Throws NotPositiveDefiniteError (with the smallest eigenvalue) when the
/// sample covariance is not positive definite.
Whitened whiten(const Eigen::Ref<const Matrix>& residuals, const WhitenerVariant& variant);

/// Choleski factor F of `cov` (F F^T = cov) with variables taken in `ordering`.
///
/// Permuting rows and columns of F by the ordering gives a lower-triangular
/// matrix with positive diagonal; column j is the shock whose own variable is j.
Matrix choleski_factor(const Eigen::Ref<const Matrix>& cov, const std::vector<int>& ordering = {});

/// Columns sorted by descending sample kurtosis, ties by original index.
std::vector<int> kurtosis_order(const Eigen::Ref<const Matrix>& residuals);

/// Per-column demeaned sample kurtosis.
Vector column_kurtosis(const Eigen::Ref<const Matrix>& x);

/// c_T = sum e_1 e_2 / sum e_1^2 for the first two columns.
double choleski_loading_ratio(const Eigen::Ref<const Matrix>& residuals);

}  // namespace dsvar
