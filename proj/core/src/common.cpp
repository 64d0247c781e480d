#include "dsvar/common.hpp"

#include <algorithm>

namespace dsvar {

TimeSeriesMatrix::TimeSeriesMatrix(Matrix v, std::vector<std::string> column_names)
    : values(std::move(v)), names(std::move(column_names)) {
  if (names.empty()) names = default_names(values.cols());
  if (static_cast<Eigen::Index>(names.size()) != values.cols())
    throw ParameterError("TimeSeriesMatrix: " + std::to_string(names.size()) +
                         " names for " + std::to_string(values.cols()) + " columns");
}

std::vector<std::string> TimeSeriesMatrix::default_names(Eigen::Index n, const std::string& prefix) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) out.push_back(prefix + std::to_string(j + 1));
  return out;
}

Matrix demean(const Eigen::Ref<const Matrix>& x) {
  return x.rowwise() - x.colwise().mean();
}

Matrix sample_covariance(const Eigen::Ref<const Matrix>& x) {
  if (x.rows() < 1) throw DegenerateInputError("sample_covariance: empty input");
  const Matrix centered = demean(x);
  Matrix cov = (centered.transpose() * centered) / static_cast<double>(x.rows());
  return 0.5 * (cov + cov.transpose());
}

Matrix permute_rows(const Eigen::Ref<const Matrix>& m, const std::vector<int>& order) {
  Matrix out(static_cast<Eigen::Index>(order.size()), m.cols());
  for (std::size_t k = 0; k < order.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = m.row(order[k]);
  return out;
}

Matrix permute_cols(const Eigen::Ref<const Matrix>& m, const std::vector<int>& order) {
  Matrix out(m.rows(), static_cast<Eigen::Index>(order.size()));
  for (std::size_t k = 0; k < order.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = m.col(order[k]);
  return out;
}

bool is_permutation_of(const std::vector<int>& order, int n) {
  if (static_cast<int>(order.size()) != n) return false;
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < n; ++i)
    if (sorted[static_cast<std::size_t>(i)] != i) return false;
  return true;
}

}  // namespace dsvar
