#include "dsvar/prewhitening.hpp"

#include "dsvar/distributions.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace dsvar {

WhitenerVariant parse_whitener(const std::string& text) {
  if (text == "svd") return WhitenerVariant::covariance_svd();
  if (text == "datasvd") return WhitenerVariant::data_svd();
  if (text == "chol") return WhitenerVariant::choleski();
  if (text.rfind("chol:", 0) == 0) {
    std::vector<int> order;
    std::stringstream ss(text.substr(5));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        order.push_back(std::stoi(item) - 1);
      } catch (const std::exception&) {
        throw ParameterError("whitener: bad ordering entry '" + item + "'");
      }
    }
    if (!is_permutation_of(order, static_cast<int>(order.size())))
      throw ParameterError("whitener: '" + text + "' is not a permutation of 1..n");
    return WhitenerVariant::choleski(std::move(order));
  }
  throw ParameterError("whitener: expected chol, chol:i,j,..., svd or datasvd, got '" + text + "'");
}

std::string to_string(const WhitenerVariant& variant) {
  switch (variant.kind) {
    case WhitenerVariant::Kind::CovarianceSvd: return "svd";
    case WhitenerVariant::Kind::DataSvd: return "datasvd";
    case WhitenerVariant::Kind::CholeskiOrdered: break;
  }
  if (variant.ordering.empty()) return "chol";
  std::string s = "chol:";
  for (std::size_t i = 0; i < variant.ordering.size(); ++i)
    s += (i ? "," : "") + std::to_string(variant.ordering[i] + 1);
  return s;
}

namespace {

void require_positive_definite(const Matrix& cov) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(cov, Eigen::EigenvaluesOnly);
  const double smallest = es.eigenvalues().minCoeff();
  const double largest = es.eigenvalues().maxCoeff();
  if (!(smallest > 1e-14 * std::max(largest, 1e-300)))
    throw NotPositiveDefiniteError(
        "covariance is not positive definite (smallest eigenvalue " + std::to_string(smallest) + ")",
        smallest);
}

}  // namespace

Matrix choleski_factor(const Eigen::Ref<const Matrix>& cov, const std::vector<int>& ordering) {
  const Eigen::Index n = cov.rows();
  if (cov.cols() != n) throw ParameterError("choleski_factor: covariance must be square");
  std::vector<int> order = ordering;
  if (order.empty()) {
    order.resize(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
  }
  if (!is_permutation_of(order, static_cast<int>(n)))
    throw ParameterError("choleski_factor: ordering is not a permutation of the columns");
  require_positive_definite(cov);
  // Permutation matrix P with (P^T x)_k = x_{order[k]}.
  Matrix perm = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) perm(order[static_cast<std::size_t>(k)], k) = 1.0;
  const Matrix cov_ordered = perm.transpose() * cov * perm;
  Eigen::LLT<Matrix> llt(cov_ordered);
  if (llt.info() != Eigen::Success) throw NotPositiveDefiniteError("choleski_factor: factorization failed", 0.0);
  const Matrix lower = llt.matrixL();
  return perm * lower * perm.transpose();
}

Whitened whiten(const Eigen::Ref<const Matrix>& residuals, const WhitenerVariant& variant) {
  const Eigen::Index T = residuals.rows();
  const Eigen::Index n = residuals.cols();
  if (T <= n) throw DegenerateInputError("whiten: need more observations than variables");
  const Matrix cov = sample_covariance(residuals);
  require_positive_definite(cov);

  Whitener w;
  w.variant = variant;
  switch (variant.kind) {
    case WhitenerVariant::Kind::CholeskiOrdered:
      w.factor = choleski_factor(cov, variant.ordering);
      break;
    case WhitenerVariant::Kind::CovarianceSvd: {
      Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
      w.factor = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
      break;
    }
    case WhitenerVariant::Kind::DataSvd: {
      const Matrix centered = demean(residuals);
      Eigen::JacobiSVD<Matrix> svd(centered, Eigen::ComputeThinV);
      w.factor = svd.matrixV() * svd.singularValues().asDiagonal() / std::sqrt(static_cast<double>(T));
      break;
    }
  }
  w.inverse_factor = w.factor.inverse();
  Whitened out;
  out.data = residuals * w.inverse_factor.transpose();
  out.whitener = std::move(w);
  return out;
}

Vector column_kurtosis(const Eigen::Ref<const Matrix>& x) {
  Vector k(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) k[j] = sample_kurtosis(x.col(j));
  return k;
}

std::vector<int> kurtosis_order(const Eigen::Ref<const Matrix>& residuals) {
  const Vector k = column_kurtosis(residuals);
  std::vector<int> order(static_cast<std::size_t>(k.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return k[a] > k[b]; });
  return order;
}

double choleski_loading_ratio(const Eigen::Ref<const Matrix>& residuals) {
  if (residuals.cols() < 2) throw ParameterError("loading ratio: need two columns");
  const double den = residuals.col(0).squaredNorm();
  if (!(den > 0.0)) throw DegenerateInputError("loading ratio: first column is zero");
  return residuals.col(0).dot(residuals.col(1)) / den;
}

}  // namespace dsvar
