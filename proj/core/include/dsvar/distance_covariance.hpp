#pragma once

#include "dsvar/common.hpp"

namespace dsvar {

/// Exponent of the Szekely weight |s|^-(beta+m) |t|^-(beta+n).
///
/// beta = 1 needs finite first moments; pick beta < 1 for data whose mean may
/// not exist.
struct DistCovConfig {
  double beta = 1.0;
  void validate() const;
};

/// Empirical distance covariance of the rows of X (T x m) and Y (T x n).
///
///   (1/T^2) sum_ij a_ij b_ij + (1/T^2 sum_ij a_ij)(1/T^2 sum_ij b_ij)
///     - (2/T^3) sum_ijk a_ij b_ik,     a_ij = |X_i - X_j|^beta, b_ij likewise,
///
/// evaluated in O(T^2) through row sums. Tiny negative round-off is clamped to
/// zero; a clearly negative value throws ConsistencyError.
double dist_cov(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Matrix>& y, const DistCovConfig& config = {});

/// Same statistic for two scalar series with beta = 1 in O(T log T).
///
/// Uses sorted prefix sums for the row sums and a Fenwick tree over y-ranks
/// for sum_ij |x_i - x_j| |y_i - y_j|. Falls back to dist_cov otherwise.
double dist_cov_fast(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Matrix>& y,
                     const DistCovConfig& config = {});

/// sum_{k=1}^{n-1} dist_cov(S_k, S_{k+1:n}); zero iff the columns are mutually
/// independent (in population).
double aggregate_objective(const Eigen::Ref<const Matrix>& s, const DistCovConfig& config = {});

namespace detail {

/// Combine the three sums of the V-statistic and apply the clamp.
double combine_terms(long double sum_ab, long double sum_a, long double sum_b, long double sum_ra_rb, double T);

/// Row sums r_i = sum_j |x_i - x_j| for a scalar series, O(T log T).
Vector absolute_deviation_row_sums(const Eigen::Ref<const Vector>& x);

}  // namespace detail

}  // namespace dsvar
