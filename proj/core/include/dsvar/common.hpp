#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsvar {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or infeasible parameters supplied by the caller.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Input is numerically degenerate (constant column, zero row sum, ...).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Least-squares design is singular or too badly conditioned.
class EstimationError : public Error {
 public:
  explicit EstimationError(const std::string& what, double condition_number = 0.0)
      : Error(what), condition_number_(condition_number) {}
  double condition_number() const noexcept { return condition_number_; }

 private:
  double condition_number_;
};

/// A simulated path overflowed.
class SimulationError : public Error {
 public:
  SimulationError(const std::string& what, std::size_t t) : Error(what), t_(t) {}
  std::size_t offending_t() const noexcept { return t_; }

 private:
  std::size_t t_;
};

/// Covariance matrix is not positive definite.
class NotPositiveDefiniteError : public Error {
 public:
  NotPositiveDefiniteError(const std::string& what, double smallest_eigenvalue)
      : Error(what), smallest_eigenvalue_(smallest_eigenvalue) {}
  double smallest_eigenvalue() const noexcept { return smallest_eigenvalue_; }

 private:
  double smallest_eigenvalue_;
};

/// A sign or scale normalization has no well-defined answer.
class AmbiguityError : public Error {
 public:
  using Error::Error;
};

/// A provably nonnegative quantity came out clearly negative.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
      : Error(what), line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// T x n block of observations, one named column per variable.
///
/// Row t is the observation at time t. `dates` is optional metadata carried
/// through from input files and never used in computation.
struct TimeSeriesMatrix {
  Matrix values;
  std::vector<std::string> names;
  std::vector<std::string> dates;

  TimeSeriesMatrix() = default;
  explicit TimeSeriesMatrix(Matrix v, std::vector<std::string> column_names = {});

  Eigen::Index length() const noexcept { return values.rows(); }
  Eigen::Index dimension() const noexcept { return values.cols(); }

  /// Names default to y1..yn when not supplied.
  static std::vector<std::string> default_names(Eigen::Index n, const std::string& prefix = "y");
};

/// Sample covariance with divisor T (rows are observations, demeaned).
Matrix sample_covariance(const Eigen::Ref<const Matrix>& x);

/// Column-wise demeaning.
Matrix demean(const Eigen::Ref<const Matrix>& x);

/// Rows of `m` rearranged so that row k of the result is row order[k] of m.
Matrix permute_rows(const Eigen::Ref<const Matrix>& m, const std::vector<int>& order);

/// Columns of `m` rearranged so that column k of the result is column order[k] of m.
Matrix permute_cols(const Eigen::Ref<const Matrix>& m, const std::vector<int>& order);

/// True when `order` is a permutation of 0..n-1.
bool is_permutation_of(const std::vector<int>& order, int n);

}  // namespace dsvar
