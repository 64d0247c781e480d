#include "dsvar/distance_covariance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

namespace dsvar {

void DistCovConfig::validate() const {
  if (!(beta > 0.0 && beta < 2.0)) throw ParameterError("distance covariance: beta must lie in (0, 2)");
}

namespace detail {

double combine_terms(long double sum_ab, long double sum_a, long double sum_b, long double sum_ra_rb, double T) {
  const long double t = T;
  const long double term1 = sum_ab / (t * t);
  const long double term2 = (sum_a / (t * t)) * (sum_b / (t * t));
  const long double term3 = sum_ra_rb / (t * t * t);
  const long double value = term1 + term2 - 2.0L * term3;
  if (value >= 0.0L) return static_cast<double>(value);
  const long double tolerance = 1e-12L * std::max<long double>(1.0L, term1 + term2);
  if (value >= -tolerance) return 0.0;
  throw ConsistencyError("distance covariance: negative value " + std::to_string(static_cast<double>(value)));
}

Vector absolute_deviation_row_sums(const Eigen::Ref<const Vector>& x) {
  const Eigen::Index T = x.size();
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(T));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return x[a] < x[b]; });
  long double total = 0.0L;
  for (Eigen::Index i = 0; i < T; ++i) total += x[i];
  Vector out(T);
  long double below = 0.0L;
  for (Eigen::Index k = 0; k < T; ++k) {
    const Eigen::Index i = idx[static_cast<std::size_t>(k)];
    const long double v = x[i];
    const long double above = total - below - v;
    out[i] = static_cast<double>(v * k - below + above - v * (T - 1 - k));
    below += v;
  }
  return out;
}

}  // namespace detail

namespace {

// out[k] = |m_i - m_{i+1+k}|^beta for the rows after i.
template <typename Out>
void distances_from(const Matrix& m, Eigen::Index i, double beta, Out& out) {
  const Eigen::Index len = out.size();
  if (m.cols() == 1) {
    out = (m.col(0).segment(i + 1, len).array() - m(i, 0)).abs();
    if (beta != 1.0) out = out.pow(beta);
    return;
  }
  out = (m.col(0).segment(i + 1, len).array() - m(i, 0)).square();
  for (Eigen::Index c = 1; c < m.cols(); ++c) out += (m.col(c).segment(i + 1, len).array() - m(i, c)).square();
  out = (beta == 1.0) ? out.sqrt().eval() : out.pow(0.5 * beta).eval();
}

// Fenwick tree with four summed channels.
class Fenwick4 {
 public:
  explicit Fenwick4(std::size_t n) : tree_(n + 1) {}
  void add(std::size_t pos, const std::array<double, 4>& v) {
    for (std::size_t i = pos + 1; i < tree_.size(); i += i & (~i + 1))
      for (int c = 0; c < 4; ++c) tree_[i][c] += v[c];
  }
  // Sum over positions [0, pos).
  std::array<double, 4> prefix(std::size_t pos) const {
    std::array<double, 4> s{0, 0, 0, 0};
    for (std::size_t i = pos; i > 0; i -= i & (~i + 1))
      for (int c = 0; c < 4; ++c) s[c] += tree_[i][c];
    return s;
  }

 private:
  std::vector<std::array<double, 4>> tree_;
};

}  // namespace

double dist_cov(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Matrix>& y, const DistCovConfig& config) {
  config.validate();
  if (x.rows() != y.rows()) throw ParameterError("dist_cov: X and Y must have the same number of rows");
  const Eigen::Index T = x.rows();
  if (T < 2) throw ParameterError("dist_cov: need at least two observations");
  if (x.cols() < 1 || y.cols() < 1) throw ParameterError("dist_cov: empty block");

  const Matrix xs = x;
  const Matrix ys = y;
  Eigen::ArrayXd ra = Eigen::ArrayXd::Zero(T), rb = Eigen::ArrayXd::Zero(T);
  Eigen::ArrayXd a(T), b(T);
  long double sum_ab = 0.0L;
  for (Eigen::Index i = 0; i + 1 < T; ++i) {
    const Eigen::Index m = T - i - 1;
    auto as = a.head(m);
    auto bs = b.head(m);
    distances_from(xs, i, config.beta, as);
    distances_from(ys, i, config.beta, bs);
    sum_ab += 2.0L * static_cast<long double>((as * bs).sum());
    ra[i] += as.sum();
    rb[i] += bs.sum();
    ra.segment(i + 1, m) += as;
    rb.segment(i + 1, m) += bs;
  }
  long double sum_a = 0.0L, sum_b = 0.0L, sum_rr = 0.0L;
  for (Eigen::Index i = 0; i < T; ++i) {
    sum_a += ra[i];
    sum_b += rb[i];
    sum_rr += static_cast<long double>(ra[i]) * rb[i];
  }
  return detail::combine_terms(sum_ab, sum_a, sum_b, sum_rr, static_cast<double>(T));
}

double dist_cov_fast(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Matrix>& y,
                     const DistCovConfig& config) {
  if (x.cols() != 1 || y.cols() != 1 || config.beta != 1.0 || x.rows() != y.rows()) return dist_cov(x, y, config);
  const Eigen::Index T = x.rows();
  if (T < 2) throw ParameterError("dist_cov: need at least two observations");

  // Centering leaves every |difference| unchanged and limits cancellation.
  const Vector xc = x.col(0).array() - x.col(0).mean();
  const Vector yc = y.col(0).array() - y.col(0).mean();

  const Vector ra = detail::absolute_deviation_row_sums(xc);
  const Vector rb = detail::absolute_deviation_row_sums(yc);

  std::vector<Eigen::Index> by_x(static_cast<std::size_t>(T));
  std::iota(by_x.begin(), by_x.end(), Eigen::Index{0});
  std::sort(by_x.begin(), by_x.end(), [&](Eigen::Index a, Eigen::Index b) { return xc[a] < xc[b]; });

  // Dense ranks of y; equal values share a rank so ties contribute nothing.
  std::vector<Eigen::Index> by_y(static_cast<std::size_t>(T));
  std::iota(by_y.begin(), by_y.end(), Eigen::Index{0});
  std::sort(by_y.begin(), by_y.end(), [&](Eigen::Index a, Eigen::Index b) { return yc[a] < yc[b]; });
  std::vector<std::size_t> rank(static_cast<std::size_t>(T));
  std::size_t r = 0;
  for (std::size_t k = 0; k < by_y.size(); ++k) {
    if (k > 0 && yc[by_y[k]] != yc[by_y[k - 1]]) ++r;
    rank[static_cast<std::size_t>(by_y[k])] = r;
  }

  Fenwick4 tree(r + 1);
  std::array<double, 4> seen{0, 0, 0, 0};
  long double cross = 0.0L;
  for (Eigen::Index j : by_x) {
    const double xj = xc[j];
    const double yj = yc[j];
    const std::size_t rj = rank[static_cast<std::size_t>(j)];
    const auto below = tree.prefix(rj);
    const auto upto = tree.prefix(rj + 1);
    std::array<double, 4> above;
    for (int c = 0; c < 4; ++c) above[c] = seen[c] - upto[c];
    // sum over earlier i of (x_j - x_i)(y_j - y_i) sign(y_j - y_i)
    const double lower = xj * yj * below[0] - xj * below[1] - yj * below[2] + below[3];
    const double higher = xj * yj * above[0] - xj * above[1] - yj * above[2] + above[3];
    cross += static_cast<long double>(lower) - higher;
    const std::array<double, 4> v{1.0, yj, xj, xj * yj};
    tree.add(rj, v);
    for (int c = 0; c < 4; ++c) seen[c] += v[c];
  }

  long double sum_a = 0.0L, sum_b = 0.0L, sum_rr = 0.0L;
  for (Eigen::Index i = 0; i < T; ++i) {
    sum_a += ra[i];
    sum_b += rb[i];
    sum_rr += static_cast<long double>(ra[i]) * rb[i];
  }
  return detail::combine_terms(2.0L * cross, sum_a, sum_b, sum_rr, static_cast<double>(T));
}

double aggregate_objective(const Eigen::Ref<const Matrix>& s, const DistCovConfig& config) {
  const Eigen::Index n = s.cols();
  if (n < 2) throw ParameterError("aggregate_objective: need at least two components");
  double total = 0.0;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const auto head = s.col(k);
    const auto rest = s.rightCols(n - k - 1);
    total += (rest.cols() == 1) ? dist_cov_fast(head, rest, config) : dist_cov(head, rest, config);
  }
  return total;
}

}  // namespace dsvar
