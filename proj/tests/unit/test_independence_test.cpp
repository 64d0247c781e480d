#include "doctest.h"

#include <dsvar/independence_test.hpp>
#include <dsvar/rng.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

using namespace dsvar;

namespace {

Matrix gaussian(std::uint64_t seed, Eigen::Index t, Eigen::Index n) {
  Rng rng(seed);
  Matrix m(t, n);
  for (Eigen::Index i = 0; i < t; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rng.normal();
  return m;
}

}  // namespace

TEST_CASE("p-value counts permuted statistics at or above the observed one") {
  const Matrix s = gaussian(1, 100, 3);
  const auto r = permutation_test(s, 49, {}, 5);
  REQUIRE(r.permuted_statistics.size() == 49);
  const auto k = std::count_if(r.permuted_statistics.begin(), r.permuted_statistics.end(),
                               [&](double v) { return v >= r.statistic; });
  CHECK(r.p_value == doctest::Approx((static_cast<double>(k) + 1.0) / 50.0));
  CHECK(r.statistic == doctest::Approx(aggregate_objective(s)));
  CHECK(r.p_value > 0.0);
  CHECK(r.p_value <= 1.0);
}

TEST_CASE("permutation test is reproducible across thread counts") {
  const Matrix s = gaussian(2, 80, 3);
  const auto a = permutation_test(s, 30, {}, 11, 1);
  const auto b = permutation_test(s, 30, {}, 11, 3);
  CHECK(a.permuted_statistics == b.permuted_statistics);
  CHECK(a.p_value == b.p_value);
  const auto c = permutation_test(s, 30, {}, 12, 1);
  CHECK(a.permuted_statistics != c.permuted_statistics);
}

TEST_CASE("dependent columns are rejected") {
  Matrix s = gaussian(3, 200, 3);
  s.col(1) = s.col(0).array().square() + 0.1 * s.col(1).array();
  CHECK(permutation_test(s, 99, {}, 4).p_value <= 0.02);
}

TEST_CASE("battery derives one seed per entry") {
  const std::vector<LabeledSeries> series{{"a", gaussian(4, 60, 2)}, {"b", gaussian(5, 60, 3)}};
  const auto battery = test_battery(series, 19, {}, 7);
  REQUIRE(battery.size() == 2);
  CHECK(battery[1].label == "b");
  CHECK(battery[1].result.seed == child_seed(7, 1));
  CHECK(battery[1].result.p_value == permutation_test(series[1].values, 19, {}, child_seed(7, 1)).p_value);
}

TEST_CASE("input checks") {
  CHECK_THROWS_AS(permutation_test(gaussian(6, 10, 3), 9), ParameterError);
  CHECK_THROWS_AS(permutation_test(gaussian(6, 50, 1), 9), ParameterError);
  Matrix bad = gaussian(6, 50, 2);
  bad(3, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS(permutation_test(bad, 9));
  CHECK_THROWS_AS(permutation_test(gaussian(6, 50, 2), 0), ParameterError);
  CHECK(squared(gaussian(6, 30, 2))(4, 1) == doctest::Approx(std::pow(gaussian(6, 30, 2)(4, 1), 2)));
}
