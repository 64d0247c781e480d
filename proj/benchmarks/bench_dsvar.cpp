#include <benchmark/benchmark.h>

#include <dsvar/distance_covariance.hpp>
#include <dsvar/ica.hpp>
#include <dsvar/independence_test.hpp>
#include <dsvar/rng.hpp>
#include <dsvar/svar_model.hpp>
#include <dsvar/var_estimation.hpp>

using namespace dsvar;

namespace {

Matrix draws(Eigen::Index t, Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(t, n);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = rng.student_t(5.0);
  return m;
}

void BM_DistCovQuadratic(benchmark::State& state) {
  const Matrix s = draws(state.range(0), 2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(dist_cov(s.col(0), s.col(1)));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DistCovQuadratic)->RangeMultiplier(2)->Range(128, 2048)->Complexity(benchmark::oNSquared);

void BM_DistCovFast(benchmark::State& state) {
  const Matrix s = draws(state.range(0), 2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(dist_cov_fast(s.col(0), s.col(1)));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DistCovFast)->RangeMultiplier(2)->Range(128, 8192)->Complexity(benchmark::oNLogN);

void BM_AggregateObjective(benchmark::State& state) {
  const Matrix s = draws(400, state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(aggregate_objective(s));
}
BENCHMARK(BM_AggregateObjective)->DenseRange(2, 5);

void BM_PermutationTest(benchmark::State& state) {
  const Matrix s = draws(400, 3, 3);
  for (auto _ : state) benchmark::DoNotOptimize(permutation_test(s, 99, {}, 4).p_value);
}
BENCHMARK(BM_PermutationTest)->Unit(benchmark::kMillisecond);

void BM_EstimateUnmixing(benchmark::State& state) {
  const SvarModel m = design_model(MixingDesign::LowerTriangular, NoiseDesign::HeavyLight);
  const Matrix e = fit_var(simulate(m, 400, 200, 5).y, 1).residuals;
  OptimizerSettings opt;
  opt.restarts = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_unmixing(e, WhitenerVariant::choleski(), {}, opt).objective_value);
}
BENCHMARK(BM_EstimateUnmixing)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
