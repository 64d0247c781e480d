#include "doctest.h"

#include <dsvar/ica.hpp>
#include <dsvar/rng.hpp>
#include <dsvar/svar_model.hpp>
#include <dsvar/var_estimation.hpp>

#include <cmath>

using namespace dsvar;

namespace {

Matrix random_matrix(Rng& rng, Eigen::Index n) {
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rng.normal();
  return m;
}

Matrix perm_scale(Rng& rng, Eigen::Index n) {
  const auto p = rng.permutation(static_cast<int>(n));
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.2, 5.0);
    m(i, p[static_cast<std::size_t>(i)]) = s;
  }
  return m;
}

}  // namespace

TEST_CASE("Givens product is orthogonal and matches explicit rotations") {
  OrthogonalParam param{{0.3, -1.2, 2.0}};
  const Matrix o = rotation_from_angles(param, 3);
  CHECK((o * o.transpose() - Matrix::Identity(3, 3)).norm() < 1e-14);
  CHECK(o.determinant() == doctest::Approx(1.0));
  const auto g = [](int i, int j, double a) {
    Matrix m = Matrix::Identity(3, 3);
    m(i, i) = std::cos(a);
    m(j, j) = std::cos(a);
    m(i, j) = -std::sin(a);
    m(j, i) = std::sin(a);
    return m;
  };
  const Matrix explicit_product = g(0, 1, 0.3) * g(0, 2, -1.2) * g(1, 2, 2.0);
  CHECK((o - explicit_product).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(angle_count(4) == 6);
}

TEST_CASE("omega normalization invariants") {
  Rng rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    const Matrix w = random_matrix(rng, 4);
    const Matrix o = omega_normalize(w);
    for (Eigen::Index i = 0; i < 4; ++i) {
      CHECK(o.row(i).norm() == doctest::Approx(1.0).epsilon(1e-14));
      Eigen::Index arg = 0;
      o.row(i).cwiseAbs().maxCoeff(&arg);
      CHECK(o(i, arg) > 0.0);
      if (i > 0) CHECK(lexicographic_less(o.row(i - 1).transpose(), o.row(i).transpose()));
    }
    // Representative of the class {D P W}.
    const Matrix other = omega_normalize(perm_scale(rng, 4) * w);
    CHECK((other - o).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("amari distance worked example and invariance") {
  Matrix a0(2, 2);
  a0 << 1, 1, 0, 1;
  CHECK(amari_distance(a0, Matrix::Identity(2, 2)) == doctest::Approx(0.5).epsilon(1e-15));
  Rng rng(4);
  for (int rep = 0; rep < 50; ++rep) {
    const Matrix a = random_matrix(rng, 3);
    CHECK(amari_distance(a, a) < 1e-12);
    CHECK(amari_distance(perm_scale(rng, 3) * a, a) < 1e-10);
    const Matrix b = random_matrix(rng, 3);
    // Signed permutations of either argument only permute or flip entries of r.
    Matrix sp = perm_scale(rng, 3);
    sp = sp.array().sign().matrix();
    CHECK(amari_distance(sp * a, b) == doctest::Approx(amari_distance(a, b)).epsilon(1e-10));
    CHECK(amari_distance(a, sp * b) == doctest::Approx(amari_distance(a, b)).epsilon(1e-10));
    CHECK(amari_distance(a, b) >= 0.0);
  }
  CHECK_THROWS(amari_distance(Matrix::Identity(2, 2), Matrix::Zero(2, 2)));
}

TEST_CASE("column matching undoes permutation and sign") {
  Rng rng(5);
  const Matrix b = random_matrix(rng, 3);
  Matrix shuffled = permute_cols(b, {2, 0, 1});
  shuffled.col(1) *= -1.0;
  CHECK((match_columns(shuffled, b) - b).norm() < 1e-14);
}

TEST_CASE("ICA recovers the mixing of independent non-Gaussian shocks") {
  const SvarModel m = design_model(MixingDesign::LowerTriangular, NoiseDesign::HeavyLight);
  const auto sim = simulate(m, 800, 100, 12);
  const VarFit fit = fit_var(sim.y, 1);
  OptimizerSettings opt;
  opt.restarts = 2;
  opt.seed = 9;
  const IcaResult r = estimate_unmixing(fit.residuals, WhitenerVariant::choleski(), {}, opt);
  CHECK(amari_distance_abs(match_columns(r.B_omega, m.mixing), m.mixing) < 0.15);
  CHECK((r.W_omega * r.B_omega - Matrix::Identity(3, 3)).norm() < 1e-10);
  CHECK((r.W_hat * r.B_hat - Matrix::Identity(3, 3)).norm() < 1e-10);
  CHECK(r.kurtosis(0) >= r.kurtosis(1));
  CHECK(r.kurtosis(1) >= r.kurtosis(2));
  CHECK(r.objective_value <= r.report.start_objective);
  const Matrix cov = sample_covariance(r.shocks_hat);
  CHECK((cov.diagonal().array() - 1.0).abs().maxCoeff() < 1e-10);
  // The heavy shock is labelled first.
  CHECK(std::abs(r.B_omega(0, 0)) > 0.9);
}

TEST_CASE("ICA is deterministic and thread invariant") {
  const SvarModel m = design_model(MixingDesign::NotLowerTriangular, NoiseDesign::LightLight);
  const Matrix e = fit_var(simulate(m, 400, 100, 13).y, 1).residuals;
  OptimizerSettings one;
  one.restarts = 3;
  one.seed = 77;
  OptimizerSettings many = one;
  many.threads = 3;
  const IcaResult a = estimate_unmixing(e, WhitenerVariant::covariance_svd(), {}, one);
  const IcaResult b = estimate_unmixing(e, WhitenerVariant::covariance_svd(), {}, many);
  CHECK(a.W_omega == b.W_omega);
  CHECK(a.report.best_restart == b.report.best_restart);
}

TEST_CASE("ICA input checks") {
  CHECK_THROWS_AS(estimate_unmixing(Matrix::Random(20, 3), WhitenerVariant::choleski()), ParameterError);
  OptimizerSettings bad;
  bad.restarts = 0;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
}

TEST_CASE("sign rule flips the disaster shock") {
  const SvarModel m = design_model(MixingDesign::LowerTriangular, NoiseDesign::HeavyLight);
  const Matrix e = fit_var(simulate(m, 400, 100, 14).y, 1).residuals;
  const IcaResult r = estimate_unmixing(e, WhitenerVariant::choleski());
  const LabeledShock neg = label_disaster_shock(r, SignRule::impact_negative(1));
  CHECK(neg.index == 0);
  CHECK(neg.result.B_hat(1, 0) < 0.0);
  CHECK((neg.result.W_hat * neg.result.B_hat - Matrix::Identity(3, 3)).norm() < 1e-10);
  CHECK((neg.result.shocks_hat.col(0) - e * neg.result.W_hat.row(0).transpose()).norm() < 1e-8);
  const LabeledShock pos = label_disaster_shock(r, parse_sign_rule("pos:2"));
  CHECK(pos.result.B_hat(1, 0) > 0.0);
  IcaResult flat = r;
  flat.B_hat(2, 0) = 0.0;
  CHECK_THROWS_AS(label_disaster_shock(flat, SignRule::impact_positive(2)), AmbiguityError);
  CHECK_THROWS_AS(parse_sign_rule("up:1"), ParameterError);
}
