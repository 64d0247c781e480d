#include "doctest.h"

#include <dsvar/model_config.hpp>
#include <dsvar/svar_model.hpp>

#include <cmath>

using namespace dsvar;

namespace {

void check_close(const Matrix& a, const Matrix& b, double tol) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  CHECK((a - b).cwiseAbs().maxCoeff() < tol);
}

}  // namespace

TEST_CASE("reference mixing matrices match the published true B") {
  Matrix nlt(3, 3), lt(3, 3);
  nlt << 1.581, 2.121, 0, 1.581, 0.707, 0, 0, 0, 1;
  lt << 1.00, 0, 0, 0.75, 1.250, 0, 1.00, 0.208, 1.339;
  check_close(design_mixing(MixingDesign::NotLowerTriangular), nlt, 1e-3);
  check_close(design_mixing(MixingDesign::LowerTriangular), lt, 1e-3);
}

TEST_CASE("unit-norm normalization gives unit W rows") {
  const auto n = normalize_w_rows_unit_norm(design_initial_unmixing(MixingDesign::LowerTriangular));
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(n.unmixing.row(i).norm() == doctest::Approx(1.0));
  check_close(n.unmixing * n.mixing, Matrix::Identity(3, 3), 1e-12);
}

TEST_CASE("row-sum normalization") {
  Matrix w(2, 2);
  w << 2, 2, 1, 3;
  const auto n = normalize_w_rows_sum_one(w);
  CHECK(n.unmixing.row(0).sum() == doctest::Approx(1.0));
  CHECK(n.unmixing.row(1).sum() == doctest::Approx(1.0));
  Matrix zero_row(2, 2);
  zero_row << 1, -1, 0, 1;
  CHECK_THROWS_AS(normalize_w_rows_sum_one(zero_row), DegenerateInputError);
}

TEST_CASE("simulated data satisfy the VAR recursion") {
  const SvarModel m = design_model(MixingDesign::LowerTriangular, NoiseDesign::LightLight);
  const auto sim = simulate(m, 300, 50, 42);
  REQUIRE(sim.y.length() == 300);
  REQUIRE(sim.shocks.length() == 300);
  double worst = 0.0;
  for (Eigen::Index t = 1; t < 300; ++t) {
    const Vector pred = m.lag_matrices[0] * sim.y.values.row(t - 1).transpose() +
                        m.mixing * sim.shocks.values.row(t).transpose();
    worst = std::max(worst, (pred - sim.y.values.row(t).transpose()).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("simulation is reproducible and seed dependent") {
  const SvarModel m = design_model(MixingDesign::NotLowerTriangular, NoiseDesign::HeavyLight);
  const auto a = simulate(m, 100, 20, 5);
  const auto b = simulate(m, 100, 20, 5);
  const auto c = simulate(m, 100, 20, 6);
  CHECK(a.y.values == b.y.values);
  CHECK(a.y.values != c.y.values);
}

TEST_CASE("heavy-light damping scales the heavy column") {
  SvarModel m = design_model(MixingDesign::LowerTriangular, NoiseDesign::HeavyLight);
  m.hl = HeavyLightScaling{1.1};
  const auto eff = effective_matrices(m, 400);
  const double damp = std::pow(400.0, -(1.0 / 1.1 - 0.5));
  CHECK(eff.mixing(0, 0) == doctest::Approx(m.mixing(0, 0)));
  CHECK(eff.mixing(2, 0) == doctest::Approx(m.mixing(2, 0) * damp));
  CHECK(eff.lag_matrices[0](1, 0) == doctest::Approx(0.3 * damp));
  CHECK(eff.lag_matrices[0](1, 1) == doctest::Approx(0.6));
}

TEST_CASE("explosive or singular models are rejected") {
  SvarModel m = design_model(MixingDesign::LowerTriangular, NoiseDesign::LightLight);
  m.lag_matrices[0](0, 0) = 1.2;
  CHECK_THROWS_AS(validate(m), ParameterError);
  SvarModel s = design_model(MixingDesign::LowerTriangular, NoiseDesign::LightLight);
  s.mixing.row(2) = s.mixing.row(1);
  CHECK_THROWS(validate(s));
}

TEST_CASE("companion spectral radius") {
  CHECK(spectral_radius({design_lag_matrix()}) == doctest::Approx(0.8));
}

TEST_CASE("json model round trip") {
  const SvarModel m = design_model(MixingDesign::NotLowerTriangular, NoiseDesign::LightLight);
  const SvarModel r = model_from_json(model_to_json(m));
  check_close(r.mixing, m.mixing, 1e-14);
  check_close(r.lag_matrices[0], m.lag_matrices[0], 1e-14);
  CHECK(r.shocks.size() == 3);
  const SvarModel d = model_from_json(R"({"design": "LT", "noise": "HL"})");
  check_close(d.mixing, design_mixing(MixingDesign::LowerTriangular), 1e-14);
  CHECK_THROWS(model_from_json(R"({"p": 1, "n": 2})"));
}
