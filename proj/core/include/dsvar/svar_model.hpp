#pragma once

#include "dsvar/common.hpp"
#include "dsvar/distributions.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace dsvar {

/// Triangular-array damping of the heavy shock's cross-equation effects.
///
/// The (i, 1) entries (i >= 2) of every lag matrix and of the mixing matrix
/// hold the local coefficients a_i1 and b_i1; effective values are divided by
/// T^theta with theta = 1/alpha - 1/2.
struct HeavyLightScaling {
  double alpha = 1.5;
  double theta() const noexcept { return 1.0 / alpha - 0.5; }
};

/// Y_t = A_1 Y_{t-1} + ... + A_p Y_{t-p} + B u_t with independent shocks u.
struct SvarModel {
  std::vector<Matrix> lag_matrices;
  Matrix mixing;
  std::vector<ShockSpec> shocks;  ///< component 1 is the heavy-tailed one, when present
  std::optional<HeavyLightScaling> hl;
  std::vector<std::string> names;

  int lag_order() const noexcept { return static_cast<int>(lag_matrices.size()); }
  Eigen::Index dimension() const noexcept { return mixing.rows(); }
};

struct ModelLimits {
  double max_spectral_radius = 1.0 - 1e-9;
  double max_mixing_condition = 1e10;
};

/// Throws ParameterError naming the violated invariant.
void validate(const SvarModel& model, const ModelLimits& limits = {});

/// p*n x p*n companion matrix of the lag polynomial.
Matrix companion_matrix(const std::vector<Matrix>& lag_matrices);
double spectral_radius(const std::vector<Matrix>& lag_matrices);

struct EffectiveMatrices {
  std::vector<Matrix> lag_matrices;
  Matrix mixing;
};

/// Lag and mixing matrices at sample size T (verbatim when hl is absent).
EffectiveMatrices effective_matrices(const SvarModel& model, Eigen::Index T);

struct SimulationResult {
  TimeSeriesMatrix y;
  TimeSeriesMatrix shocks;
};

/// Simulate T observations after discarding `burn_in` points from a zero start.
///
/// HL scaling is evaluated at the terminal T. Shock component j is drawn from
/// child_seed(seed, j), so adding components never changes earlier ones.
SimulationResult simulate(const SvarModel& model, Eigen::Index T, Eigen::Index burn_in,
                          std::uint64_t seed);

struct Normalized {
  Matrix unmixing;
  Matrix mixing;
};

/// Divide each row of W_init by its row sum; B = W^-1.
Normalized normalize_w_rows_sum_one(const Eigen::Ref<const Matrix>& w_init);

/// Divide each row of W_init by its Euclidean norm; B = W^-1.
///
/// This reproduces the "True B" matrices of the reference simulation design.
Normalized normalize_w_rows_unit_norm(const Eigen::Ref<const Matrix>& w_init);

/// Reference simulation design (n = 3, p = 1).
enum class MixingDesign { NotLowerTriangular, LowerTriangular };
enum class NoiseDesign { HeavyLight, LightLight };

Matrix design_lag_matrix();
Matrix design_initial_mixing(MixingDesign design);
Matrix design_initial_unmixing(MixingDesign design);
Matrix design_mixing(MixingDesign design);
std::vector<ShockSpec> design_shocks(NoiseDesign noise, double heavy_alpha = 1.1);
SvarModel design_model(MixingDesign design, NoiseDesign noise, double heavy_alpha = 1.1);

std::string to_string(MixingDesign design);
std::string to_string(NoiseDesign noise);

}  // namespace dsvar
