#pragma once

#include "dsvar/common.hpp"
#include "dsvar/ica.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dsvar {

enum class IrfEstimator { VarImplied, CholeskiImplied, LocalProjection };
std::string to_string(IrfEstimator estimator);

/// Responses of every variable to one shock at horizons 0..H.
struct IrfTable {
  IrfEstimator estimator = IrfEstimator::VarImplied;
  int shock = 0;
  Matrix responses;           ///< (H + 1) x n
  std::optional<Matrix> se;   ///< local projection only; conventional OLS, inference is non-standard
  double shock_scale = 1.0;   ///< size of the impulse in units of the identified shock
  std::vector<std::string> warnings;

  int horizon() const noexcept { return static_cast<int>(responses.rows()) - 1; }
};

/// Column `shock` of Psi_h = Phi_h B for h = 0..H.
IrfTable irf_var_implied(const std::vector<Matrix>& lag_matrices, const Eigen::Ref<const Matrix>& mixing, int shock,
                         int horizon = 6);

/// Same recursion with B replaced by the Choleski factor of `residual_cov` in
/// `ordering` (0-based; empty = natural). `shock` names the variable whose own
/// shock is traced.
IrfTable irf_choleski(const std::vector<Matrix>& lag_matrices, const Eigen::Ref<const Matrix>& residual_cov,
                      const std::vector<int>& ordering, int shock, int horizon = 6);

struct LocalProjectionOptions {
  int lags = 1;                 ///< lags of every Y variable
  bool other_shocks = true;     ///< include the remaining contemporaneous shocks
  bool constant = true;
  std::optional<Matrix> exog;   ///< extra controls, rows aligned with y
  double max_condition = 1e12;
};

/// For each h and variable i: OLS of Y_{t+h,i} on u_{t,shock} and the controls;
/// the coefficient on u_{t,shock} is the response.
///
/// `shocks` holds the last shocks.rows() observations of y (as VAR residuals
/// do). With the VAR's own shocks and lag order, the h = 0 coefficients equal
/// the mixing column.
IrfTable irf_local_projection(const Eigen::Ref<const Matrix>& y, const Eigen::Ref<const Matrix>& shocks, int shock,
                              int horizon = 6, const LocalProjectionOptions& options = {});

/// Multiply the impulse by `factor`: responses, standard errors and the
/// recorded shock size scale together.
IrfTable scale_irf(const IrfTable& table, double factor);

/// Rescale so the impact on `target` equals one; the shape is unchanged.
IrfTable unit_effect_rescale(const IrfTable& table, int target);

/// Multiply column `shock` of both B conventions by `factor` and divide the
/// matching W rows and shock series, leaving W B = I and the fit unchanged.
IcaResult scale_shock(const IcaResult& result, int shock, double factor);

struct RescaledIca {
  IcaResult result;
  double shock_size = 1.0;  ///< former B_hat(target, shock)
};

/// Unit effect normalization of B_hat: B(target, shock) becomes 1 and the
/// shock series is multiplied by the former impact.
RescaledIca unit_effect_rescale(const IcaResult& result, int target, int shock = 0);

}  // namespace dsvar
