#pragma once

#include "dsvar/common.hpp"
#include "dsvar/distance_covariance.hpp"
#include "dsvar/ica.hpp"
#include "dsvar/svar_model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dsvar {

struct GridCell {
  MixingDesign design = MixingDesign::NotLowerTriangular;
  NoiseDesign noise = NoiseDesign::HeavyLight;
  std::string label() const;
};

/// The reference simulation grid: A fixed, four (mixing, noise) cells.
struct ExperimentGrid {
  enum class Mode {
    Full,       ///< permutation tests, Amari distances and mean estimates
    MeansOnly,  ///< only mean A_hat and B_hat from the (e_hat, chol) path
  };

  std::vector<GridCell> cells = default_cells();
  Eigen::Index T = 400;
  Eigen::Index burn_in = 200;
  int reps = 200;
  int np = 199;
  int var_lags = 1;
  double alpha_for_hl = 1.1;
  std::uint64_t seed = 20240101;
  Mode mode = Mode::Full;
  int threads = 1;
  double max_failure_rate = 0.01;
  DistCovConfig dist_cov;
  OptimizerSettings optimizer = default_optimizer();

  static std::vector<GridCell> default_cells();
  /// One local search from the identity rotation of each whitened sample.
  static OptimizerSettings default_optimizer();
  void validate() const;
};

/// The four whitening variants: chol(e1,e2,e3), chol(e2,e3,e1), covariance SVD, data SVD.
std::vector<WhitenerVariant> grid_whiteners();

/// Column labels of the three panels.
std::vector<std::string> panel_a_columns();
std::vector<std::string> panel_b_columns();
std::vector<std::string> panel_c_columns();

struct CellReport {
  GridCell cell;
  int completed = 0;
  std::vector<std::uint64_t> failed_seeds;
  std::vector<std::string> failure_messages;
  std::vector<double> panel_a;  ///< fraction of p <= 0.1 per panel_a_columns()
  std::vector<double> panel_b;
  std::vector<double> panel_c;  ///< mean Amari(|B_hat|^T, |B|^T) per panel_c_columns()
  Matrix mean_a;                ///< mean VAR(1) slope estimate
  Matrix mean_b;                ///< mean B_hat (unit-norm W rows) from chol(e_hat), columns matched to the truth
  Matrix true_a;
  Matrix true_b;
};

struct MonteCarloReport {
  ExperimentGrid grid;
  std::vector<CellReport> cells;
  double runtime_seconds = 0.0;
};

/// Replication r of cell c uses child_seed(grid.seed, {c, r}); results are
/// folded in replication order. Failed replications are recorded and skipped;
/// a failure rate above grid.max_failure_rate throws SimulationError.
MonteCarloReport run_grid(const ExperimentGrid& grid);

/// One replication's contribution, exposed for re-running a single seed.
struct ReplicationResult {
  std::vector<double> p_a;  ///< p-values per panel_a_columns()
  std::vector<double> p_b;
  std::vector<double> amari;
  Matrix a_hat;
  Matrix b_hat;
};
ReplicationResult run_replication(const ExperimentGrid& grid, const GridCell& cell, std::uint64_t seed);

/// Write panelA.csv, panelB.csv, panelC.csv, meanA.csv, meanB.csv into `dir`.
std::vector<std::string> write_report(const MonteCarloReport& report, const std::string& dir);

struct KurtosisQuantileTable {
  std::vector<double> probabilities;  ///< 0.01, 0.025, 0.05, 0.10, 0.50, 0.90, 0.95, 0.975, 0.99
  std::vector<Eigen::Index> sample_sizes;
  Matrix quantiles;                   ///< one row per sample size
  double alpha = 1.0;
  Eigen::Index draws = 0;
};

/// Quantiles of T sum Z^4 / (sum Z^2)^2 over `draws` iid Pareto(alpha) samples of each length.
KurtosisQuantileTable kurtosis_quantile_table(const std::vector<Eigen::Index>& sample_sizes = {500, 1000},
                                              double alpha = 1.0, Eigen::Index draws = 10000,
                                              std::uint64_t seed = 0, int threads = 1);

void write_kurtosis_table(const KurtosisQuantileTable& table, const std::string& path);

/// Type-7 (linear interpolation) sample quantile.
double quantile(std::vector<double> values, double probability);

}  // namespace dsvar
