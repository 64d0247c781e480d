#include "dsvar/montecarlo.hpp"

#include "dsvar/csv_io.hpp"
#include "dsvar/distributions.hpp"
#include "dsvar/independence_test.hpp"
#include "dsvar/parallel.hpp"
#include "dsvar/prewhitening.hpp"
#include "dsvar/rng.hpp"
#include "dsvar/var_estimation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>

namespace dsvar {

std::string GridCell::label() const { return to_string(design) + "-" + to_string(noise); }

std::vector<GridCell> ExperimentGrid::default_cells() {
  return {{MixingDesign::NotLowerTriangular, NoiseDesign::HeavyLight},
          {MixingDesign::LowerTriangular, NoiseDesign::HeavyLight},
          {MixingDesign::NotLowerTriangular, NoiseDesign::LightLight},
          {MixingDesign::LowerTriangular, NoiseDesign::LightLight}};
}

OptimizerSettings ExperimentGrid::default_optimizer() {
  OptimizerSettings s;
  s.restarts = 1;
  return s;
}

void ExperimentGrid::validate() const {
  if (cells.empty()) throw ParameterError("grid: no cells");
  if (T < 50) throw ParameterError("grid: T must be >= 50");
  if (burn_in < 0) throw ParameterError("grid: burn_in must be >= 0");
  if (reps < 1) throw ParameterError("grid: reps must be >= 1");
  if (np < 1) throw ParameterError("grid: NP must be >= 1");
  if (var_lags < 1) throw ParameterError("grid: var_lags must be >= 1");
  if (!(alpha_for_hl > 0.0 && alpha_for_hl <= 2.0)) throw ParameterError("grid: alpha_for_hl must lie in (0, 2]");
  if (threads < 1) throw ParameterError("grid: threads must be >= 1");
  if (!(max_failure_rate >= 0.0 && max_failure_rate <= 1.0))
    throw ParameterError("grid: max_failure_rate must lie in [0, 1]");
  dist_cov.validate();
  optimizer.validate();
}

std::vector<WhitenerVariant> grid_whiteners() {
  return {WhitenerVariant::choleski({0, 1, 2}), WhitenerVariant::choleski({1, 2, 0}),
          WhitenerVariant::covariance_svd(), WhitenerVariant::data_svd()};
}

std::vector<std::string> panel_a_columns() {
  return {"u", "u2", "e0", "et0", "et1", "et2", "et3", "u(et0)", "u(et1)", "u(et2)", "u(et3)"};
}
std::vector<std::string> panel_b_columns() {
  return {"eh0", "eh1", "eh2", "eh3", "u(eh0)", "u(eh1)", "u(eh2)", "u(eh3)"};
}
std::vector<std::string> panel_c_columns() {
  return {"B(et0)", "B(et1)", "B(et2)", "B(et3)", "B(eh0)", "B(eh1)", "B(eh2)", "B(eh3)"};
}

namespace {

constexpr double kRejectAt = 0.1;

// Whitened data with columns in the variant's ordering, as tested.
Matrix tested_whitened(const Whitened& w) {
  const auto& order = w.whitener.variant.ordering;
  if (w.whitener.variant.kind == WhitenerVariant::Kind::CholeskiOrdered && !order.empty())
    return permute_cols(w.data, order);
  return w.data;
}

struct ResidualPath {
  std::vector<double> p_whitened;
  std::vector<double> p_shocks;
  std::vector<double> amari;
  Matrix b_first;
};

ResidualPath analyse_residuals(const ExperimentGrid& grid, const Matrix& e, const Matrix& b_true, std::uint64_t seed,
                               std::uint64_t stream, bool tests) {
  ResidualPath out;
  const auto variants = grid_whiteners();
  for (std::size_t v = 0; v < variants.size(); ++v) {
    if (!tests && v > 0) break;
    OptimizerSettings opt = grid.optimizer;
    opt.seed = child_seed(seed, {stream, 10 + v});
    opt.threads = 1;
    const IcaResult ica = estimate_unmixing(e, variants[v], grid.dist_cov, opt);
    if (v == 0) out.b_first = match_columns(ica.B_omega, b_true);
    if (!tests) break;
    // Transposed so that r = (B^-1 B_hat)^T: invariant to the column permutation and scale of B_hat.
    out.amari.push_back(amari_distance_abs(ica.B_omega.transpose(), b_true.transpose()));
    const Whitened w = whiten(e, variants[v]);
    out.p_whitened.push_back(
        permutation_test(tested_whitened(w), grid.np, grid.dist_cov, child_seed(seed, {stream, 20 + v})).p_value);
    out.p_shocks.push_back(
        permutation_test(ica.shocks_hat, grid.np, grid.dist_cov, child_seed(seed, {stream, 30 + v})).p_value);
  }
  return out;
}

}  // namespace

ReplicationResult run_replication(const ExperimentGrid& grid, const GridCell& cell, std::uint64_t seed) {
  const SvarModel model = design_model(cell.design, cell.noise, grid.alpha_for_hl);
  const SimulationResult sim = simulate(model, grid.T, grid.burn_in, child_seed(seed, 0));
  const bool full = grid.mode == ExperimentGrid::Mode::Full;
  ReplicationResult out;

  if (full) {
    const Matrix& u = sim.shocks.values;
    const Matrix e = u * model.mixing.transpose();
    out.p_a.push_back(permutation_test(u, grid.np, grid.dist_cov, child_seed(seed, {1, 0})).p_value);
    out.p_a.push_back(permutation_test(squared(u), grid.np, grid.dist_cov, child_seed(seed, {1, 1})).p_value);
    out.p_a.push_back(permutation_test(e, grid.np, grid.dist_cov, child_seed(seed, {1, 2})).p_value);
    const ResidualPath observed = analyse_residuals(grid, e, model.mixing, seed, 2, true);
    out.p_a.insert(out.p_a.end(), observed.p_whitened.begin(), observed.p_whitened.end());
    out.p_a.insert(out.p_a.end(), observed.p_shocks.begin(), observed.p_shocks.end());
    out.amari = observed.amari;
  }

  const VarFit fit = fit_var(sim.y, grid.var_lags);
  out.a_hat = fit.lag_matrices.front();
  const ResidualPath estimated = analyse_residuals(grid, fit.residuals, model.mixing, seed, 3, full);
  out.b_hat = estimated.b_first;
  if (full) {
    out.p_b = estimated.p_whitened;
    out.p_b.insert(out.p_b.end(), estimated.p_shocks.begin(), estimated.p_shocks.end());
    out.amari.insert(out.amari.end(), estimated.amari.begin(), estimated.amari.end());
  }
  return out;
}

MonteCarloReport run_grid(const ExperimentGrid& grid) {
  grid.validate();
  const auto start = std::chrono::steady_clock::now();
  MonteCarloReport report;
  report.grid = grid;
  const std::size_t reps = static_cast<std::size_t>(grid.reps);
  const std::size_t total = grid.cells.size() * reps;

  struct Slot {
    bool ok = false;
    std::string error;
    ReplicationResult result;
  };
  std::vector<Slot> slots(total);
  parallel_for(total, grid.threads, [&](std::size_t k) {
    const std::size_t c = k / reps;
    const std::size_t r = k % reps;
    try {
      slots[k].result = run_replication(grid, grid.cells[c], child_seed(grid.seed, {c, r}));
      slots[k].ok = true;
    } catch (const Error& e) {
      slots[k].error = e.what();
    }
  });

  const bool full = grid.mode == ExperimentGrid::Mode::Full;
  for (std::size_t c = 0; c < grid.cells.size(); ++c) {
    CellReport cell;
    cell.cell = grid.cells[c];
    const SvarModel model = design_model(cell.cell.design, cell.cell.noise, grid.alpha_for_hl);
    cell.true_a = model.lag_matrices.front();
    cell.true_b = model.mixing;
    cell.mean_a = Matrix::Zero(3, 3);
    cell.mean_b = Matrix::Zero(3, 3);
    if (full) {
      cell.panel_a.assign(panel_a_columns().size(), 0.0);
      cell.panel_b.assign(panel_b_columns().size(), 0.0);
      cell.panel_c.assign(panel_c_columns().size(), 0.0);
    }
    for (std::size_t r = 0; r < reps; ++r) {
      const Slot& s = slots[c * reps + r];
      if (!s.ok) {
        cell.failed_seeds.push_back(child_seed(grid.seed, {c, r}));
        cell.failure_messages.push_back(s.error);
        continue;
      }
      ++cell.completed;
      cell.mean_a += s.result.a_hat;
      cell.mean_b += s.result.b_hat;
      if (!full) continue;
      for (std::size_t j = 0; j < cell.panel_a.size(); ++j) cell.panel_a[j] += s.result.p_a[j] <= kRejectAt ? 1.0 : 0.0;
      for (std::size_t j = 0; j < cell.panel_b.size(); ++j) cell.panel_b[j] += s.result.p_b[j] <= kRejectAt ? 1.0 : 0.0;
      for (std::size_t j = 0; j < cell.panel_c.size(); ++j) cell.panel_c[j] += s.result.amari[j];
    }
    const double failure_rate = static_cast<double>(cell.failed_seeds.size()) / static_cast<double>(reps);
    if (failure_rate > grid.max_failure_rate)
      throw SimulationError("montecarlo: cell " + cell.cell.label() + " failed " +
                                std::to_string(cell.failed_seeds.size()) + " of " + std::to_string(reps) +
                                " replications; first error: " + cell.failure_messages.front(),
                            0);
    if (cell.completed > 0) {
      const double m = static_cast<double>(cell.completed);
      cell.mean_a /= m;
      cell.mean_b /= m;
      for (auto* panel : {&cell.panel_a, &cell.panel_b, &cell.panel_c})
        for (double& v : *panel) v /= m;
    }
    report.cells.push_back(std::move(cell));
  }
  report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

namespace {

std::vector<CsvRow> panel_rows(const MonteCarloReport& report, std::vector<double> CellReport::*panel) {
  std::vector<CsvRow> rows;
  for (const auto& cell : report.cells) {
    CsvRow row{to_string(cell.cell.design), to_string(cell.cell.noise), std::to_string(cell.completed)};
    for (double v : cell.*panel) row.push_back(format_number(v));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<CsvRow> matrix_rows(const MonteCarloReport& report, Matrix CellReport::*estimate, Matrix CellReport::*truth) {
  std::vector<CsvRow> rows;
  for (const auto& cell : report.cells) {
    const Matrix& m = cell.*estimate;
    const Matrix& t = cell.*truth;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        rows.push_back({to_string(cell.cell.design), to_string(cell.cell.noise), std::to_string(i + 1),
                        std::to_string(j + 1), format_number(m(i, j)), format_number(t(i, j))});
  }
  return rows;
}

}  // namespace

std::vector<std::string> write_report(const MonteCarloReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::string> written;
  auto path = [&](const std::string& name) {
    written.push_back((fs::path(dir) / name).string());
    return written.back();
  };
  const CsvRow lead{"model", "noise", "reps"};
  auto with = [&](const std::vector<std::string>& cols) {
    CsvRow h = lead;
    h.insert(h.end(), cols.begin(), cols.end());
    return h;
  };
  write_csv(path("panelA.csv"), with(panel_a_columns()), panel_rows(report, &CellReport::panel_a));
  write_csv(path("panelB.csv"), with(panel_b_columns()), panel_rows(report, &CellReport::panel_b));
  write_csv(path("panelC.csv"), with(panel_c_columns()), panel_rows(report, &CellReport::panel_c));
  const CsvRow mheader{"model", "noise", "row", "col", "mean", "true"};
  write_csv(path("meanA.csv"), mheader, matrix_rows(report, &CellReport::mean_a, &CellReport::true_a));
  write_csv(path("meanB.csv"), mheader, matrix_rows(report, &CellReport::mean_b, &CellReport::true_b));
  return written;
}

double quantile(std::vector<double> values, double probability) {
  if (values.empty()) throw ParameterError("quantile: empty sample");
  if (!(probability >= 0.0 && probability <= 1.0)) throw ParameterError("quantile: probability outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = probability * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

KurtosisQuantileTable kurtosis_quantile_table(const std::vector<Eigen::Index>& sample_sizes, double alpha,
                                              Eigen::Index draws, std::uint64_t seed, int threads) {
  if (sample_sizes.empty()) throw ParameterError("kurtosis table: no sample sizes");
  if (draws < 1) throw ParameterError("kurtosis table: draws must be >= 1");
  if (!(alpha > 0.0)) throw ParameterError("kurtosis table: alpha must be > 0");
  KurtosisQuantileTable table;
  table.probabilities = {0.01, 0.025, 0.05, 0.10, 0.50, 0.90, 0.95, 0.975, 0.99};
  table.sample_sizes = sample_sizes;
  table.alpha = alpha;
  table.draws = draws;
  table.quantiles.resize(static_cast<Eigen::Index>(sample_sizes.size()),
                         static_cast<Eigen::Index>(table.probabilities.size()));
  for (std::size_t s = 0; s < sample_sizes.size(); ++s) {
    if (sample_sizes[s] < 2) throw ParameterError("kurtosis table: sample sizes must be >= 2");
    std::vector<double> kappa(static_cast<std::size_t>(draws));
    parallel_for(kappa.size(), threads, [&](std::size_t d) {
      const Vector z = sample_shock(ParetoSpec{alpha}, sample_sizes[s], child_seed(seed, {s, d}));
      kappa[d] = moment_ratio_kurtosis(z);
    });
    for (std::size_t q = 0; q < table.probabilities.size(); ++q)
      table.quantiles(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(q)) =
          quantile(kappa, table.probabilities[q]);
  }
  return table;
}

void write_kurtosis_table(const KurtosisQuantileTable& table, const std::string& path) {
  CsvRow header{"T"};
  for (double p : table.probabilities) {
    char label[32];
    std::snprintf(label, sizeof label, "%g%%", 100.0 * p);
    header.push_back(label);
  }
  std::vector<CsvRow> rows;
  for (std::size_t s = 0; s < table.sample_sizes.size(); ++s) {
    CsvRow row{std::to_string(table.sample_sizes[s])};
    for (Eigen::Index q = 0; q < table.quantiles.cols(); ++q)
      row.push_back(format_number(table.quantiles(static_cast<Eigen::Index>(s), q)));
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

}  // namespace dsvar
