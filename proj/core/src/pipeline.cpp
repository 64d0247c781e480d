#include "dsvar/pipeline.hpp"

#include "dsvar/csv_io.hpp"
#include "dsvar/ica.hpp"
#include "dsvar/independence_test.hpp"
#include "dsvar/irf.hpp"
#include "dsvar/model_config.hpp"
#include "dsvar/montecarlo.hpp"
#include "dsvar/parallel.hpp"
#include "dsvar/prewhitening.hpp"
#include "dsvar/rng.hpp"
#include "dsvar/svar_model.hpp"
#include "dsvar/var_estimation.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace dsvar {

namespace fs = std::filesystem;

namespace {

const std::vector<std::pair<Subcommand, std::string>>& subcommand_names() {
  static const std::vector<std::pair<Subcommand, std::string>> names{
      {Subcommand::Simulate, "simulate"}, {Subcommand::Estimate, "estimate"},
      {Subcommand::Identify, "identify"}, {Subcommand::Test, "test"},
      {Subcommand::Irf, "irf"},           {Subcommand::MonteCarlo, "montecarlo"},
      {Subcommand::KurtosisTable, "kurtosis-table"}};
  return names;
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

template <typename T>
std::string join_numbers(const std::vector<T>& items) {
  std::vector<std::string> s;
  for (const auto& v : items) s.push_back(std::to_string(v));
  return join(s, ",");
}

// Files written so far; removed again unless the run commits.
class ArtifactSet {
 public:
  explicit ArtifactSet(fs::path dir) : dir_(std::move(dir)) {}
  ~ArtifactSet() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& p : paths_) fs::remove(p, ec);
  }
  std::string path(const std::string& name) {
    paths_.push_back((dir_ / name).string());
    return paths_.back();
  }
  void adopt(const std::vector<std::string>& paths) { paths_.insert(paths_.end(), paths.begin(), paths.end()); }
  const std::vector<std::string>& paths() const { return paths_; }
  void commit() { committed_ = true; }

 private:
  fs::path dir_;
  std::vector<std::string> paths_;
  bool committed_ = false;
};

void write_labeled_matrix(const std::string& path, const std::string& corner, const std::vector<std::string>& rows,
                          const std::vector<std::string>& cols, const Matrix& m) {
  CsvRow header{corner};
  header.insert(header.end(), cols.begin(), cols.end());
  std::vector<CsvRow> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    CsvRow row{rows[static_cast<std::size_t>(i)]};
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(format_number(m(i, j)));
    out.push_back(std::move(row));
  }
  write_csv(path, header, out);
}

std::vector<std::string> shock_names(Eigen::Index n) { return TimeSeriesMatrix::default_names(n, "u"); }

struct Prepared {
  TimeSeriesMatrix y;
  std::optional<TimeSeriesMatrix> exog;  // cosine regressors are already removed from y
  VarFit fit;
};

Prepared prepare(const RunConfig& c) {
  Prepared out;
  out.y = ingest_csv(c.input);
  if (!c.exog.empty()) out.y = purge_exogenous(out.y, ingest_csv(c.exog), c.exog_lags);
  if (c.q_cosines > 0) out.y = low_frequency_detrend(out.y, c.q_cosines);
  VarOptions opt;
  opt.include_constant = c.constant;
  out.fit = fit_var(out.y, c.p, std::nullopt, opt);
  return out;
}

WhitenerVariant resolve_whitener(const RunConfig& c, const Matrix& residuals) {
  if (c.whitener == "kurt") return WhitenerVariant::choleski(kurtosis_order(residuals));
  return parse_whitener(c.whitener);
}

int resolve_threads(const RunConfig& c) { return c.threads > 0 ? c.threads : default_thread_count(); }

IcaResult identify_shocks(const RunConfig& c, const Matrix& residuals) {
  OptimizerSettings opt;
  opt.restarts = c.restarts;
  opt.seed = child_seed(*c.seed, 100);
  opt.threads = resolve_threads(c);
  DistCovConfig dc{c.beta};
  const IcaResult raw = estimate_unmixing(residuals, resolve_whitener(c, residuals), dc, opt);
  return label_disaster_shock(raw, parse_sign_rule(c.sign_rule)).result;
}

void write_var(ArtifactSet& files, const Prepared& prep) {
  const auto& fit = prep.fit;
  const auto& names = prep.y.names;
  std::vector<CsvRow> rows;
  for (int h = 0; h < fit.p; ++h)
    for (std::size_t i = 0; i < names.size(); ++i)
      for (std::size_t j = 0; j < names.size(); ++j)
        rows.push_back({names[i], "L" + std::to_string(h + 1) + "." + names[j],
                        format_number(fit.lag_matrices[static_cast<std::size_t>(h)](
                            static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))});
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t k = 0; k < fit.exog_names.size(); ++k)
      rows.push_back({names[i], fit.exog_names[k],
                      format_number(fit.exog_coeffs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)))});
  write_csv(files.path("var_coefficients.csv"), {"equation", "regressor", "coefficient"}, rows);
  TimeSeriesMatrix resid(fit.residuals, names);
  if (!prep.y.dates.empty())
    resid.dates.assign(prep.y.dates.end() - fit.residuals.rows(), prep.y.dates.end());
  write_matrix_csv(files.path("residuals.csv"), resid);
  write_labeled_matrix(files.path("residual_cov.csv"), "variable", names, names, fit.residual_cov);
}

void write_tests(ArtifactSet& files, const std::vector<BatteryEntry>& entries) {
  std::vector<CsvRow> rows;
  for (const auto& e : entries)
    rows.push_back({e.label, format_number(e.result.statistic), format_number(e.result.p_value),
                    std::to_string(e.result.np), std::to_string(e.result.seed)});
  write_csv(files.path("tests.csv"), {"series", "statistic", "p_value", "NP", "seed"}, rows);
}

void write_identification(ArtifactSet& files, const RunConfig& c, const Prepared& prep, const IcaResult& ica) {
  const auto& names = prep.y.names;
  const auto shocks = shock_names(static_cast<Eigen::Index>(names.size()));
  write_labeled_matrix(files.path("W_hat.csv"), "shock", shocks, names, ica.W_hat);
  write_labeled_matrix(files.path("B_hat.csv"), "variable", names, shocks, ica.B_hat);
  TimeSeriesMatrix u(ica.shocks_hat, shocks);
  if (!prep.y.dates.empty()) u.dates.assign(prep.y.dates.end() - ica.shocks_hat.rows(), prep.y.dates.end());
  write_matrix_csv(files.path("shocks.csv"), u);
  std::vector<CsvRow> rows;
  for (Eigen::Index k = 0; k < ica.kurtosis.size(); ++k)
    rows.push_back({"kurtosis." + shocks[static_cast<std::size_t>(k)], format_number(ica.kurtosis[k])});
  rows.push_back({"objective", format_number(ica.objective_value)});
  rows.push_back({"identity_objective", format_number(ica.report.start_objective)});
  rows.push_back({"converged", ica.report.converged ? "true" : "false"});
  rows.push_back({"sweeps", std::to_string(ica.report.iterations)});
  rows.push_back({"evaluations", std::to_string(ica.report.evaluations)});
  rows.push_back({"restarts", std::to_string(ica.report.restarts)});
  rows.push_back({"best_restart", std::to_string(ica.report.best_restart)});
  rows.push_back({"whitener", to_string(ica.whitener.variant)});
  write_csv(files.path("identify.csv"), {"quantity", "value"}, rows);

  const int threads = resolve_threads(c);
  const DistCovConfig dc{c.beta};
  std::vector<LabeledSeries> series{{"e_hat", prep.fit.residuals},
                                    {"e_tilde", whiten(prep.fit.residuals, ica.whitener.variant).data},
                                    {"u_hat", ica.shocks_hat}};
  write_tests(files, test_battery(series, c.np, dc, child_seed(*c.seed, 200), threads));
}

void write_irf(ArtifactSet& files, const RunConfig& c, const Prepared& prep, const IcaResult& ica) {
  const auto& fit = prep.fit;
  const int n = static_cast<int>(prep.y.dimension());
  IrfTable var = irf_var_implied(fit.lag_matrices, ica.B_hat, 0, c.horizon);
  LocalProjectionOptions lp_opt;
  lp_opt.lags = c.p;
  lp_opt.constant = c.constant;
  IrfTable lp = irf_local_projection(prep.y.values, ica.shocks_hat, 0, c.horizon, lp_opt);
  std::vector<int> order;
  for (int v : c.ordering) order.push_back(v - 1);
  if (order.empty()) {
    const WhitenerVariant w = ica.whitener.variant;
    if (w.kind == WhitenerVariant::Kind::CholeskiOrdered && !w.ordering.empty()) order = w.ordering;
  }
  const int chol_shock = order.empty() ? 0 : order.front();
  IrfTable chol = irf_choleski(fit.lag_matrices, fit.residual_cov, order, chol_shock, c.horizon);
  if (c.unit_effect > 0) {
    var = unit_effect_rescale(var, c.unit_effect - 1);
    lp = unit_effect_rescale(lp, c.unit_effect - 1);
    chol = unit_effect_rescale(chol, c.unit_effect - 1);
  }
  std::vector<CsvRow> rows;
  for (int i = 0; i < n; ++i)
    for (int h = 0; h <= c.horizon; ++h)
      rows.push_back({prep.y.names[static_cast<std::size_t>(i)], std::to_string(h),
                      format_number(var.responses(h, i)), format_number(lp.responses(h, i)),
                      format_number((*lp.se)(h, i)), format_number(chol.responses(h, i))});
  write_csv(files.path("irf.csv"), {"response", "h", "var", "lp", "lp.se", "chol"}, rows);
}

void write_manifest(ArtifactSet& files, const RunConfig& c, const std::vector<std::string>& extra) {
  std::ostringstream os;
  os << "tool: dsvar 0.1.0\n";
  os << "subcommand: " << to_string(c.subcommand) << "\n";
  os << "seed: " << (c.seed ? std::to_string(*c.seed) : "none") << "\n";
  os << "input: " << c.input << "\n";
  os << "model: " << c.model << "\n";
  os << "design: " << c.design << "\n";
  os << "noise: " << c.noise << "\n";
  os << "exog: " << c.exog << "\n";
  os << "exog_lags: " << c.exog_lags << "\n";
  os << "p: " << c.p << "\n";
  os << "H: " << c.horizon << "\n";
  os << "NP: " << c.np << "\n";
  os << "beta: " << format_number(c.beta) << "\n";
  os << "whitener: " << c.whitener << "\n";
  os << "ordering: " << join_numbers(c.ordering) << "\n";
  os << "q_cosines: " << c.q_cosines << "\n";
  os << "constant: " << (c.constant ? "true" : "false") << "\n";
  os << "reps: " << c.reps << "\n";
  os << "restarts: " << c.restarts << "\n";
  os << "T: " << c.T << "\n";
  os << "burn_in: " << c.burn_in << "\n";
  os << "initial_state: zero\n";
  os << "sign_rule: " << c.sign_rule << "\n";
  os << "unit_effect: " << c.unit_effect << "\n";
  os << "means_only: " << (c.means_only ? "true" : "false") << "\n";
  os << "draws: " << c.draws << "\n";
  os << "kurtosis_T: " << join_numbers(c.kurtosis_T) << "\n";
  for (const auto& line : extra) os << line << "\n";
  std::vector<std::string> names;
  for (const auto& p : files.paths()) names.push_back(fs::path(p).filename().string());
  os << "artifacts: " << join(names, ",") << "\n";
  const std::string path = files.path("manifest.txt");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << os.str();
  if (!out) throw Error("cannot write " + path);
}

void execute(const RunConfig& c, ArtifactSet& files) {
  std::vector<std::string> extra;
  switch (c.subcommand) {
    case Subcommand::Simulate: {
      const SvarModel model = c.model.empty()
                                  ? model_from_json("{\"design\":\"" + c.design + "\",\"noise\":\"" + c.noise + "\"}")
                                  : load_model_config(c.model);
      const SimulationResult sim = simulate(model, c.T, c.burn_in, *c.seed);
      write_matrix_csv(files.path("y.csv"), sim.y);
      write_matrix_csv(files.path("shocks.csv"), sim.shocks);
      break;
    }
    case Subcommand::Estimate: {
      const Prepared prep = prepare(c);
      write_var(files, prep);
      break;
    }
    case Subcommand::Identify: {
      const Prepared prep = prepare(c);
      write_var(files, prep);
      const IcaResult ica = identify_shocks(c, prep.fit.residuals);
      write_identification(files, c, prep, ica);
      break;
    }
    case Subcommand::Test: {
      const TimeSeriesMatrix s = ingest_csv(c.input);
      write_tests(files, test_battery({{"input", s.values}}, c.np, DistCovConfig{c.beta}, *c.seed, resolve_threads(c)));
      break;
    }
    case Subcommand::Irf: {
      const Prepared prep = prepare(c);
      const IcaResult ica = identify_shocks(c, prep.fit.residuals);
      write_irf(files, c, prep, ica);
      break;
    }
    case Subcommand::MonteCarlo: {
      ExperimentGrid grid;
      grid.T = c.T;
      grid.burn_in = c.burn_in;
      grid.reps = c.reps;
      grid.np = c.np;
      grid.seed = *c.seed;
      grid.threads = resolve_threads(c);
      grid.dist_cov.beta = c.beta;
      grid.mode = c.means_only ? ExperimentGrid::Mode::MeansOnly : ExperimentGrid::Mode::Full;
      const MonteCarloReport report = run_grid(grid);
      files.adopt(write_report(report, c.output_dir));
      const KurtosisQuantileTable table =
          kurtosis_quantile_table(c.kurtosis_T, 1.0, c.draws, child_seed(*c.seed, 900), grid.threads);
      write_kurtosis_table(table, files.path("kurtosis_quantiles.csv"));
      extra.push_back("optimizer_restarts: " + std::to_string(grid.optimizer.restarts));
      extra.push_back("var_lags: " + std::to_string(grid.var_lags));
      extra.push_back("alpha_for_hl: " + format_number(grid.alpha_for_hl));
      for (const auto& cell : report.cells) {
        std::vector<std::string> seeds;
        for (auto s : cell.failed_seeds) seeds.push_back(std::to_string(s));
        extra.push_back("failed." + cell.cell.label() + ": " + (seeds.empty() ? "none" : join(seeds, ",")));
      }
      break;
    }
    case Subcommand::KurtosisTable: {
      const KurtosisQuantileTable table =
          kurtosis_quantile_table(c.kurtosis_T, 1.0, c.draws, *c.seed, resolve_threads(c));
      write_kurtosis_table(table, files.path("kurtosis_quantiles.csv"));
      break;
    }
  }
  write_manifest(files, c, extra);
}

}  // namespace

Subcommand parse_subcommand(const std::string& name) {
  for (const auto& [s, n] : subcommand_names())
    if (n == name) return s;
  throw ParameterError("unknown subcommand '" + name + "'");
}

std::string to_string(Subcommand subcommand) {
  for (const auto& [s, n] : subcommand_names())
    if (s == subcommand) return n;
  return "unknown";
}

bool is_stochastic(Subcommand subcommand) { return subcommand != Subcommand::Estimate; }

void validate(const RunConfig& c) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ParameterError("invalid configuration: " + what);
  };
  const bool needs_input = c.subcommand == Subcommand::Estimate || c.subcommand == Subcommand::Identify ||
                           c.subcommand == Subcommand::Test || c.subcommand == Subcommand::Irf;
  require(!needs_input || !c.input.empty(), "--input is required for " + to_string(c.subcommand));
  require(!is_stochastic(c.subcommand) || c.seed.has_value(), "--seed is required for " + to_string(c.subcommand));
  require(!c.output_dir.empty(), "output directory must not be empty");
  require(c.p >= 0 && c.p <= 48, "p must lie in [0, 48]");
  require(c.subcommand != Subcommand::Irf || c.p >= 1, "irf needs p >= 1");
  require(c.horizon >= 0 && c.horizon <= 240, "H must lie in [0, 240]");
  require(c.np >= 1 && c.np <= 100000, "NP must lie in [1, 100000]");
  require(c.beta > 0.0 && c.beta < 2.0, "beta must lie in (0, 2)");
  require(c.q_cosines >= 0, "q_cosines must be >= 0");
  require(c.exog_lags >= 0, "exog lags must be >= 0");
  require(c.reps >= 1, "reps must be >= 1");
  require(c.threads >= 0, "threads must be >= 0");
  require(c.restarts >= 1, "restarts must be >= 1");
  require(c.T >= 20, "T must be >= 20");
  require(c.burn_in >= 0, "burn-in must be >= 0");
  require(c.unit_effect >= 0, "unit-effect target must be >= 0");
  require(c.draws >= 1, "draws must be >= 1");
  require(!c.kurtosis_T.empty(), "at least one kurtosis sample size");
  for (auto t : c.kurtosis_T) require(t >= 2, "kurtosis sample sizes must be >= 2");
  for (int v : c.ordering) require(v >= 1, "ordering is 1-based");
  if (!c.ordering.empty()) {
    std::vector<int> zero;
    for (int v : c.ordering) zero.push_back(v - 1);
    require(is_permutation_of(zero, static_cast<int>(zero.size())), "ordering must be a permutation of 1..n");
  }
  if (c.whitener != "kurt") parse_whitener(c.whitener);
  parse_sign_rule(c.sign_rule);
  require(c.design == "NLT" || c.design == "LT", "design must be NLT or LT");
  require(c.noise == "HL" || c.noise == "LL", "noise must be HL or LL");
}

RunResult run(const RunConfig& config) {
  RunResult result;
  try {
    validate(config);
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec) throw Error("cannot create output directory " + config.output_dir + ": " + ec.message());
    ArtifactSet files(config.output_dir);
    execute(config, files);
    files.commit();
    result.artifacts = files.paths();
  } catch (const ParameterError& e) {
    result.exit_code = 2;
    result.message = e.what();
  } catch (const ParseError& e) {
    result.exit_code = 3;
    result.message = e.what();
  } catch (const EstimationError& e) {
    result.exit_code = 4;
    result.message = e.what();
  } catch (const NotPositiveDefiniteError& e) {
    result.exit_code = 4;
    result.message = e.what();
  } catch (const SimulationError& e) {
    result.exit_code = 4;
    result.message = e.what();
  } catch (const DegenerateInputError& e) {
    result.exit_code = 4;
    result.message = e.what();
  } catch (const AmbiguityError& e) {
    result.exit_code = 4;
    result.message = e.what();
  } catch (const ConsistencyError& e) {
    result.exit_code = 4;
    result.message = e.what();
  } catch (const std::exception& e) {
    result.exit_code = 1;
    result.message = e.what();
  }
  return result;
}

}  // namespace dsvar
