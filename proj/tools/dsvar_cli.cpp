// Command-line front end for the dsvar library.

#include "dsvar/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Options {
  dsvar::RunConfig config;
  std::uint64_t seed = 0;
  std::string ordering;
};

std::vector<int> parse_ordering(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    out.push_back(std::stoi(item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

void add_common(CLI::App* app, Options& o) {
  app->add_option("-o,--output", o.config.output_dir, "Output directory")->capture_default_str();
  app->add_option("--threads", o.config.threads, "Worker threads (0: DSVAR_THREADS or all cores)");
}

void add_seed(CLI::App* app, Options& o) { app->add_option("--seed", o.seed, "Random seed (required)"); }

void add_data(CLI::App* app, Options& o) {
  app->add_option("-i,--input", o.config.input, "Input CSV (header row, optional leading date column)")
      ->check(CLI::ExistingFile);
  app->add_option("-p,--lags", o.config.p, "VAR lag order")->capture_default_str();
  app->add_option("--q-cosines", o.config.q_cosines, "Low-frequency cosine regressors removed first")
      ->capture_default_str();
  app->add_option("--exog", o.config.exog, "CSV of exogenous series to purge")->check(CLI::ExistingFile);
  app->add_option("--exog-lags", o.config.exog_lags, "Lags of the exogenous series")->capture_default_str();
  app->add_flag("!--no-constant", o.config.constant, "Omit the VAR intercept");
}

void add_identification(CLI::App* app, Options& o) {
  app->add_option("--whitener", o.config.whitener, "chol, chol:i,j,k, kurt, svd or datasvd")->capture_default_str();
  app->add_option("--beta", o.config.beta, "Distance covariance exponent in (0,2)")->capture_default_str();
  app->add_option("--np", o.config.np, "Permutations per test")->capture_default_str();
  app->add_option("--restarts", o.config.restarts, "Optimizer restarts")->capture_default_str();
  app->add_option("--sign", o.config.sign_rule, "none, pos:k or neg:k (impact sign of the disaster shock)")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identify heavy-tailed shocks in structural VARs"};
  app.require_subcommand(1);
  Options o;

  auto* sim = app.add_subcommand("simulate", "Simulate a structural VAR");
  add_common(sim, o);
  add_seed(sim, o);
  sim->add_option("--model", o.config.model, "JSON model file")->check(CLI::ExistingFile);
  sim->add_option("--design", o.config.design, "Reference design NLT or LT")->capture_default_str();
  sim->add_option("--noise", o.config.noise, "Reference shocks HL or LL")->capture_default_str();
  sim->add_option("-T,--length", o.config.T, "Observations kept")->capture_default_str();
  sim->add_option("--burn-in", o.config.burn_in, "Observations discarded")->capture_default_str();

  auto* est = app.add_subcommand("estimate", "Least-squares VAR");
  add_common(est, o);
  add_data(est, o);

  auto* ident = app.add_subcommand("identify", "VAR, prewhitening, ICA and independence tests");
  add_common(ident, o);
  add_seed(ident, o);
  add_data(ident, o);
  add_identification(ident, o);

  auto* test = app.add_subcommand("test", "Permutation test of mutual independence of the input columns");
  add_common(test, o);
  add_seed(test, o);
  test->add_option("-i,--input", o.config.input, "Input CSV")->check(CLI::ExistingFile);
  test->add_option("--np", o.config.np, "Permutations")->capture_default_str();
  test->add_option("--beta", o.config.beta, "Distance covariance exponent in (0,2)")->capture_default_str();

  auto* irf = app.add_subcommand("irf", "Impulse responses to the disaster shock (var, lp, chol)");
  add_common(irf, o);
  add_seed(irf, o);
  add_data(irf, o);
  add_identification(irf, o);
  irf->add_option("-H,--horizon", o.config.horizon, "Last horizon")->capture_default_str();
  irf->add_option("--ordering", o.ordering, "Choleski ordering for the chol column, 1-based, e.g. 1,2,3");
  irf->add_option("--unit-effect", o.config.unit_effect, "Scale impulses to a unit impact on this variable (1-based)");

  auto* mc = app.add_subcommand("montecarlo", "Reference simulation grid");
  add_common(mc, o);
  add_seed(mc, o);
  mc->add_option("--reps", o.config.reps, "Replications per cell")->capture_default_str();
  mc->add_option("--np", o.config.np, "Permutations per test")->capture_default_str();
  mc->add_option("-T,--length", o.config.T, "Observations per replication")->capture_default_str();
  mc->add_option("--burn-in", o.config.burn_in, "Observations discarded")->capture_default_str();
  mc->add_option("--beta", o.config.beta, "Distance covariance exponent in (0,2)")->capture_default_str();
  mc->add_option("--draws", o.config.draws, "Draws for the kurtosis quantile table")->capture_default_str();
  mc->add_flag("--means-only", o.config.means_only, "Only mean A and B estimates");

  auto* kt = app.add_subcommand("kurtosis-table", "Quantiles of sample kurtosis under Pareto(1) data");
  add_common(kt, o);
  add_seed(kt, o);
  kt->add_option("--draws", o.config.draws, "Samples per length")->capture_default_str();
  kt->add_option("--lengths", o.config.kurtosis_T, "Sample lengths")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  const CLI::App* chosen = app.get_subcommands().front();
  try {
    o.config.subcommand = dsvar::parse_subcommand(chosen->get_name());
    if (!o.ordering.empty()) o.config.ordering = parse_ordering(o.ordering);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (chosen->get_option_no_throw("--seed") && chosen->count("--seed") > 0) o.config.seed = o.seed;

  const dsvar::RunResult result = dsvar::run(o.config);
  if (result.exit_code != 0) {
    std::cerr << "error: " << result.message << "\n";
    return result.exit_code;
  }
  for (const auto& path : result.artifacts) std::cout << path << "\n";
  return 0;
}
