#pragma once

#include "dsvar/common.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dsvar {

enum class Subcommand { Simulate, Estimate, Identify, Test, Irf, MonteCarlo, KurtosisTable };

Subcommand parse_subcommand(const std::string& name);
std::string to_string(Subcommand subcommand);
bool is_stochastic(Subcommand subcommand);

/// Everything a run needs; numeric fields are checked by validate() before any
/// computation starts.
struct RunConfig {
  Subcommand subcommand = Subcommand::Estimate;
  std::string input;       ///< CSV of observations (estimate, identify, test, irf)
  std::string output_dir = ".";
  std::string model;       ///< JSON model file for simulate; empty uses design/noise
  std::string design = "NLT";
  std::string noise = "HL";
  std::string exog;        ///< CSV of exogenous series purged before estimation
  int exog_lags = 0;
  int p = 1;
  int horizon = 6;
  int np = 199;
  double beta = 1.0;
  std::string whitener = "chol";  ///< chol, chol:i,j,k, kurt, svd or datasvd
  std::vector<int> ordering;      ///< 1-based Choleski ordering for the chol IRF
  int q_cosines = 0;
  bool constant = true;
  std::optional<std::uint64_t> seed;
  int reps = 200;
  int threads = 0;                ///< 0: DSVAR_THREADS or hardware concurrency
  int restarts = 8;
  Eigen::Index T = 400;
  Eigen::Index burn_in = 200;
  std::string sign_rule = "none";
  int unit_effect = 0;            ///< 1-based target variable, 0 = off
  bool means_only = false;
  Eigen::Index draws = 10000;
  std::vector<Eigen::Index> kurtosis_T{500, 1000};
};

/// Throws ParameterError naming the first invalid field.
void validate(const RunConfig& config);

struct RunResult {
  int exit_code = 0;
  std::vector<std::string> artifacts;
  std::string message;
};

/// Execute one subcommand, writing CSV artifacts and manifest.txt into
/// output_dir. On failure every file written by this run is removed and the
/// exit code identifies the error class: 2 invalid parameters, 3 unreadable
/// input, 4 numerical failure, 1 anything else.
RunResult run(const RunConfig& config);

}  // namespace dsvar
