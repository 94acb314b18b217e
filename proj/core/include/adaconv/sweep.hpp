#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "adaconv/objectives.hpp"
#include "adaconv/optim.hpp"

namespace adaconv {

enum class Vary { alpha, one_minus_beta1, one_minus_beta2 };
enum class Estimator { tau_weighted, plain_average };

struct WarmPhase {
  std::int64_t iterations;
  double alpha;
};

// Objective selector for experiment configs: the built-in toy problem or an
// inline finite-support description.
struct ObjectiveSpec {
  bool toy = true;
  std::vector<FiniteSupportObjective::Atom> atoms;  // used when !toy
};

// Declarative sweep over one hyper-parameter. The grid holds the varied
// quantity itself: alpha, 1 - beta1 or 1 - beta2.
struct SweepConfig {
  Vary vary = Vary::alpha;
  ObjectiveSpec objective;
  std::vector<double> grid;       // positive; default 13 log-uniform in [1e-6, 1]
  double fixed_alpha = 1e-6;
  double fixed_beta1 = 0.0;
  double fixed_beta2 = 1.0 - 1e-6;
  double epsilon = 1e-8;
  std::int64_t iterations = 1'000'000;
  int runs = 3;
  std::uint64_t master_seed = 42;
  // Warm-up phases run before measurement with beta1 = fixed_beta1 and
  // beta2 = kWarmBeta2; their trajectory is shared across grid points of the
  // same run index (it does not depend on the varied value).
  std::vector<WarmPhase> warm_start;
  Estimator estimator = Estimator::tau_weighted;
};

inline constexpr double kWarmBeta2 = 1.0 - 1e-6;

// Hyper-parameters at one grid value. Grid edges are clamped: beta2 = 0
// becomes the smallest positive double and beta1 >= beta2 is nudged one ulp
// below beta2.
HyperParams hyperparams_at(const SweepConfig& cfg, double x);

// Parses and fully validates a JSON config; fills the per-sweep defaults and
// rejects unknown keys. Throws std::invalid_argument with a message naming
// the offending key.
SweepConfig load_config(const std::string& path);
SweepConfig parse_config(const std::string& json_text);
std::string serialize_config(const SweepConfig& cfg);

// Measured outputs for one grid point.
struct RunResult {
  double x = 0.0;                       // varied value
  std::vector<double> estimates;        // per run, E||grad F(x_tau)||^2
  double mean = 0.0;
  double std_error = 0.0;
  std::vector<std::uint64_t> seeds;     // measurement seeds per run
  std::vector<double> wall_seconds;     // per run
  bool diverged = false;                // any run produced a non-finite value
  std::string error;                    // non-empty when the point failed
};

// Executes all runs for one grid point. warm_x holds the per-run warm-start
// iterates (empty vectors mean a cold start at zero).
RunResult run_experiment(const SweepConfig& cfg, std::size_t grid_index,
                         const std::vector<std::vector<double>>& warm_x);

// Shared warm-start trajectories, one per run index. Empty iterates when the
// config has no warm phases.
std::vector<std::vector<double>> compute_warm_starts(const SweepConfig& cfg);

// Full sweep, parallel over grid points; per-point failures are captured in
// RunResult::error instead of aborting. Deterministic for a fixed config.
std::vector<RunResult> sweep(const SweepConfig& cfg, int jobs = 1);

struct RegressionResult {
  double slope;
  double intercept;  // in ln y = slope ln x + intercept
  double r_squared;
};

// OLS fit of ln y against ln x. Requires >= 2 points with x, y > 0 and
// finite; throws std::invalid_argument otherwise.
RegressionResult loglog_regress(
    const std::vector<std::pair<double, double>>& points);

// Writes the result table: CSV columns exactly x,y,yerr plus a JSON sidecar
// (<path>.meta.json) with seeds, PRNG id, config echo and wall clock. All
// bytes except the wall-clock fields are determined by (cfg, table).
void write_results(const std::vector<RunResult>& table, const SweepConfig& cfg,
                   const std::string& csv_path);

// Reads back an x,y,yerr CSV (as written by write_results).
std::vector<std::array<double, 3>> read_results_csv(const std::string& path);

}  // namespace adaconv
