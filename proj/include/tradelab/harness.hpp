#pragma once

// Experiment engine: runs strategies against stochastic or adversarial
// environments, records pseudo and empirical regret at checkpoints,
// replicates with derived seeds and aggregates across replications.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tradelab/core.hpp"
#include "tradelab/environments.hpp"
#include "tradelab/strategies.hpp"

namespace tradelab {

/// Environment by family name plus numeric parameters, e.g.
/// {"t23_lower", {{"eps", 0.7}}} or {"adversarial", {{"eps", 0.03}, {"probe_budget", 1}}}.
struct EnvSpec {
  std::string family = "uniform_iid";
  std::map<std::string, double> params;

  bool adversarial() const { return family == "adversarial"; }
  double param(const std::string& key, double fallback) const;
};

/// Names accepted in EnvSpec::family.
const std::vector<std::string>& environment_families();
/// Parameter names each family accepts.
std::vector<std::string> environment_parameters(const std::string& family);

/// Builds a stochastic environment. Throws ConfigError for unknown families,
/// unknown parameters and for "adversarial".
PairDistribution make_environment(const EnvSpec& spec);

struct AlgoSpec {
  std::string family = "fbp";
  std::optional<std::uint64_t> exploration_rounds;  // empty: tuned from T
  std::optional<std::size_t> grid_size;             // empty: tuned from T
  std::optional<double> density_bound;              // M used to tune K
  std::string bandit = "moss";
  std::optional<double> price;  // fixed_price only
  bool known_horizon = true;
  bool adapt_feedback = false;
};

const std::vector<std::string>& algorithm_families();

struct ExperimentConfig {
  std::string name = "experiment";
  EnvSpec env;
  AlgoSpec algo;
  /// Feedback the environment reveals; empty means the strategy's own kind.
  std::optional<FeedbackKind> feedback;
  std::vector<std::uint64_t> horizons;
  std::size_t replications = 1;
  std::uint64_t master_seed = 0;
  /// Rounds at which traces are recorded; empty means T 2^-j plus T.
  std::vector<std::uint64_t> checkpoints;
  /// Density bound used for the theoretical upper bound column.
  std::optional<double> bound_density;
  /// Lower bound row used for the reference column; empty infers one.
  std::optional<std::string> lower_bound_regime;
  /// Skips the O(t log t) hindsight computation at every checkpoint.
  bool empirical_regret = true;
};

/// Throws ConfigError on horizons not sorted ascending, zero replications
/// or an unknown family.
void validate(const ExperimentConfig& cfg);

struct TracePoint {
  std::uint64_t t = 0;
  double cumulative_reward = 0.0;
  double pseudo_regret = 0.0;
  double empirical_regret = 0.0;
};

struct RegretTrace {
  std::string run_id;
  std::size_t rep = 0;
  std::uint64_t horizon = 0;
  std::uint64_t seed = 0;
  std::string env_name;
  std::string algo_name;
  std::vector<TracePoint> points;
  /// Adversarial runs: the adversary's common price after the last round.
  std::optional<double> common_price;
};

/// floor(T 2^-j) for j >= 0 while positive, plus T; sorted and unique.
std::vector<std::uint64_t> default_checkpoints(std::uint64_t horizon);

/// Factory for the configured algorithm, before any feedback adaptation.
/// `env` supplies the median and best price for baselines that need them.
StrategyFactory make_strategy_factory(const AlgoSpec& algo, const PairDistribution* env);

/// Strategy exactly as the harness runs it for horizon T, including the
/// doubling wrapper and the feedback adapter.
std::unique_ptr<Strategy> make_strategy(const ExperimentConfig& cfg, std::uint64_t horizon,
                                        const PairDistribution* env);

/// The feedback kind the environment reveals in this configuration. Throws
/// ConfigError("feedback mismatch ...") when the strategy cannot consume it.
FeedbackKind resolve_feedback(const ExperimentConfig& cfg);

/// Runs replication `rep` for horizon T. Seeds derive from
/// mix_seed(master_seed, rep) only.
RegretTrace run_episode(const ExperimentConfig& cfg, std::uint64_t horizon, std::size_t rep);

struct Interval {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

/// Mean with a 95% normal-approximation interval.
Interval mean_ci(const std::vector<double>& values);

struct CheckpointStats {
  std::uint64_t t = 0;
  Interval reward;
  Interval pseudo_regret;
  Interval empirical_regret;
};

struct HorizonSummary {
  std::uint64_t horizon = 0;
  std::vector<CheckpointStats> checkpoints;
  std::vector<RegretTrace> traces;
  std::optional<double> theoretical_upper_bound;
  std::optional<double> lower_bound_reference;

  const CheckpointStats& final() const { return checkpoints.back(); }
};

struct SlopeFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

struct ExperimentSummary {
  ExperimentConfig config;
  std::vector<HorizonSummary> horizons;
  std::optional<SlopeFit> fit;  // over final mean pseudo-regret
};

/// Worker count: TRADE_LAB_THREADS when set, else the hardware concurrency.
std::size_t worker_threads();

/// Runs every (horizon, replication) pair, in parallel across replications.
ExperimentSummary replicate_and_aggregate(const ExperimentConfig& cfg);

/// Least squares of ln y on ln x. Points with x <= 0 or y <= 0 are dropped;
/// throws ContractViolation when fewer than 3 remain.
SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Upper bound for the configuration's algorithm at horizon T, if one applies.
std::optional<double> theoretical_upper_bound(const ExperimentConfig& cfg, std::uint64_t horizon);
/// constant * T^exponent of the matching lower bound row, if one applies.
std::optional<double> lower_bound_reference(const ExperimentConfig& cfg, std::uint64_t horizon);

/// run_id, rep, t, cumulative_reward, pseudo_regret, empirical_regret.
void write_trace_csv(std::ostream& out, const ExperimentSummary& summary);
/// T, mean_pseudo_regret, ci_lo, ci_hi, theoretical_upper_bound,
/// lower_bound_reference. Missing bounds are written as NA.
void write_summary_csv(std::ostream& out, const ExperimentSummary& summary);

/// Fixed-format number rendering shared by every CSV writer.
std::string format_number(double value);

}  // namespace tradelab
