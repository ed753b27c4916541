#include "tradelab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

#include "tradelab/adversary.hpp"
#include "tradelab/bandits.hpp"
#include "tradelab/oracle.hpp"

namespace tradelab {

// ---------------------------------------------------------------------------
// Environments

double EnvSpec::param(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

const std::vector<std::string>& environment_families() {
  static const std::vector<std::string> families{
      "uniform_iid", "sqrt_lower", "t23_lower",      "bd_lower",       "needle",
      "footnote",    "one_bit_uniform", "one_bit_smooth", "adversarial"};
  return families;
}

std::vector<std::string> environment_parameters(const std::string& family) {
  if (family == "sqrt_lower" || family == "t23_lower" || family == "footnote") return {"eps"};
  if (family == "bd_lower") return {"lambda"};
  if (family == "needle") return {"x"};
  if (family == "adversarial") return {"eps", "probe_budget"};
  if (family == "uniform_iid" || family == "one_bit_uniform" || family == "one_bit_smooth") {
    return {};
  }
  throw ConfigError("unknown environment family '" + family + "'");
}

namespace {

void check_env_params(const EnvSpec& spec) {
  const auto allowed = environment_parameters(spec.family);
  for (const auto& [key, value] : spec.params) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("environment '" + spec.family + "' has no parameter '" + key + "'");
    }
    if (!std::isfinite(value)) throw ConfigError("environment parameter '" + key + "' is not finite");
  }
}

double required_param(const EnvSpec& spec, const std::string& key) {
  const auto it = spec.params.find(key);
  if (it == spec.params.end()) {
    throw ConfigError("environment '" + spec.family + "' needs parameter '" + key + "'");
  }
  return it->second;
}

}  // namespace

PairDistribution make_environment(const EnvSpec& spec) {
  check_env_params(spec);
  try {
    if (spec.family == "uniform_iid") return uniform_iid();
    if (spec.family == "sqrt_lower") return sqrt_lower_instance(required_param(spec, "eps"));
    if (spec.family == "t23_lower") return t23_lower_instance(required_param(spec, "eps"));
    if (spec.family == "bd_lower") return bd_lower_instance(required_param(spec, "lambda"));
    if (spec.family == "needle") return needle_instance(required_param(spec, "x"));
    if (spec.family == "footnote") return footnote_instance(required_param(spec, "eps"));
    if (spec.family == "one_bit_uniform") return one_bit_pair().first;
    if (spec.family == "one_bit_smooth") return one_bit_pair().second;
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
  if (spec.family == "adversarial") {
    throw ConfigError("the adversarial environment has no valuation distribution");
  }
  throw ConfigError("unknown environment family '" + spec.family + "'");
}

// ---------------------------------------------------------------------------
// Strategies

const std::vector<std::string>& algorithm_families() {
  static const std::vector<std::string> families{
      "fbp",           "fbp_naive",     "scouting_bandits", "scouting_blindits",
      "fixed_price",   "best_fixed_price", "median_mechanism", "single_sample",
      "random_price"};
  return families;
}

namespace {

ScoutingParams resolve_params(const AlgoSpec& algo, std::uint64_t horizon) {
  const ScoutingParams tuned = algo.family == "scouting_blindits"
                                   ? scouting_blindits_tuning(horizon)
                                   : scouting_bandits_tuning(horizon, algo.density_bound);
  return {algo.exploration_rounds.value_or(tuned.exploration_rounds),
          algo.grid_size.value_or(tuned.grid_size)};
}

const PairDistribution& need_env(const PairDistribution* env, const std::string& family) {
  if (env == nullptr) {
    throw ConfigError(family + " needs a stochastic environment");
  }
  return *env;
}

}  // namespace

StrategyFactory make_strategy_factory(const AlgoSpec& algo, const PairDistribution* env) {
  const std::string& f = algo.family;
  if (f == "fbp") return [](std::uint64_t) { return fbp_new(FollowTheBestPrice::Mode::tree); };
  if (f == "fbp_naive") {
    return [](std::uint64_t) { return fbp_new(FollowTheBestPrice::Mode::naive); };
  }
  if (f == "scouting_bandits") {
    BanditFactory bandit = bandit_factory_by_name(algo.bandit);
    return [algo, bandit](std::uint64_t horizon) {
      const ScoutingParams params = resolve_params(algo, horizon);
      const std::uint64_t rest =
          horizon > params.exploration_rounds ? horizon - params.exploration_rounds : 1;
      return scouting_bandits_new(params, bandit, rest);
    };
  }
  if (f == "scouting_blindits") {
    return [algo](std::uint64_t horizon) {
      return scouting_blindits_new(resolve_params(algo, horizon));
    };
  }
  if (f == "fixed_price") {
    if (!algo.price) throw ConfigError("fixed_price needs a price");
    if (!(*algo.price >= 0.0 && *algo.price <= 1.0)) {
      throw ConfigError("fixed_price price must lie in [0,1]");
    }
    const Price p(*algo.price);
    return [p](std::uint64_t) { return fixed_price_new(p); };
  }
  if (f == "best_fixed_price") {
    const Price p = best_price(need_env(env, f)).price;
    return [p](std::uint64_t) -> std::unique_ptr<Strategy> {
      return std::make_unique<FixedPrice>(p, "best_fixed_price");
    };
  }
  if (f == "median_mechanism") {
    const Price m(need_env(env, f).seller_median());
    return [m](std::uint64_t) { return median_mechanism_new(m); };
  }
  if (f == "single_sample") return [](std::uint64_t) { return single_sample_new(); };
  if (f == "random_price") return [](std::uint64_t) { return random_price_new(); };
  throw ConfigError("unknown algorithm family '" + f + "'");
}

std::unique_ptr<Strategy> make_strategy(const ExperimentConfig& cfg, std::uint64_t horizon,
                                        const PairDistribution* env) {
  StrategyFactory factory = make_strategy_factory(cfg.algo, env);
  std::unique_ptr<Strategy> strategy = cfg.algo.known_horizon
                                           ? factory(horizon)
                                           : std::make_unique<DoublingTrick>(factory);
  if (cfg.algo.adapt_feedback && strategy->required_feedback() != FeedbackKind::full) {
    strategy = std::make_unique<FullFeedbackAdapter>(std::move(strategy));
  }
  return strategy;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.horizons.empty()) throw ConfigError("horizons must not be empty");
  for (std::size_t i = 0; i < cfg.horizons.size(); ++i) {
    if (cfg.horizons[i] == 0) throw ConfigError("horizons must be positive");
    if (i > 0 && cfg.horizons[i] <= cfg.horizons[i - 1]) {
      throw ConfigError("horizons must be sorted ascending without repeats");
    }
  }
  if (cfg.replications == 0) throw ConfigError("replications must be at least 1");
  const auto& envs = environment_families();
  if (std::find(envs.begin(), envs.end(), cfg.env.family) == envs.end()) {
    throw ConfigError("unknown environment family '" + cfg.env.family + "'");
  }
  check_env_params(cfg.env);
  if (cfg.env.adversarial()) {
    const double budget = cfg.env.param("probe_budget", 1.0);
    if (!(budget >= 1.0) || budget != std::floor(budget)) {
      throw ConfigError("probe_budget must be a positive integer");
    }
    const double eps = cfg.env.param("eps", 0.03);
    if (!(eps > 0.0 && eps < 1.0 / 18.0)) throw ConfigError("adversary eps must lie in (0, 1/18)");
  }
  const auto& algos = algorithm_families();
  if (std::find(algos.begin(), algos.end(), cfg.algo.family) == algos.end()) {
    throw ConfigError("unknown algorithm family '" + cfg.algo.family + "'");
  }
  if (cfg.algo.exploration_rounds && *cfg.algo.exploration_rounds == 0) {
    throw ConfigError("exploration_rounds must be at least 1");
  }
  if (cfg.algo.grid_size && *cfg.algo.grid_size == 0) {
    throw ConfigError("grid_size must be at least 1");
  }
}

FeedbackKind resolve_feedback(const ExperimentConfig& cfg) {
  validate(cfg);
  std::optional<PairDistribution> env;
  if (!cfg.env.adversarial()) env.emplace(make_environment(cfg.env));
  const auto probe = make_strategy(cfg, cfg.horizons.front(), env ? &*env : nullptr);
  const FeedbackKind consumes = probe->required_feedback();
  if (cfg.env.adversarial()) {
    if (cfg.feedback && *cfg.feedback != FeedbackKind::full) {
      throw ConfigError("feedback mismatch: the adversarial environment reveals full feedback");
    }
    if (consumes != FeedbackKind::full) {
      throw ConfigError("feedback mismatch: " + probe->name() + " consumes " +
                        std::string(to_string(consumes)) +
                        " feedback but the adversary plays the full-feedback game; set "
                        "adapt_feedback to wrap it");
    }
    return FeedbackKind::full;
  }
  const FeedbackKind reveals = cfg.feedback.value_or(consumes);
  if (reveals != consumes) {
    throw ConfigError("feedback mismatch: " + probe->name() + " consumes " +
                      std::string(to_string(consumes)) + " feedback but the environment reveals " +
                      std::string(to_string(reveals)));
  }
  return reveals;
}

// ---------------------------------------------------------------------------
// Episodes

std::vector<std::uint64_t> default_checkpoints(std::uint64_t horizon) {
  std::set<std::uint64_t> points{horizon};
  for (std::uint64_t t = horizon / 2; t > 0; t /= 2) points.insert(t);
  return {points.begin(), points.end()};
}

namespace {

std::vector<std::uint64_t> checkpoints_for(const ExperimentConfig& cfg, std::uint64_t horizon) {
  if (cfg.checkpoints.empty()) return default_checkpoints(horizon);
  std::set<std::uint64_t> points{horizon};
  for (auto t : cfg.checkpoints) {
    if (t >= 1 && t <= horizon) points.insert(t);
  }
  return {points.begin(), points.end()};
}

std::string run_id_for(const ExperimentConfig& cfg, std::uint64_t horizon) {
  return cfg.name + "_T" + std::to_string(horizon);
}

}  // namespace

RegretTrace run_episode(const ExperimentConfig& cfg, std::uint64_t horizon, std::size_t rep) {
  const FeedbackKind reveals = resolve_feedback(cfg);
  const std::uint64_t seed = mix_seed(cfg.master_seed, rep);
  Rng env_rng(mix_seed(seed, 1));
  Rng strategy_rng(mix_seed(seed, 2));

  std::optional<PairDistribution> env;
  std::optional<ObliviousAdversary> adversary;
  double best_value = 0.0;
  if (cfg.env.adversarial()) {
    const double budget = cfg.env.param("probe_budget", 1.0);
    const double eps = cfg.env.param("eps", 0.03);
    SnapshotFactory mirror = [&cfg, horizon] { return make_strategy(cfg, horizon, nullptr); };
    adversary.emplace(eps, mirror, static_cast<std::size_t>(budget), mix_seed(seed, 3));
  } else {
    env.emplace(make_environment(cfg.env));
    best_value = best_price(*env).value;
  }
  const PairDistribution* env_ptr = env ? &*env : nullptr;
  auto strategy = make_strategy(cfg, horizon, env_ptr);

  RegretTrace trace;
  trace.run_id = run_id_for(cfg, horizon);
  trace.rep = rep;
  trace.horizon = horizon;
  trace.seed = seed;
  trace.env_name = env ? env->name() : "adversarial";
  trace.algo_name = strategy->name();

  const auto checkpoints = checkpoints_for(cfg, horizon);
  std::size_t next_checkpoint = 0;
  std::vector<ValuationPair> realized;
  if (cfg.empirical_regret) realized.reserve(horizon);

  double reward = 0.0;
  double pseudo = 0.0;
  double benchmark = 0.0;  // adversarial: gain of the common price
  std::optional<PricePair> cached_post;
  double cached_value = 0.0;

  for (std::uint64_t t = 1; t <= horizon; ++t) {
    const ValuationPair v = adversary ? adversary->next() : env->sample(env_rng);
    const PricePair post = strategy->next_post(strategy_rng);
    reward += gft_wbb(post, v);
    if (adversary) {
      benchmark += std::max(0.0, v.b - v.s);
      pseudo = benchmark - reward;
    } else {
      if (!cached_post || !(*cached_post == post)) {
        cached_post = post;
        cached_value = env->expected_gft_wbb(post);
      }
      pseudo += best_value - cached_value;
    }
    strategy->observe(make_feedback_wbb(reveals, post, v));
    if (cfg.empirical_regret) realized.push_back(v);

    if (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] == t) {
      TracePoint point{t, reward, pseudo, 0.0};
      if (cfg.empirical_regret) {
        point.empirical_regret = empirical_best_in_hindsight(realized).total - reward;
      }
      trace.points.push_back(point);
      ++next_checkpoint;
    }
  }
  if (adversary) trace.common_price = adversary->state().common_price().value();
  return trace;
}

// ---------------------------------------------------------------------------
// Aggregation

Interval mean_ci(const std::vector<double>& values) {
  if (values.empty()) return {};
  const auto n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double x : values) mean += x;
  mean /= n;
  if (values.size() == 1) return {mean, mean, mean};
  double ss = 0.0;
  for (double x : values) ss += (x - mean) * (x - mean);
  const double half = 1.959963984540054 * std::sqrt(ss / (n - 1.0) / n);
  return {mean, mean - half, mean + half};
}

std::size_t worker_threads() {
  if (const char* env = std::getenv("TRADE_LAB_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value >= 1) return static_cast<std::size_t>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentSummary replicate_and_aggregate(const ExperimentConfig& cfg) {
  resolve_feedback(cfg);

  struct Job {
    std::size_t horizon_index;
    std::size_t rep;
  };
  std::vector<Job> jobs;
  for (std::size_t h = 0; h < cfg.horizons.size(); ++h) {
    for (std::size_t r = 0; r < cfg.replications; ++r) jobs.push_back({h, r});
  }
  std::vector<RegretTrace> traces(jobs.size());
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = cursor++; i < jobs.size(); i = cursor++) {
      try {
        traces[i] = run_episode(cfg, cfg.horizons[jobs[i].horizon_index], jobs[i].rep);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(worker_threads(), jobs.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentSummary summary;
  summary.config = cfg;
  for (std::size_t h = 0; h < cfg.horizons.size(); ++h) {
    HorizonSummary hs;
    hs.horizon = cfg.horizons[h];
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].horizon_index == h) hs.traces.push_back(std::move(traces[i]));
    }
    const std::size_t points = hs.traces.front().points.size();
    for (std::size_t k = 0; k < points; ++k) {
      std::vector<double> rewards;
      std::vector<double> pseudo;
      std::vector<double> empirical;
      for (const auto& tr : hs.traces) {
        rewards.push_back(tr.points[k].cumulative_reward);
        pseudo.push_back(tr.points[k].pseudo_regret);
        empirical.push_back(tr.points[k].empirical_regret);
      }
      hs.checkpoints.push_back({hs.traces.front().points[k].t, mean_ci(rewards), mean_ci(pseudo),
                                mean_ci(empirical)});
    }
    hs.theoretical_upper_bound = theoretical_upper_bound(cfg, hs.horizon);
    hs.lower_bound_reference = lower_bound_reference(cfg, hs.horizon);
    summary.horizons.push_back(std::move(hs));
  }

  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& hs : summary.horizons) {
    xs.push_back(static_cast<double>(hs.horizon));
    ys.push_back(hs.final().pseudo_regret.mean);
  }
  try {
    summary.fit = fit_slope(xs, ys);
  } catch (const ContractViolation&) {
    summary.fit.reset();
  }
  return summary;
}

SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ContractViolation("fit_slope needs equally long inputs");
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0 && std::isfinite(x[i]) && std::isfinite(y[i])) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 3) throw ContractViolation("fit_slope needs at least 3 positive points");
  const auto n = static_cast<double>(lx.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw ContractViolation("fit_slope needs at least two distinct x values");
  SlopeFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  fit.points = lx.size();
  return fit;
}

// ---------------------------------------------------------------------------
// Reference bounds

std::optional<double> theoretical_upper_bound(const ExperimentConfig& cfg, std::uint64_t horizon) {
  if (cfg.env.adversarial() || !cfg.algo.known_horizon) return std::nullopt;
  const std::string& f = cfg.algo.family;
  if (f == "fbp" || f == "fbp_naive") return bound_fbp(horizon);
  if (f != "scouting_bandits" && f != "scouting_blindits") return std::nullopt;

  const PairDistribution env = make_environment(cfg.env);
  // The Scouting Bandits guarantee needs independent seller and buyer values.
  if (f == "scouting_bandits" && !std::holds_alternative<IndependentProduct>(env.law())) {
    return std::nullopt;
  }
  std::optional<double> m = cfg.bound_density;
  if (!m) m = env.density_bound();
  if (!m) return std::nullopt;
  const ScoutingParams params = resolve_params(cfg.algo, horizon);
  if (f == "scouting_blindits") {
    return bound_sbl(horizon, params.exploration_rounds, params.grid_size, *m);
  }
  if (cfg.algo.bandit != "moss") return std::nullopt;
  return bound_sb(horizon, params.exploration_rounds, params.grid_size, *m);
}

std::optional<double> lower_bound_reference(const ExperimentConfig& cfg, std::uint64_t horizon) {
  std::string regime;
  if (cfg.lower_bound_regime) {
    regime = *cfg.lower_bound_regime;
  } else if (cfg.env.adversarial()) {
    regime = "full_adversarial";
  } else {
    const FeedbackKind fb = resolve_feedback(cfg);
    if (fb == FeedbackKind::full) {
      regime = "full_iid";
    } else if (fb == FeedbackKind::realistic) {
      if (cfg.env.family == "bd_lower") {
        regime = "realistic_correlated_bounded_density";
      } else if (cfg.env.family == "needle" || cfg.env.family == "footnote") {
        regime = "realistic_iid_unbounded_density";
      } else {
        regime = "realistic_iid_bounded_density";
      }
    } else {
      return std::nullopt;
    }
  }
  for (const auto& row : lower_bound_constants()) {
    if (row.regime == regime) {
      return row.constant * std::pow(static_cast<double>(horizon), row.exponent);
    }
  }
  throw ConfigError("unknown lower bound regime '" + regime + "'");
}

// ---------------------------------------------------------------------------
// CSV

std::string format_number(double value) {
  if (std::isnan(value)) return "NA";
  if (value == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_trace_csv(std::ostream& out, const ExperimentSummary& summary) {
  out << "run_id,rep,t,cumulative_reward,pseudo_regret,empirical_regret\n";
  for (const auto& hs : summary.horizons) {
    for (const auto& tr : hs.traces) {
      for (const auto& p : tr.points) {
        out << tr.run_id << ',' << tr.rep << ',' << p.t << ',' << format_number(p.cumulative_reward)
            << ',' << format_number(p.pseudo_regret) << ','
            << (summary.config.empirical_regret ? format_number(p.empirical_regret) : "NA")
            << '\n';
      }
    }
  }
}

void write_summary_csv(std::ostream& out, const ExperimentSummary& summary) {
  out << "T,mean_pseudo_regret,ci_lo,ci_hi,theoretical_upper_bound,lower_bound_reference\n";
  const auto opt = [](const std::optional<double>& v) {
    return v ? format_number(*v) : std::string("NA");
  };
  for (const auto& hs : summary.horizons) {
    const auto& fin = hs.final().pseudo_regret;
    out << hs.horizon << ',' << format_number(fin.mean) << ',' << format_number(fin.lo) << ','
        << format_number(fin.hi) << ',' << opt(hs.theoretical_upper_bound) << ','
        << opt(hs.lower_bound_reference) << '\n';
  }
}

}  // namespace tradelab
