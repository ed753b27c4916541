#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>

#include "doctest.h"
#include "tradelab/config.hpp"
#include "tradelab/harness.hpp"
#include "tradelab/oracle.hpp"

using namespace tradelab;
using doctest::Approx;

namespace {

ExperimentConfig experiment(const std::string& env, const std::string& algo,
                            std::vector<std::uint64_t> horizons, std::size_t reps) {
  ExperimentConfig cfg;
  cfg.name = "t";
  cfg.env = parse_env_spec(env);
  cfg.algo = parse_algo_spec(algo);
  cfg.horizons = std::move(horizons);
  cfg.replications = reps;
  cfg.master_seed = 42;
  return cfg;
}

std::string csv_of(const ExperimentSummary& summary) {
  std::ostringstream out;
  write_trace_csv(out, summary);
  write_summary_csv(out, summary);
  return out.str();
}

double width(const Interval& i) { return i.hi - i.lo; }

std::string config_error(const std::string& json_text) {
  try {
    parse_run_config(json_text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("posting the population optimum has zero pseudo-regret") {
  for (const char* env : {"uniform_iid", R"({"family":"t23_lower","eps":0.7})",
                          R"({"family":"bd_lower","lambda":1})", R"({"family":"needle","x":0.3})"}) {
    CAPTURE(env);
    const auto trace = run_episode(experiment(env, "best_fixed_price", {5000}, 1), 5000, 0);
    for (const auto& point : trace.points) REQUIRE(std::abs(point.pseudo_regret) <= 1e-9);
  }
}

TEST_CASE("fixed price zero on the uniform square loses 0.125 per round") {
  const auto cfg = experiment("uniform_iid", R"({"family":"fixed_price","price":0})", {10000}, 1);
  const auto trace = run_episode(cfg, 10000, 0);
  CHECK(trace.points.back().t == 10000);
  CHECK(trace.points.back().pseudo_regret == Approx(1250.0).epsilon(1e-12));
  CHECK(trace.points.back().cumulative_reward == 0.0);
}

TEST_CASE("FBP on the uniform square stays in the sublinear band") {
  const auto summary = replicate_and_aggregate(experiment("uniform_iid", "fbp", {16384}, 20));
  const double mean = summary.horizons.front().final().pseudo_regret.mean;
  CHECK(mean >= 1.0);
  CHECK(mean <= 200.0);
}

TEST_CASE("one replication: the summary is the trace") {
  const auto cfg = experiment(R"({"family":"t23_lower","eps":0.3})", "scouting_bandits", {3000}, 1);
  const auto summary = replicate_and_aggregate(cfg);
  const auto& h = summary.horizons.front();
  REQUIRE(h.traces.size() == 1);
  REQUIRE(h.checkpoints.size() == h.traces[0].points.size());
  for (std::size_t i = 0; i < h.checkpoints.size(); ++i) {
    const auto& point = h.traces[0].points[i];
    CHECK(h.checkpoints[i].t == point.t);
    CHECK(h.checkpoints[i].pseudo_regret.mean == point.pseudo_regret);
    CHECK(h.checkpoints[i].pseudo_regret.lo == point.pseudo_regret);
    CHECK(h.checkpoints[i].empirical_regret.mean == point.empirical_regret);
    CHECK(h.checkpoints[i].reward.mean == point.cumulative_reward);
  }
}

TEST_CASE("same seed, same output, regardless of thread count") {
  const auto cfg = experiment("uniform_iid", "single_sample", {500, 2000}, 6);
  ::setenv("TRADE_LAB_THREADS", "1", 1);
  const std::string serial = csv_of(replicate_and_aggregate(cfg));
  ::setenv("TRADE_LAB_THREADS", "4", 1);
  const std::string parallel = csv_of(replicate_and_aggregate(cfg));
  const std::string again = csv_of(replicate_and_aggregate(cfg));
  ::unsetenv("TRADE_LAB_THREADS");
  CHECK(serial == parallel);
  CHECK(parallel == again);
  auto other = cfg;
  other.master_seed = 43;
  CHECK(csv_of(replicate_and_aggregate(other)) != serial);
}

TEST_CASE("a trace depends only on (seed, rep)") {
  const auto cfg = experiment(R"({"family":"t23_lower","eps":0.3})", "scouting_bandits", {2000}, 3);
  const auto a = run_episode(cfg, 2000, 2);
  const auto b = run_episode(cfg, 2000, 2);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].pseudo_regret == b.points[i].pseudo_regret);
    CHECK(a.points[i].empirical_regret == b.points[i].empirical_regret);
  }
  CHECK(a.seed == b.seed);
  CHECK(a.seed != run_episode(cfg, 2000, 1).seed);
}

TEST_CASE("confidence interval halves from 20 to 80 replications") {
  auto cfg = experiment("uniform_iid", "random_price", {1000}, 20);
  cfg.empirical_regret = false;
  const double w20 = width(replicate_and_aggregate(cfg).horizons[0].final().pseudo_regret);
  cfg.replications = 80;
  const double w80 = width(replicate_and_aggregate(cfg).horizons[0].final().pseudo_regret);
  CHECK(w20 / w80 >= 2.0 * 0.8);
  CHECK(w20 / w80 <= 2.0 * 1.2);
}

TEST_CASE("fit_slope") {
  std::vector<double> xs;
  std::vector<double> root;
  std::vector<double> linear;
  for (double t = 1000; t <= 1e6; t *= 10) {
    xs.push_back(t);
    root.push_back(3.0 * std::sqrt(t));
    linear.push_back(t);
  }
  const auto a = fit_slope(xs, root);
  CHECK(a.exponent == Approx(0.5).epsilon(1e-9));
  CHECK(std::exp(a.intercept) == Approx(3.0).epsilon(1e-9));
  CHECK(a.r_squared == Approx(1.0));
  CHECK(fit_slope(xs, linear).exponent == Approx(1.0).epsilon(1e-9));

  std::vector<double> with_zero = root;
  with_zero[0] = 0.0;
  CHECK(fit_slope(xs, with_zero).points == 3);
  with_zero[1] = -1.0;
  CHECK_THROWS_AS(fit_slope(xs, with_zero), ContractViolation);
}

TEST_CASE("regret sign invariants") {
  const std::vector<std::pair<const char*, const char*>> runs = {
      {"uniform_iid", "fbp"},
      {R"({"family":"t23_lower","eps":-0.3})", "scouting_bandits"},
      {R"({"family":"bd_lower","lambda":0.5})", "scouting_blindits"},
      {R"({"family":"needle","x":0.4871})", "single_sample"},
      {R"({"family":"sqrt_lower","eps":0.5})", "random_price"},
      {R"({"family":"footnote","eps":0.01})", "median_mechanism"},
      {R"({"family":"one_bit_smooth"})", R"({"family":"fixed_price","price":0.3})"}};
  for (const auto& [env, algo] : runs) {
    CAPTURE(env);
    CAPTURE(algo);
    const auto cfg = experiment(env, algo, {4000}, 2);
    const bool fixed = std::string(algo).find("fixed_price") != std::string::npos ||
                       std::string(algo) == "median_mechanism";
    for (std::size_t rep = 0; rep < 2; ++rep) {
      const auto trace = run_episode(cfg, 4000, rep);
      for (const auto& point : trace.points) {
        REQUIRE(point.pseudo_regret >= -1e-9);
        if (fixed) REQUIRE(point.empirical_regret >= -1e-9);
      }
    }
  }
}

TEST_CASE("feedback mismatches are rejected before any round") {
  auto cfg = experiment(R"({"family":"t23_lower","eps":0.3})", "scouting_bandits", {100}, 1);
  cfg.feedback = FeedbackKind::full;
  CHECK_THROWS_WITH_AS(resolve_feedback(cfg), doctest::Contains("feedback mismatch"), ConfigError);
  CHECK_THROWS_AS(run_episode(cfg, 100, 0), ConfigError);
  cfg.algo.adapt_feedback = true;
  CHECK(resolve_feedback(cfg) == FeedbackKind::full);
  CHECK_NOTHROW(run_episode(cfg, 100, 0));

  auto adv = experiment(R"({"family":"adversarial","eps":0.03,"probe_budget":1})", "scouting_bandits",
                        {100}, 1);
  CHECK_THROWS_AS(resolve_feedback(adv), ConfigError);
  adv.algo.adapt_feedback = true;
  CHECK(resolve_feedback(adv) == FeedbackKind::full);

  auto fbp = experiment("uniform_iid", "fbp", {100}, 1);
  CHECK(resolve_feedback(fbp) == FeedbackKind::full);
  fbp.feedback = FeedbackKind::realistic;
  CHECK_THROWS_AS(resolve_feedback(fbp), ConfigError);
}

TEST_CASE("adversarial runs report the common price") {
  const auto cfg =
      experiment(R"({"family":"adversarial","eps":0.03,"probe_budget":1})", "fbp", {1000}, 1);
  const auto trace = run_episode(cfg, 1000, 0);
  REQUIRE(trace.common_price.has_value());
  CHECK(trace.points.back().pseudo_regret >= 0.2 * 1000);
}

TEST_CASE("unknown horizon runs through the doubling wrapper") {
  auto cfg = experiment(R"({"family":"t23_lower","eps":0.3})",
                        R"({"family":"scouting_bandits","horizon":"unknown"})", {3000}, 1);
  const auto strategy = make_strategy(cfg, 3000, nullptr);
  CHECK(strategy->name().rfind("doubling(", 0) == 0);
  const auto trace = run_episode(cfg, 3000, 0);
  CHECK(trace.points.back().t == 3000);
  CHECK_FALSE(theoretical_upper_bound(cfg, 3000).has_value());
}

TEST_CASE("default checkpoints") {
  CHECK(default_checkpoints(10) == std::vector<std::uint64_t>{1, 2, 5, 10});
  CHECK(default_checkpoints(1) == std::vector<std::uint64_t>{1});
  const auto cps = default_checkpoints(1 << 10);
  CHECK(cps.size() == 11);
  CHECK(cps.back() == 1024);
}

TEST_CASE("reference bounds in the summary") {
  auto cfg = experiment("uniform_iid", "fbp", {1024}, 1);
  CHECK(*theoretical_upper_bound(cfg, 1024) == Approx(bound_fbp(1024)));
  auto sb = experiment(R"({"family":"t23_lower","eps":0.3})", "scouting_bandits", {1000}, 1);
  CHECK(theoretical_upper_bound(sb, 1000).has_value());
  CHECK(lower_bound_reference(sb, 1000).has_value());
}

TEST_CASE("format_number") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(std::nan("")) == "NA");
  CHECK(format_number(1250.0) == "1250");
  CHECK(format_number(0.1) == "0.1");
}

TEST_CASE("config: minimal form and aliases") {
  const auto run = parse_run_config(
      R"({"env":"uniform_iid","algo":"fbp","T":[4096],"reps":5,"seed":1})");
  REQUIRE(run.experiments.size() == 1);
  const auto& e = run.experiments[0];
  CHECK(e.env.family == "uniform_iid");
  CHECK(e.algo.family == "fbp");
  CHECK(e.horizons == std::vector<std::uint64_t>{4096});
  CHECK(e.replications == 5);
  CHECK(e.master_seed == 1);
  CHECK_FALSE(e.feedback.has_value());

  const auto full = parse_run_config(R"({
    "schema_version": 1, "output_dir": "out",
    "experiments": [
      {"name": "a", "env": "t23_lower", "eps": 0.3,
       "algo": {"family": "scouting_bandits", "T0": "auto", "K": 7, "bandit": "ucb1"},
       "feedback": "realistic", "horizons": [100, 1000], "replications": 2, "master_seed": 0},
      {"name": "b", "env": {"family": "adversarial", "eps": 0.03, "probe_budget": 1},
       "algo": "fbp", "T": 50}
    ]})");
  REQUIRE(full.experiments.size() == 2);
  CHECK(full.output_dir == "out");
  const auto& a = full.experiments[0];
  CHECK(a.env.param("eps", 0) == 0.3);
  CHECK_FALSE(a.algo.exploration_rounds.has_value());
  CHECK(*a.algo.grid_size == 7);
  CHECK(a.algo.bandit == "ucb1");
  CHECK(*a.feedback == FeedbackKind::realistic);
  CHECK(full.experiments[1].env.adversarial());
  CHECK(full.experiments[1].env.param("probe_budget", 0) == 1);
}

TEST_CASE("config: field-level errors") {
  CHECK(config_error(R"({"experiments":[{"env":"uniform_iid","algo":"fbp","T":[10],"reps":0}]})") ==
        "experiments[0].reps: expected a positive integer");
  CHECK(config_error(R"({"env":"uniform_iid","algo":"fbp","T":[10],"colour":1})") ==
        "colour: unknown field");
  CHECK(config_error(R"({"env":"uniform_iid","algo":"fbp","T":[100,10]})") ==
        "T: horizons must be strictly increasing");
  CHECK(config_error(R"({"env":"uniform_iid","algo":"fbp"})") == "T: missing");
  CHECK(config_error(R"({"env":"uniform_iid","algo":"fbp","T":10,"feedback":"some"})")
            .rfind("feedback: unknown kind", 0) == 0);
  CHECK(config_error(R"({"env":"moon","algo":"fbp","T":10})").rfind("env: unknown family", 0) == 0);
  CHECK(config_error(R"({"env":{"family":"needle","eps":0.1},"algo":"fbp","T":10})") ==
        "env.eps: not a parameter of needle");
  CHECK(config_error(R"({"env":"uniform_iid","algo":{"family":"fixed_price"},"T":10})") ==
        "algo.price: required for fixed_price");
  CHECK(config_error(R"({"env":"uniform_iid","algo":{"family":"scouting_bandits","K":"many"},"T":10})") ==
        "algo.K: expected \"auto\" or a positive integer");
  CHECK(config_error(R"({"schema_version":2,"env":"uniform_iid","algo":"fbp","T":10})")
            .rfind("schema_version: unsupported", 0) == 0);
  CHECK(config_error("{not json").rfind("config: invalid JSON", 0) == 0);
  CHECK(config_error(R"({"experiments":[{"name":"x","env":"uniform_iid","algo":"fbp","T":1},
                                         {"name":"x","env":"uniform_iid","algo":"fbp","T":1}]})")
            .find("duplicate experiment name") != std::string::npos);
  CHECK_THROWS_AS(load_run_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("config: validation of semantic constraints") {
  auto cfg = experiment("uniform_iid", "fbp", {10}, 1);
  cfg.replications = 0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = experiment("uniform_iid", "fbp", {}, 1);
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = experiment(R"({"family":"adversarial","eps":0.2})", "fbp", {10}, 1);
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  CHECK_THROWS_AS(make_environment(parse_env_spec("adversarial")), ConfigError);
  CHECK_THROWS_AS(make_environment(EnvSpec{"needle", {}}), ConfigError);
}

TEST_CASE("no Scouting Bandits bound on correlated laws") {
  const auto cfg =
      experiment(R"({"family":"bd_lower","lambda":0})", "scouting_bandits", {1000}, 1);
  CHECK_FALSE(theoretical_upper_bound(cfg, 1000).has_value());
  const auto sbl =
      experiment(R"({"family":"bd_lower","lambda":0.5})", "scouting_blindits", {10000}, 1);
  CHECK(theoretical_upper_bound(sbl, 10000).has_value());
}
