#include "tradelab/tradelab.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "tradelab/config.hpp"
#include "tradelab/environments.hpp"
#include "tradelab/harness.hpp"
#include "tradelab/oracle.hpp"
#include "tradelab/strategies.hpp"
#include "tradelab/verify.hpp"

struct tl_env {
  tradelab::PairDistribution law;
};

struct tl_strategy {
  std::unique_ptr<tradelab::Strategy> strategy;
  std::string name;
};

struct tl_rng {
  tradelab::Rng rng;
};

namespace {

using namespace tradelab;

thread_local std::string last_error;

struct InvalidArgument : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class F>
tl_status guard(F&& body) {
  try {
    body();
    return TL_OK;
  } catch (const InvalidArgument& e) {
    last_error = e.what();
    return TL_ERR_INVALID_ARGUMENT;
  } catch (const ConfigError& e) {
    last_error = e.what();
    return TL_ERR_CONFIG;
  } catch (const ContractViolation& e) {
    last_error = e.what();
    return TL_ERR_CONTRACT;
  } catch (const IoFailure& e) {
    last_error = e.what();
    return TL_ERR_IO;
  } catch (const std::exception& e) {
    last_error = e.what();
    return TL_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return TL_ERR_INTERNAL;
  }
}

template <class T>
void require(const T* ptr, const char* what) {
  if (ptr == nullptr) throw InvalidArgument(std::string(what) + " must not be NULL");
}

double unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument(std::string(what) + " must lie in [0,1]");
  return x;
}

void emit(tl_line_callback cb, void* user, const std::string& line) {
  if (cb != nullptr) cb(line.c_str(), user);
}

std::string fixed(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

std::string describe(const ExperimentConfig& cfg) {
  std::string env = cfg.env.family;
  for (const auto& [key, value] : cfg.env.params) env += " " + key + "=" + format_number(value);
  std::string horizons;
  for (auto t : cfg.horizons) horizons += (horizons.empty() ? "" : ",") + std::to_string(t);
  return "experiment " + cfg.name + ": env=" + env + " algo=" + cfg.algo.family +
         " feedback=" + std::string(to_string(resolve_feedback(cfg))) + " T=" + horizons +
         " reps=" + std::to_string(cfg.replications) + " seed=" + std::to_string(cfg.master_seed);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot write " + path.string());
  out << content;
  if (!out) throw IoFailure("failed writing " + path.string());
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(const std::string& text, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v)) {
    throw ConfigError(where + ": '" + text + "' is not a number");
  }
  return v;
}

}  // namespace

extern "C" {

const char* tl_last_error(void) { return last_error.c_str(); }

const char* tl_version(void) { return "1.0.0"; }

tl_status tl_gft(double p, double s, double b, double* out) {
  return guard([&] {
    require(out, "out");
    *out = gft(Price(unit(p, "p")), {unit(s, "s"), unit(b, "b")});
  });
}

tl_status tl_gft_wbb(double p, double p_prime, double s, double b, double* out) {
  return guard([&] {
    require(out, "out");
    if (p > p_prime) throw InvalidArgument("p must not exceed p_prime");
    *out = gft_wbb(PricePair(Price(unit(p, "p")), Price(unit(p_prime, "p_prime"))),
                   {unit(s, "s"), unit(b, "b")});
  });
}

tl_status tl_rng_create(uint64_t seed, tl_rng** out) {
  return guard([&] {
    require(out, "out");
    *out = new tl_rng{Rng(seed)};
  });
}

void tl_rng_destroy(tl_rng* rng) { delete rng; }

tl_status tl_rng_uniform(tl_rng* rng, double* out) {
  return guard([&] {
    require(rng, "rng");
    require(out, "out");
    *out = rng->rng.uniform();
  });
}

tl_status tl_env_create(const char* spec, tl_env** out) {
  return guard([&] {
    require(spec, "spec");
    require(out, "out");
    *out = new tl_env{make_environment(parse_env_spec(spec))};
  });
}

void tl_env_destroy(tl_env* env) { delete env; }

tl_status tl_env_name(const tl_env* env, const char** out) {
  return guard([&] {
    require(env, "env");
    require(out, "out");
    *out = env->law.name().c_str();
  });
}

tl_status tl_env_expected_gft(const tl_env* env, double p, double* out) {
  return guard([&] {
    require(env, "env");
    require(out, "out");
    *out = env->law.expected_gft(Price(unit(p, "p")));
  });
}

tl_status tl_env_expected_gft_wbb(const tl_env* env, double p, double p_prime, double* out) {
  return guard([&] {
    require(env, "env");
    require(out, "out");
    if (p > p_prime) throw InvalidArgument("p must not exceed p_prime");
    *out = env->law.expected_gft_wbb(
        PricePair(Price(unit(p, "p")), Price(unit(p_prime, "p_prime"))));
  });
}

tl_status tl_env_numeric_expected_gft(const tl_env* env, double p, size_t n, double* out) {
  return guard([&] {
    require(env, "env");
    require(out, "out");
    if (n < 1000) throw InvalidArgument("n must be at least 1000");
    *out = numeric_expected_gft(env->law, Price(unit(p, "p")), n).estimate;
  });
}

tl_status tl_env_trade_probability(const tl_env* env, double p, double* out) {
  return guard([&] {
    require(env, "env");
    require(out, "out");
    *out = env->law.trade_probability(unit(p, "p"));
  });
}

tl_status tl_env_best_price(const tl_env* env, double* price, double* value) {
  return guard([&] {
    require(env, "env");
    require(price, "price");
    require(value, "value");
    const BestPrice best = best_price(env->law);
    *price = best.price.value();
    *value = best.value;
  });
}

tl_status tl_env_sample(const tl_env* env, tl_rng* rng, double* s, double* b) {
  return guard([&] {
    require(env, "env");
    require(rng, "rng");
    require(s, "s");
    require(b, "b");
    const ValuationPair v = env->law.sample(rng->rng);
    *s = v.s;
    *b = v.b;
  });
}

tl_status tl_strategy_create(const char* algo, uint64_t horizon, const tl_env* env,
                             tl_strategy** out) {
  return guard([&] {
    require(algo, "algo");
    require(out, "out");
    if (horizon == 0) throw InvalidArgument("horizon must be positive");
    ExperimentConfig cfg;
    cfg.algo = parse_algo_spec(algo);
    auto strategy = make_strategy(cfg, horizon, env != nullptr ? &env->law : nullptr);
    std::string name = strategy->name();
    *out = new tl_strategy{std::move(strategy), std::move(name)};
  });
}

void tl_strategy_destroy(tl_strategy* strategy) { delete strategy; }

tl_status tl_strategy_snapshot(const tl_strategy* strategy, tl_strategy** out) {
  return guard([&] {
    require(strategy, "strategy");
    require(out, "out");
    *out = new tl_strategy{strategy->strategy->snapshot(), strategy->name};
  });
}

tl_status tl_strategy_name(const tl_strategy* strategy, const char** out) {
  return guard([&] {
    require(strategy, "strategy");
    require(out, "out");
    *out = strategy->name.c_str();
  });
}

tl_status tl_strategy_required_feedback(const tl_strategy* strategy, tl_feedback_kind* out) {
  return guard([&] {
    require(strategy, "strategy");
    require(out, "out");
    switch (strategy->strategy->required_feedback()) {
      case FeedbackKind::full:
        *out = TL_FEEDBACK_FULL;
        break;
      case FeedbackKind::realistic:
        *out = TL_FEEDBACK_REALISTIC;
        break;
      case FeedbackKind::trade_bit:
        *out = TL_FEEDBACK_TRADE_BIT;
        break;
      case FeedbackKind::none:
        *out = TL_FEEDBACK_NONE;
        break;
    }
  });
}

tl_status tl_strategy_next_post(tl_strategy* strategy, tl_rng* rng, double* p, double* p_prime) {
  return guard([&] {
    require(strategy, "strategy");
    require(rng, "rng");
    require(p, "p");
    require(p_prime, "p_prime");
    const PricePair post = strategy->strategy->next_post(rng->rng);
    *p = post.p().value();
    *p_prime = post.p_prime().value();
  });
}

tl_status tl_strategy_observe_full(tl_strategy* strategy, double s, double b) {
  return guard([&] {
    require(strategy, "strategy");
    strategy->strategy->observe(FullFeedback{unit(s, "s"), unit(b, "b")});
  });
}

tl_status tl_strategy_observe_realistic(tl_strategy* strategy, int seller_accepts,
                                        int buyer_accepts) {
  return guard([&] {
    require(strategy, "strategy");
    strategy->strategy->observe(RealisticFeedback{seller_accepts != 0, buyer_accepts != 0});
  });
}

tl_status tl_strategy_observe_trade_bit(tl_strategy* strategy, int traded) {
  return guard([&] {
    require(strategy, "strategy");
    strategy->strategy->observe(TradeBitFeedback{traded != 0});
  });
}

tl_status tl_strategy_observe_none(tl_strategy* strategy) {
  return guard([&] {
    require(strategy, "strategy");
    strategy->strategy->observe(NoFeedback{});
  });
}

tl_status tl_run_config_file(const char* path, const char* output_dir, tl_line_callback cb,
                             void* user) {
  return guard([&] {
    require(path, "path");
    const RunConfig run = load_run_config(path);
    // Reject every experiment's wiring before any of them runs.
    for (const auto& cfg : run.experiments) resolve_feedback(cfg);

    const std::filesystem::path dir = output_dir != nullptr ? output_dir : run.output_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoFailure("cannot create " + dir.string() + ": " + ec.message());

    for (const auto& cfg : run.experiments) {
      emit(cb, user, describe(cfg));
      const ExperimentSummary summary = replicate_and_aggregate(cfg);

      std::ostringstream trace;
      write_trace_csv(trace, summary);
      write_file(dir / (cfg.name + "_trace.csv"), trace.str());
      std::ostringstream table;
      write_summary_csv(table, summary);
      write_file(dir / (cfg.name + "_summary.csv"), table.str());

      char line[256];
      std::snprintf(line, sizeof line, "  %10s  %14s  %29s  %14s", "T", "pseudo_regret",
                    "95% CI", "upper_bound");
      emit(cb, user, line);
      for (const auto& hs : summary.horizons) {
        const auto& r = hs.final().pseudo_regret;
        const std::string bound =
            hs.theoretical_upper_bound ? fixed("%.6g", *hs.theoretical_upper_bound) : "NA";
        std::snprintf(line, sizeof line, "  %10llu  %14.6g  [%12.6g, %12.6g]  %14s",
                      static_cast<unsigned long long>(hs.horizon), r.mean, r.lo, r.hi,
                      bound.c_str());
        emit(cb, user, line);
      }
      if (summary.fit) {
        std::snprintf(line, sizeof line, "  fitted exponent %.4f (r^2 %.4f, %zu horizons)",
                      summary.fit->exponent, summary.fit->r_squared, summary.fit->points);
        emit(cb, user, line);
      } else {
        emit(cb, user, "  fitted exponent: NA (needs 3 horizons with positive regret)");
      }
      emit(cb, user, "  wrote " + (dir / (cfg.name + "_trace.csv")).string() + " and " +
                         (dir / (cfg.name + "_summary.csv")).string());
    }
  });
}

tl_status tl_verify(const char* filter, tl_line_callback cb, void* user, int* failures) {
  return guard([&] {
    require(failures, "failures");
    const std::string wanted = filter != nullptr ? filter : "";
    int failed = 0;
    const auto results = run_verification(wanted, [&](const PropertyResult& r) {
      if (!r.passed) ++failed;
      emit(cb, user, std::string(r.passed ? "PASS " : "FAIL ") + r.name + ": " + r.detail);
    });
    if (results.empty()) throw ConfigError("no property matches filter '" + wanted + "'");
    *failures = failed;
  });
}

tl_status tl_verify_list(tl_line_callback cb, void* user) {
  return guard([&] {
    for (const auto& name : verification_properties()) emit(cb, user, name);
  });
}

tl_status tl_plotdata_summary(const char* summary_csv_path, tl_line_callback cb, void* user) {
  return guard([&] {
    require(summary_csv_path, "summary_csv_path");
    std::ifstream in(summary_csv_path);
    if (!in) throw IoFailure(std::string("cannot open ") + summary_csv_path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("summary CSV is empty");
    const auto header = split_csv(line);
    if (header.size() < 2 || header[0] != "T" || header[1] != "mean_pseudo_regret") {
      throw ConfigError("summary CSV header must start with T,mean_pseudo_regret");
    }
    std::vector<std::string> rows;
    rows.emplace_back(
        "T,log10_T,mean_pseudo_regret,log10_mean_pseudo_regret,ref_T_1_2,ref_T_2_3,ref_T_3_4,"
        "ref_T_1");
    std::size_t number = 1;
    while (std::getline(in, line)) {
      ++number;
      if (line.empty()) continue;
      const auto cells = split_csv(line);
      const std::string where = "summary CSV line " + std::to_string(number);
      if (cells.size() != header.size()) throw ConfigError(where + ": wrong number of columns");
      const double t = parse_double(cells[0], where);
      const double regret = parse_double(cells[1], where);
      if (!(t > 0.0)) throw ConfigError(where + ": T must be positive");
      std::string row = format_number(t) + "," + format_number(std::log10(t)) + "," +
                        format_number(regret) + "," +
                        (regret > 0.0 ? format_number(std::log10(regret)) : "NA");
      for (double a : {1.0 / 2.0, 2.0 / 3.0, 3.0 / 4.0, 1.0}) {
        row += "," + format_number(std::pow(t, a));
      }
      rows.push_back(std::move(row));
    }
    if (rows.size() == 1) throw ConfigError("summary CSV has no data rows");
    for (const auto& r : rows) emit(cb, user, r);
  });
}

tl_status tl_plotdata_curve(const char* env_spec, int points, tl_line_callback cb, void* user) {
  return guard([&] {
    require(env_spec, "env_spec");
    if (points < 2) throw InvalidArgument("points must be at least 2");
    const PairDistribution law = make_environment(parse_env_spec(env_spec));
    emit(cb, user, "p,expected_gft");
    for (int i = 0; i < points; ++i) {
      const double p = static_cast<double>(i) / (points - 1);
      emit(cb, user, format_number(p) + "," + format_number(law.expected_gft(Price(p))));
    }
  });
}

tl_status tl_bounds_table(const uint64_t* horizons, size_t count, double density_bound,
                          tl_line_callback cb, void* user) {
  return guard([&] {
    if (count > 0) require(horizons, "horizons");
    if (!(density_bound > 0.0)) throw InvalidArgument("density_bound must be positive");
    emit(cb, user, "T,bound_fbp,sb_T0,sb_K,bound_sb,sbl_T0,sbl_K,bound_sbl");
    for (size_t i = 0; i < count; ++i) {
      const uint64_t t = horizons[i];
      if (t < 2) throw InvalidArgument("horizons must be at least 2");
      const ScoutingParams sb = scouting_bandits_tuning(t);
      const ScoutingParams sbl = scouting_blindits_tuning(t);
      emit(cb, user,
           std::to_string(t) + "," + format_number(bound_fbp(t)) + "," +
               std::to_string(sb.exploration_rounds) + "," + std::to_string(sb.grid_size) + "," +
               format_number(bound_sb(t, sb.exploration_rounds, sb.grid_size, density_bound)) +
               "," + std::to_string(sbl.exploration_rounds) + "," +
               std::to_string(sbl.grid_size) + "," +
               format_number(
                   bound_sbl(t, sbl.exploration_rounds, sbl.grid_size, density_bound)));
    }
    emit(cb, user, "");
    emit(cb, user, "regime,rate,constant");
    for (const auto& row : lower_bound_constants()) {
      emit(cb, user, row.regime + "," + row.rate + "," + format_number(row.constant));
    }
  });
}

}  // extern "C"
