#include "tradelab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tradelab/environments.hpp"
#include "tradelab/interval_index.hpp"
#include "tradelab/oracle.hpp"
#include "tradelab/strategies.hpp"

namespace tradelab {

namespace {

constexpr int kGridPoints = 1001;

double grid_point(int i) { return static_cast<double>(i) / (kGridPoints - 1); }

std::string describe(const char* format, double value) {
  char buf[128];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

std::vector<PairDistribution> all_instances() {
  auto [uniform_pair, smooth_pair] = one_bit_pair();
  return {uniform_iid(),
          sqrt_lower_instance(-0.5),
          sqrt_lower_instance(0.0),
          sqrt_lower_instance(0.7),
          t23_lower_instance(-0.7),
          t23_lower_instance(0.3),
          t23_lower_instance(0.7),
          bd_lower_instance(0.0),
          bd_lower_instance(0.5),
          bd_lower_instance(1.0),
          needle_instance(0.4871),
          needle_instance(0.5),
          footnote_instance(0.01),
          uniform_pair,
          smooth_pair};
}

PropertyResult decomposition() {
  Rng rng(20240601);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double p = rng.uniform();
    const double s = rng.uniform();
    const double b = rng.uniform();
    worst = std::max(worst, check_decomposition(p, s, b));
  }
  // Boundary cases where p sits on a valuation.
  for (double x : {0.0, 0.25, 0.5, 1.0}) {
    worst = std::max(worst, check_decomposition(x, x, 1.0));
    worst = std::max(worst, check_decomposition(x, 0.0, x));
    worst = std::max(worst, check_decomposition(x, x, x));
  }
  return {"decomposition", worst <= 1e-12, describe("max residual %.3g over 100000 triples", worst)};
}

PropertyResult lipschitz() {
  const double h = 1.0 / (kGridPoints - 1);
  double worst_ratio = 0.0;
  int checked = 0;
  for (const auto& d : all_instances()) {
    const auto m = d.density_bound();
    if (!m) continue;
    ++checked;
    double prev = d.expected_gft(Price(0.0));
    for (int i = 1; i < kGridPoints; ++i) {
      const double cur = d.expected_gft(Price(grid_point(i)));
      const double allowed = 4.0 * *m * h;
      worst_ratio = std::max(worst_ratio, (std::abs(cur - prev) - 1e-12) / allowed);
      prev = cur;
    }
  }
  return {"lipschitz", worst_ratio <= 1.0,
          describe("largest step / (4 M h) = %.4f", worst_ratio) + " over " +
              std::to_string(checked) + " bounded-density instances"};
}

PropertyResult indistinguishability() {
  const std::vector<PairDistribution> laws{bd_lower_instance(0.0), bd_lower_instance(0.5),
                                           bd_lower_instance(1.0)};
  double worst = 0.0;
  for (int i = 0; i < kGridPoints; ++i) {
    const double p = grid_point(i);
    const auto base = laws[0].quadrant_masses(p);
    for (std::size_t k = 1; k < laws.size(); ++k) {
      const auto other = laws[k].quadrant_masses(p);
      for (std::size_t q = 0; q < base.size(); ++q) {
        worst = std::max(worst, std::abs(base[q] - other[q]));
      }
    }
  }
  // Any fixed price loses at least 1/12 per round on one of the two extremes.
  const double best0 = best_price(laws[0]).value;
  const double best1 = best_price(laws[2]).value;
  std::vector<double> prices = laws[0].breakpoints();
  for (int i = 0; i < kGridPoints; ++i) prices.push_back(grid_point(i));
  double smallest_gap = 1.0;
  for (double p : prices) {
    const double gap = std::max(best0 - laws[0].expected_gft(Price(p)),
                                best1 - laws[2].expected_gft(Price(p)));
    smallest_gap = std::min(smallest_gap, gap);
  }
  const bool ok = worst <= 1e-12 && smallest_gap >= 1.0 / 12.0 - 1e-9;
  return {"indistinguishability", ok,
          describe("quadrant mass difference %.3g", worst) +
              describe(", smallest fixed-price gap %.6f", smallest_gap)};
}

PropertyResult one_bit() {
  const auto [first, second] = one_bit_pair();
  double worst = 0.0;
  for (int i = 0; i < kGridPoints; ++i) {
    const double p = grid_point(i);
    worst = std::max(worst, std::abs(first.trade_probability(p) - second.trade_probability(p)));
  }
  return {"one_bit", worst <= 1e-9, describe("max trade probability difference %.3g", worst)};
}

PropertyResult analytic_vs_numeric() {
  double worst = 0.0;
  std::string worst_name;
  for (const auto& d : all_instances()) {
    for (int i = 0; i < kGridPoints; ++i) {
      const Price p(grid_point(i));
      const double err =
          std::abs(d.expected_gft(p) - numeric_expected_gft(d, p, 10000).estimate);
      if (err > worst) {
        worst = err;
        worst_name = d.name();
      }
    }
  }
  return {"analytic_vs_numeric", worst <= 1e-6,
          describe("max |closed form - numeric| = %.3g", worst) +
              (worst_name.empty() ? "" : " (" + worst_name + ")")};
}

std::vector<std::vector<ValuationPair>> random_streams(std::size_t rounds) {
  std::vector<std::vector<ValuationPair>> streams;
  Rng rng(77);
  const auto t23 = t23_lower_instance(0.3);
  const auto bd = bd_lower_instance(0.5);
  for (int kind = 0; kind < 4; ++kind) {
    std::vector<ValuationPair> stream;
    for (std::size_t t = 0; t < rounds; ++t) {
      switch (kind) {
        case 0:
          stream.push_back({rng.uniform(), rng.uniform()});
          break;
        case 1:  // coarse values: many ties in price and gain
          stream.push_back({std::floor(rng.uniform() * 32.0) / 32.0,
                            std::floor(rng.uniform() * 32.0) / 32.0});
          break;
        case 2:
          stream.push_back(t23.sample(rng));
          break;
        default:
          stream.push_back(bd.sample(rng));
          break;
      }
    }
    streams.push_back(std::move(stream));
  }
  return streams;
}

PropertyResult fbp_structure() {
  std::size_t mismatches = 0;
  std::size_t rounds = 0;
  for (const auto& stream : random_streams(2000)) {
    FollowTheBestPrice tree(FollowTheBestPrice::Mode::tree);
    FollowTheBestPrice naive(FollowTheBestPrice::Mode::naive);
    Rng unused(0);
    for (const auto& v : stream) {
      if (!(tree.next_post(unused) == naive.next_post(unused))) ++mismatches;
      tree.observe(FullFeedback{v.s, v.b});
      naive.observe(FullFeedback{v.s, v.b});
      if (tree.best_value() != naive.best_value()) ++mismatches;
      ++rounds;
    }
  }
  return {"fbp_structure", mismatches == 0,
          std::to_string(mismatches) + " mismatches over " + std::to_string(rounds) + " rounds"};
}

GainUnits total_at(double price, std::span<const ValuationPair> pairs) {
  GainUnits total = 0;
  for (const auto& v : pairs) {
    if (v.s <= price && price <= v.b) total += to_gain_units(v.b - v.s);
  }
  return total;
}

// Both maximizers must reach the same exact total; each reported price must
// attain it. Prices may differ only between tied maximizers.
PropertyResult hindsight_agreement() {
  std::size_t mismatches = 0;
  std::size_t comparisons = 0;
  for (const auto& stream : random_streams(2000)) {
    IntervalIndex index;
    for (std::size_t t = 0; t < stream.size(); ++t) {
      index.add_pair(stream[t]);
      if ((t + 1) % 50 != 0) continue;
      const std::span<const ValuationPair> prefix(stream.data(), t + 1);
      const auto tree = index.argmax();
      const auto sweep = empirical_best_in_hindsight(prefix);
      ++comparisons;
      if (from_gain_units(tree.value) != sweep.total) ++mismatches;
      if (total_at(tree.price, prefix) != tree.value) ++mismatches;
      if (from_gain_units(total_at(sweep.price.value(), prefix)) != sweep.total) ++mismatches;
    }
  }
  return {"hindsight_agreement", mismatches == 0,
          std::to_string(mismatches) + " mismatches over " + std::to_string(comparisons) +
              " prefixes"};
}

struct SampleStats {
  double mean = 0.0;
  double se = 0.0;
};

SampleStats stats(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const auto n = static_cast<double>(xs.size());
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

PropertyResult estimator_unbiasedness() {
  constexpr int kReps = 200;
  constexpr std::size_t kGrid = 5;
  constexpr std::uint64_t kRounds = 200;
  const auto grid = scouting_grid(kGrid);
  double worst_z = 0.0;

  // Realistic feedback scouting on an independent instance.
  {
    const auto d = t23_lower_instance(0.3);
    const auto breaks = d.breakpoints();
    std::vector<std::vector<double>> f(kGrid), g(kGrid);
    for (int rep = 0; rep < kReps; ++rep) {
      ScoutingBandits sb({kRounds, kGrid}, std::make_unique<Moss>(kGrid, 1));
      Rng env_rng(mix_seed(11, rep));
      Rng alg_rng(mix_seed(12, rep));
      for (std::uint64_t t = 0; t < kRounds; ++t) {
        const auto post = sb.next_post(alg_rng);
        sb.observe(make_feedback_wbb(FeedbackKind::realistic, post, d.sample(env_rng)));
      }
      for (std::size_t k = 0; k < kGrid; ++k) {
        f[k].push_back(sb.f_hat()[k]);
        g[k].push_back(sb.g_hat()[k]);
      }
    }
    for (std::size_t k = 0; k < kGrid; ++k) {
      const double q = grid[k];
      const double f_true = integrate_midpoint(
          [&](double l) { return d.region_mass(0.0, 1.0, l, 1.0); }, q, 1.0, breaks, 20000);
      const double g_true = integrate_midpoint(
          [&](double l) { return d.region_mass(0.0, l, 0.0, 1.0); }, 0.0, q, breaks, 20000);
      const auto fs = stats(f[k]);
      const auto gs = stats(g[k]);
      worst_z = std::max(worst_z, std::abs(fs.mean - f_true) / fs.se);
      worst_z = std::max(worst_z, std::abs(gs.mean - g_true) / gs.se);
    }
  }

  // Trade-bit scouting on a correlated instance.
  {
    const auto d = bd_lower_instance(0.5);
    const auto breaks = d.breakpoints();
    std::vector<std::vector<double>> f(kGrid), g(kGrid);
    for (int rep = 0; rep < kReps; ++rep) {
      ScoutingBlindits sbl({kRounds, kGrid});
      Rng env_rng(mix_seed(21, rep));
      Rng alg_rng(mix_seed(22, rep));
      for (std::uint64_t t = 0; t < 2 * kGrid * kRounds; ++t) {
        const auto post = sbl.next_post(alg_rng);
        sbl.observe(make_feedback_wbb(FeedbackKind::trade_bit, post, d.sample(env_rng)));
      }
      for (std::size_t k = 0; k < kGrid; ++k) {
        f[k].push_back(sbl.f_hat()[k]);
        g[k].push_back(sbl.g_hat()[k]);
      }
    }
    for (std::size_t k = 0; k < kGrid; ++k) {
      const double q = grid[k];
      const double f_true = integrate_midpoint(
          [&](double l) { return d.region_mass(0.0, q, l, 1.0); }, q, 1.0, breaks, 20000);
      const double g_true = integrate_midpoint(
          [&](double l) { return d.region_mass(0.0, l, q, 1.0); }, 0.0, q, breaks, 20000);
      const auto fs = stats(f[k]);
      const auto gs = stats(g[k]);
      if (fs.se > 0.0) worst_z = std::max(worst_z, std::abs(fs.mean - f_true) / fs.se);
      if (gs.se > 0.0) worst_z = std::max(worst_z, std::abs(gs.mean - g_true) / gs.se);
    }
  }
  return {"estimator_unbiasedness", worst_z <= 3.0,
          describe("largest |mean - truth| / SE = %.3f over 200 replications", worst_z)};
}

struct Entry {
  const char* name;
  PropertyResult (*run)();
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> list{
      {"decomposition", decomposition},
      {"lipschitz", lipschitz},
      {"indistinguishability", indistinguishability},
      {"one_bit", one_bit},
      {"analytic_vs_numeric", analytic_vs_numeric},
      {"fbp_structure", fbp_structure},
      {"hindsight_agreement", hindsight_agreement},
      {"estimator_unbiasedness", estimator_unbiasedness},
  };
  return list;
}

}  // namespace

const std::vector<std::string>& verification_properties() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& e : entries()) out.emplace_back(e.name);
    return out;
  }();
  return names;
}

std::vector<PropertyResult> run_verification(const std::string& filter, const PropertySink& sink) {
  std::vector<PropertyResult> results;
  for (const auto& e : entries()) {
    if (!filter.empty() && std::string(e.name).find(filter) == std::string::npos) continue;
    PropertyResult r;
    try {
      r = e.run();
    } catch (const std::exception& ex) {
      r = {e.name, false, std::string("threw: ") + ex.what()};
    }
    if (sink) sink(r);
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace tradelab
