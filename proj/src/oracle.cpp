#include "tradelab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "tradelab/bandits.hpp"
#include "tradelab/interval_index.hpp"

namespace tradelab {

namespace {

double enumerate_atoms(const PairDistribution& d, double p) {
  double total = 0.0;
  if (const auto* joint = std::get_if<DiscreteJoint>(&d.law())) {
    for (const auto& a : joint->atoms()) total += a.prob * gft(Price(p), {a.s, a.b});
    return total;
  }
  const auto& ind = std::get<IndependentProduct>(d.law());
  const auto& sellers = std::get<DiscreteDistribution>(ind.seller.law()).atoms();
  const auto& buyers = std::get<DiscreteDistribution>(ind.buyer.law()).atoms();
  for (const auto& s : sellers) {
    for (const auto& b : buyers) total += s.prob * b.prob * gft(Price(p), {s.point, b.point});
  }
  return total;
}

}  // namespace

double integrate_midpoint(const std::function<double(double)>& f, double lo, double hi,
                          const std::vector<double>& breaks, std::size_t cells) {
  if (hi <= lo) return 0.0;
  std::vector<double> knots{lo};
  for (double x : breaks) {
    if (x > lo && x < hi) knots.push_back(x);
  }
  knots.push_back(hi);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double a = knots[i];
    const double b = knots[i + 1];
    const auto m = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(static_cast<double>(cells) * (b - a) / (hi - lo))));
    const double h = (b - a) / static_cast<double>(m);
    double piece = 0.0;
    for (std::size_t j = 0; j < m; ++j) piece += f(a + (static_cast<double>(j) + 0.5) * h);
    total += piece * h;
  }
  return total;
}

OracleEstimate numeric_expected_gft(const PairDistribution& d, Price p, std::size_t n) {
  if (n < 1000) throw ContractViolation("numeric_expected_gft needs n >= 1000");
  const double x = p.value();
  if (d.is_discrete()) return {enumerate_atoms(d, x), 0.0};

  const auto breaks = d.breakpoints();
  const double right = integrate_midpoint(
      [&](double l) { return d.region_mass(0.0, x, l, 1.0); }, x, 1.0, breaks, n);
  const double left = integrate_midpoint(
      [&](double l) { return d.region_mass(0.0, l, x, 1.0); }, 0.0, x, breaks, n);
  return {right + left, 0.0};
}

OracleEstimate monte_carlo_expected_gft(const PairDistribution& d, Price p, std::size_t n,
                                        Rng& rng) {
  if (n < 2) throw ContractViolation("monte_carlo_expected_gft needs n >= 2");
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = gft(p, d.sample(rng));
    const double delta = g - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (g - mean);
  }
  const double var = m2 / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

double check_decomposition(double p, double s, double b) {
  const bool trades = s <= p && p <= b;
  const double lhs = gft(Price(p), {s, b});
  const double right = trades ? std::max(0.0, std::min(b, 1.0) - p) : 0.0;
  const double left = trades ? std::max(0.0, p - std::max(s, 0.0)) : 0.0;
  return std::abs(lhs - (right + left));
}

HindsightBest empirical_best_in_hindsight(std::span<const ValuationPair> pairs) {
  if (pairs.empty()) throw ContractViolation("best in hindsight of an empty sequence");
  // Net gain change when the price crosses each coordinate: +w entering [s, b]
  // at s, -w after b. Candidate prices are the s_i.
  struct Delta {
    GainUnits enter = 0;
    GainUnits leave = 0;
    bool candidate = false;
  };
  std::map<double, Delta> events;
  for (const auto& v : pairs) {
    events[v.s].candidate = true;
    if (v.b < v.s) continue;
    const GainUnits w = to_gain_units(v.b - v.s);
    events[v.s].enter += w;
    events[v.b].leave += w;
  }
  GainUnits running = 0;
  GainUnits best = std::numeric_limits<GainUnits>::min();
  double best_price = 0.0;
  for (const auto& [x, delta] : events) {
    running += delta.enter;
    if (delta.candidate && running > best) {
      best = running;
      best_price = x;
    }
    running -= delta.leave;
  }
  return {Price(best_price), from_gain_units(best)};
}

double fbp_constant() {
  constexpr double m0 = 1200.0;
  constexpr double c1 = 13448.0;
  constexpr double c2 = 1.0 / 576.0;
  return 2.0 * (2.0 * std::sqrt(m0) + c1 * std::sqrt(std::numbers::pi / c2));
}

double bound_fbp(std::uint64_t horizon) {
  if (horizon == 0) return 0.0;
  return 0.5 + fbp_constant() * std::sqrt(static_cast<double>(horizon - 1));
}

double bound_sb(std::uint64_t horizon, std::uint64_t exploration_rounds, std::size_t grid_size,
                double density_bound, double bandit_bound) {
  if (exploration_rounds == 0 || grid_size == 0) {
    throw ContractViolation("bound_sb needs T0 >= 1 and K >= 1");
  }
  const auto t = static_cast<double>(horizon);
  const auto t0 = static_cast<double>(exploration_rounds);
  const double rest = std::max(0.0, t - t0);
  const double per_round = 4.0 * density_bound / static_cast<double>(grid_size + 1) +
                           std::sqrt(2.0 * std::numbers::pi / t0);
  return t0 + per_round * rest + bandit_bound;
}

double bound_sb(std::uint64_t horizon, std::uint64_t exploration_rounds, std::size_t grid_size,
                double density_bound) {
  const std::uint64_t rest = horizon > exploration_rounds ? horizon - exploration_rounds : 0;
  return bound_sb(horizon, exploration_rounds, grid_size, density_bound,
                  moss_regret_bound(grid_size, rest));
}

double bound_sbl(std::uint64_t horizon, std::uint64_t exploration_rounds, std::size_t grid_size,
                 double density_bound) {
  if (exploration_rounds == 0 || grid_size == 0) {
    throw ContractViolation("bound_sbl needs T0 >= 1 and K >= 1");
  }
  const auto t = static_cast<double>(horizon);
  const auto t0 = static_cast<double>(exploration_rounds);
  const auto k = static_cast<double>(grid_size);
  const double scouting = 2.0 * k * t0;
  constexpr int kGrid = 4001;
  double inf = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i) {
    const double e = std::pow(10.0, -6.0 + 6.0 * i / (kGrid - 1));
    inf = std::min(inf, e + k * std::exp(-2.0 * e * e * t0));
  }
  return scouting +
         2.0 * (2.0 * density_bound / k + inf) * std::max(0.0, t - scouting);
}

std::vector<LowerBoundRow> lower_bound_constants() {
  return {
      {"full_iid", "sqrt(T)", 0.5, 1.0 / (8.0 * std::sqrt(2.0 * std::numbers::pi))},
      {"realistic_iid_bounded_density", "T^(2/3)", 2.0 / 3.0, 11.0 / 672.0},
      {"realistic_correlated_bounded_density", "T", 1.0, 1.0 / 24.0},
      {"realistic_iid_unbounded_density", "T", 1.0, 1.0 / 8.0},
      {"full_adversarial", "T", 1.0, 1.0 / 4.0},
  };
}

}  // namespace tradelab
