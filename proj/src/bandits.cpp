#include "tradelab/bandits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tradelab/core.hpp"

namespace tradelab {

Moss::Moss(std::size_t arms, std::uint64_t horizon)
    : horizon_(horizon), pulls_(arms, 0), reward_sums_(arms, 0.0) {
  if (arms == 0) throw ContractViolation("bandit needs at least one arm");
}

std::size_t Moss::select_arm(Rng& /*rng*/) {
  const auto k = static_cast<double>(pulls_.size());
  std::size_t best = 0;
  double best_index = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < pulls_.size(); ++a) {
    if (pulls_[a] == 0) return a;
    const auto n = static_cast<double>(pulls_[a]);
    const double bonus =
        std::sqrt(std::max(0.0, std::log(static_cast<double>(horizon_) / (k * n))) / n);
    const double index = reward_sums_[a] / n + bonus;
    if (index > best_index) {
      best_index = index;
      best = a;
    }
  }
  return best;
}

namespace {

void check_pull(std::size_t arm, std::size_t arms, double reward) {
  if (arm >= arms) throw ContractViolation("bandit arm out of range");
  if (!(reward >= 0.0 && reward <= 1.0)) throw ContractViolation("bandit reward outside [0,1]");
}

}  // namespace

void Moss::update(std::size_t arm, double reward) {
  check_pull(arm, pulls_.size(), reward);
  ++pulls_[arm];
  reward_sums_[arm] += reward;
}

Ucb1::Ucb1(std::size_t arms) : pulls_(arms, 0), reward_sums_(arms, 0.0) {
  if (arms == 0) throw ContractViolation("bandit needs at least one arm");
}

std::size_t Ucb1::select_arm(Rng& /*rng*/) {
  std::size_t best = 0;
  double best_index = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < pulls_.size(); ++a) {
    if (pulls_[a] == 0) return a;
    const auto n = static_cast<double>(pulls_[a]);
    const double index =
        reward_sums_[a] / n + std::sqrt(2.0 * std::log(static_cast<double>(total_)) / n);
    if (index > best_index) {
      best_index = index;
      best = a;
    }
  }
  return best;
}

void Ucb1::update(std::size_t arm, double reward) {
  check_pull(arm, pulls_.size(), reward);
  ++pulls_[arm];
  ++total_;
  reward_sums_[arm] += reward;
}

BanditFactory moss_factory() {
  return [](std::size_t arms, std::uint64_t horizon) {
    return std::make_unique<Moss>(arms, std::max<std::uint64_t>(horizon, 1));
  };
}

BanditFactory ucb1_factory() {
  return [](std::size_t arms, std::uint64_t) { return std::make_unique<Ucb1>(arms); };
}

BanditFactory bandit_factory_by_name(const std::string& name) {
  if (name == "moss") return moss_factory();
  if (name == "ucb1") return ucb1_factory();
  throw ConfigError("unknown bandit '" + name + "' (expected moss or ucb1)");
}

double moss_regret_bound(std::size_t arms, std::uint64_t horizon) {
  return 49.0 * std::sqrt(static_cast<double>(arms) * static_cast<double>(horizon));
}

}  // namespace tradelab
