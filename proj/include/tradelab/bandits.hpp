#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tradelab/rng.hpp"

namespace tradelab {

/// Stochastic K-armed bandit with rewards in [0,1].
class BanditCore {
 public:
  virtual ~BanditCore() = default;
  virtual std::size_t select_arm(Rng& rng) = 0;
  virtual void update(std::size_t arm, double reward) = 0;
  virtual std::unique_ptr<BanditCore> clone() const = 0;
  virtual std::size_t arms() const = 0;
  virtual std::string name() const = 0;
};

/// Minimax-optimal index policy: mean + sqrt(max(0, ln(n / (K pulls))) / pulls)
/// for horizon n. Unpulled arms go first, ties to the lowest index.
class Moss final : public BanditCore {
 public:
  Moss(std::size_t arms, std::uint64_t horizon);

  std::size_t select_arm(Rng& rng) override;
  void update(std::size_t arm, double reward) override;
  std::unique_ptr<BanditCore> clone() const override { return std::make_unique<Moss>(*this); }
  std::size_t arms() const override { return pulls_.size(); }
  std::string name() const override { return "moss"; }

  const std::vector<std::uint64_t>& pulls() const { return pulls_; }

 private:
  std::uint64_t horizon_;
  std::vector<std::uint64_t> pulls_;
  std::vector<double> reward_sums_;
};

/// UCB1 with index mean + sqrt(2 ln t / pulls).
class Ucb1 final : public BanditCore {
 public:
  explicit Ucb1(std::size_t arms);

  std::size_t select_arm(Rng& rng) override;
  void update(std::size_t arm, double reward) override;
  std::unique_ptr<BanditCore> clone() const override { return std::make_unique<Ucb1>(*this); }
  std::size_t arms() const override { return pulls_.size(); }
  std::string name() const override { return "ucb1"; }

 private:
  std::uint64_t total_ = 0;
  std::vector<std::uint64_t> pulls_;
  std::vector<double> reward_sums_;
};

/// Builds a bandit over `arms` arms for a run of `horizon` pulls.
using BanditFactory = std::function<std::unique_ptr<BanditCore>(std::size_t arms,
                                                                std::uint64_t horizon)>;

BanditFactory moss_factory();
BanditFactory ucb1_factory();
/// "moss" or "ucb1"; throws ConfigError otherwise.
BanditFactory bandit_factory_by_name(const std::string& name);

/// Distribution-free regret bound 49 sqrt(K n) for MOSS.
double moss_regret_bound(std::size_t arms, std::uint64_t horizon);

}  // namespace tradelab
