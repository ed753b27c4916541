#pragma once

// Price-posting learners. Each strategy declares the feedback variant it
// consumes; observe() rejects any other variant.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tradelab/bandits.hpp"
#include "tradelab/core.hpp"
#include "tradelab/interval_index.hpp"
#include "tradelab/rng.hpp"

namespace tradelab {

class Strategy {
 public:
  virtual ~Strategy() = default;

  virtual FeedbackKind required_feedback() const = 0;
  /// True when the strategy may post p < p'.
  virtual bool weakly_budget_balanced() const { return false; }
  virtual std::string name() const = 0;
  /// Deep copy; behaves identically to *this on identical future inputs.
  virtual std::unique_ptr<Strategy> snapshot() const = 0;

  /// Next post. Budget balanced strategies return p == p'. Must alternate
  /// with observe().
  PricePair next_post(Rng& rng);
  /// Budget balanced shorthand for next_post().p().
  Price next_price(Rng& rng);
  /// Delivers the feedback for the last post; throws ContractViolation when
  /// the variant differs from required_feedback().
  void observe(const Feedback& feedback);

  std::uint64_t rounds_played() const { return rounds_; }

 protected:
  virtual PricePair do_next_post(Rng& rng) = 0;
  virtual void do_observe(const Feedback& feedback) = 0;

 private:
  bool awaiting_feedback_ = false;
  std::uint64_t rounds_ = 0;
};

/// Builds a strategy tuned for a known horizon.
using StrategyFactory = std::function<std::unique_ptr<Strategy>(std::uint64_t horizon)>;

// ---------------------------------------------------------------------------

/// Follow the Best Price: posts 1/2, then an argmax of the empirical gain
/// from trade, choosing the seller valuation with the smallest index.
class FollowTheBestPrice final : public Strategy {
 public:
  enum class Mode { tree, naive };

  explicit FollowTheBestPrice(Mode mode = Mode::tree);

  FeedbackKind required_feedback() const override { return FeedbackKind::full; }
  std::string name() const override;
  std::unique_ptr<Strategy> snapshot() const override;

  /// Current maximum of the empirical gain sum (not divided by t).
  GainUnits best_value() const { return best_value_; }
  std::uint64_t index_operations() const { return index_.operations(); }

 protected:
  PricePair do_next_post(Rng& rng) override;
  void do_observe(const Feedback& feedback) override;

 private:
  Mode mode_;
  IntervalIndex index_;
  std::vector<ValuationPair> observed_;  // naive mode only
  Price current_{0.5};
  GainUnits best_value_ = 0;
};

struct ScoutingParams {
  std::uint64_t exploration_rounds = 1;  // T0
  std::size_t grid_size = 1;             // K
};

/// ceil(x) that ignores floating noise below 1e-9, so that e.g. 10^6^(2/3)
/// rounds to 10000.
std::uint64_t ceil_tolerant(double x);

/// T0 = ceil(T^{2/3}), K = ceil(T^{1/3}); with a known density bound M,
/// K = ceil(M^{2/3} T^{1/3}).
ScoutingParams scouting_bandits_tuning(std::uint64_t horizon,
                                       std::optional<double> density_bound = std::nullopt);
/// K = ceil(T^{1/4}), T0 = ceil(sqrt(T) ln(T) / 2).
ScoutingParams scouting_blindits_tuning(std::uint64_t horizon);

/// Grid q_k = k / (K + 1), k = 1..K.
std::vector<double> scouting_grid(std::size_t grid_size);

/// Scouting Bandits: T0 uniform-price rounds estimate the global terms
/// F_k = P[q_k <= U <= B], G_k = P[S <= U <= q_k]; afterwards a K-armed bandit
/// over the grid is fed Z = 1{S<=q} F + 1{q<=B} G. Realistic feedback.
class ScoutingBandits final : public Strategy {
 public:
  enum class Phase { scouting, bandit };

  ScoutingBandits(ScoutingParams params, std::unique_ptr<BanditCore> bandit);
  ScoutingBandits(const ScoutingBandits& other);

  FeedbackKind required_feedback() const override { return FeedbackKind::realistic; }
  std::string name() const override;
  std::unique_ptr<Strategy> snapshot() const override;

  Phase phase() const;
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& f_hat() const { return f_hat_; }
  const std::vector<double>& g_hat() const { return g_hat_; }
  const ScoutingParams& params() const { return params_; }
  const BanditCore& bandit() const { return *bandit_; }

 protected:
  PricePair do_next_post(Rng& rng) override;
  void do_observe(const Feedback& feedback) override;

 private:
  ScoutingParams params_;
  std::vector<double> grid_;
  std::vector<double> f_hat_;
  std::vector<double> g_hat_;
  std::unique_ptr<BanditCore> bandit_;
  std::uint64_t t_ = 0;  // rounds completed
  double last_price_ = 0.0;
  std::size_t last_arm_ = 0;
};

/// Scouting Blindits: 2 K T0 two-price scouting rounds estimate the expected
/// gain at every grid point from the trade bit alone, then the best grid
/// price is posted to both sides forever.
class ScoutingBlindits final : public Strategy {
 public:
  enum class Phase { scouting, blind };

  explicit ScoutingBlindits(ScoutingParams params);

  FeedbackKind required_feedback() const override { return FeedbackKind::trade_bit; }
  bool weakly_budget_balanced() const override { return true; }
  std::string name() const override;
  std::unique_ptr<Strategy> snapshot() const override;

  Phase phase() const;
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& f_hat() const { return f_hat_; }
  const std::vector<double>& g_hat() const { return g_hat_; }
  /// 1-based grid cursor of the scouting phase.
  std::size_t cursor() const { return cursor_; }
  std::optional<Price> committed_price() const { return committed_; }
  const ScoutingParams& params() const { return params_; }

 protected:
  PricePair do_next_post(Rng& rng) override;
  void do_observe(const Feedback& feedback) override;

 private:
  std::uint64_t scouting_length() const;

  ScoutingParams params_;
  std::vector<double> grid_;
  std::vector<double> f_hat_;
  std::vector<double> g_hat_;
  std::uint64_t t_ = 0;
  std::size_t cursor_ = 1;
  std::optional<Price> committed_;
};

/// Posts the same price forever. Needs no feedback.
class FixedPrice final : public Strategy {
 public:
  explicit FixedPrice(Price p, std::string label = "fixed_price");

  FeedbackKind required_feedback() const override { return FeedbackKind::none; }
  std::string name() const override;
  std::unique_ptr<Strategy> snapshot() const override;

 protected:
  PricePair do_next_post(Rng& rng) override;
  void do_observe(const Feedback& feedback) override;

 private:
  Price price_;
  std::string label_;
};

/// Posts 1/2 first, then the previous round's revealed seller valuation.
class SingleSample final : public Strategy {
 public:
  FeedbackKind required_feedback() const override { return FeedbackKind::full; }
  std::string name() const override { return "single_sample"; }
  std::unique_ptr<Strategy> snapshot() const override;

 protected:
  PricePair do_next_post(Rng& rng) override;
  void do_observe(const Feedback& feedback) override;

 private:
  Price next_{0.5};
};

/// Posts an independent U[0,1] price every round.
class RandomPrice final : public Strategy {
 public:
  FeedbackKind required_feedback() const override { return FeedbackKind::none; }
  std::string name() const override { return "random_price"; }
  std::unique_ptr<Strategy> snapshot() const override;

 protected:
  PricePair do_next_post(Rng& rng) override;
  void do_observe(const Feedback& feedback) override;
};

/// Restarts a freshly tuned inner strategy on epochs of length 2^j.
class DoublingTrick final : public Strategy {
 public:
  explicit DoublingTrick(StrategyFactory factory);
  DoublingTrick(const DoublingTrick& other);

  FeedbackKind required_feedback() const override { return kind_; }
  bool weakly_budget_balanced() const override { return wbb_; }
  std::string name() const override;
  std::unique_ptr<Strategy> snapshot() const override;

  std::uint64_t epoch() const { return epoch_; }

 protected:
  PricePair do_next_post(Rng& rng) override;
  void do_observe(const Feedback& feedback) override;

 private:
  StrategyFactory factory_;
  std::unique_ptr<Strategy> inner_;
  FeedbackKind kind_;
  bool wbb_;
  std::uint64_t epoch_ = 0;
  std::uint64_t epoch_rounds_ = 0;
};

/// Lets a strategy built for coarser feedback play a full-feedback game: the
/// revealed (s, b) is reduced to the inner strategy's feedback variant.
class FullFeedbackAdapter final : public Strategy {
 public:
  explicit FullFeedbackAdapter(std::unique_ptr<Strategy> inner);
  FullFeedbackAdapter(const FullFeedbackAdapter& other);

  FeedbackKind required_feedback() const override { return FeedbackKind::full; }
  bool weakly_budget_balanced() const override { return inner_->weakly_budget_balanced(); }
  std::string name() const override;
  std::unique_ptr<Strategy> snapshot() const override;

 protected:
  PricePair do_next_post(Rng& rng) override;
  void do_observe(const Feedback& feedback) override;

 private:
  std::unique_ptr<Strategy> inner_;
  PricePair last_{Price(0.5)};
};

// Constructors.

std::unique_ptr<Strategy> fbp_new(FollowTheBestPrice::Mode mode = FollowTheBestPrice::Mode::tree);
std::unique_ptr<Strategy> scouting_bandits_new(ScoutingParams params, const BanditFactory& bandit,
                                               std::uint64_t bandit_horizon);
std::unique_ptr<Strategy> scouting_blindits_new(ScoutingParams params);
std::unique_ptr<Strategy> fixed_price_new(Price p);
std::unique_ptr<Strategy> median_mechanism_new(Price seller_median);
std::unique_ptr<Strategy> single_sample_new();
std::unique_ptr<Strategy> random_price_new();

}  // namespace tradelab
