#include "tradelab/strategies.hpp"

#include <algorithm>
#include <cmath>

namespace tradelab {

namespace {

template <class T>
const T& expect_variant(const Feedback& feedback) {
  const T* value = std::get_if<T>(&feedback);
  if (value == nullptr) throw ContractViolation("feedback variant mismatch");
  return *value;
}

}  // namespace

// ---------------------------------------------------------------------------
// Strategy

PricePair Strategy::next_post(Rng& rng) {
  if (awaiting_feedback_) {
    throw ContractViolation(name() + ": next_post called twice without observe");
  }
  PricePair pp = do_next_post(rng);
  awaiting_feedback_ = true;
  return pp;
}

Price Strategy::next_price(Rng& rng) {
  const PricePair pp = next_post(rng);
  if (!pp.budget_balanced()) {
    throw ContractViolation(name() + " posted two distinct prices; use next_post");
  }
  return pp.p();
}

void Strategy::observe(const Feedback& feedback) {
  if (kind_of(feedback) != required_feedback()) {
    throw ContractViolation(name() + " requires " + std::string(to_string(required_feedback())) +
                            " feedback, got " + std::string(to_string(kind_of(feedback))));
  }
  if (!awaiting_feedback_) {
    throw ContractViolation(name() + ": observe called without a pending post");
  }
  awaiting_feedback_ = false;
  ++rounds_;
  do_observe(feedback);
}

// ---------------------------------------------------------------------------
// FollowTheBestPrice

FollowTheBestPrice::FollowTheBestPrice(Mode mode) : mode_(mode) {}

std::string FollowTheBestPrice::name() const {
  return mode_ == Mode::tree ? "fbp" : "fbp_naive";
}

std::unique_ptr<Strategy> FollowTheBestPrice::snapshot() const {
  return std::make_unique<FollowTheBestPrice>(*this);
}

PricePair FollowTheBestPrice::do_next_post(Rng& /*rng*/) { return PricePair(current_); }

void FollowTheBestPrice::do_observe(const Feedback& feedback) {
  const auto& full = expect_variant<FullFeedback>(feedback);
  const ValuationPair v{full.s, full.b};
  StepArgmax best;
  if (mode_ == Mode::tree) {
    index_.add_pair(v);
    best = index_.argmax();
  } else {
    observed_.push_back(v);
    best = naive_step_argmax(observed_);
  }
  current_ = Price(best.price);
  best_value_ = best.value;
}

// ---------------------------------------------------------------------------
// Tuning

std::uint64_t ceil_tolerant(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) {
    return static_cast<std::uint64_t>(std::max(r, 0.0));
  }
  return static_cast<std::uint64_t>(std::max(std::ceil(x), 0.0));
}

ScoutingParams scouting_bandits_tuning(std::uint64_t horizon,
                                       std::optional<double> density_bound) {
  const auto t = static_cast<double>(std::max<std::uint64_t>(horizon, 1));
  ScoutingParams params;
  params.exploration_rounds = std::max<std::uint64_t>(1, ceil_tolerant(std::pow(t, 2.0 / 3.0)));
  double k = std::pow(t, 1.0 / 3.0);
  if (density_bound) k *= std::pow(*density_bound, 2.0 / 3.0);
  params.grid_size = static_cast<std::size_t>(std::max<std::uint64_t>(1, ceil_tolerant(k)));
  return params;
}

ScoutingParams scouting_blindits_tuning(std::uint64_t horizon) {
  const auto t = static_cast<double>(std::max<std::uint64_t>(horizon, 1));
  ScoutingParams params;
  params.grid_size =
      static_cast<std::size_t>(std::max<std::uint64_t>(1, ceil_tolerant(std::pow(t, 0.25))));
  params.exploration_rounds =
      std::max<std::uint64_t>(1, ceil_tolerant(std::sqrt(t) * std::log(t) / 2.0));
  return params;
}

std::vector<double> scouting_grid(std::size_t grid_size) {
  std::vector<double> grid(grid_size);
  for (std::size_t k = 1; k <= grid_size; ++k) {
    grid[k - 1] = static_cast<double>(k) / static_cast<double>(grid_size + 1);
  }
  return grid;
}

namespace {

void validate(const ScoutingParams& params) {
  if (params.exploration_rounds < 1 || params.grid_size < 1) {
    throw ContractViolation("scouting strategies need T0 >= 1 and K >= 1");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ScoutingBandits

ScoutingBandits::ScoutingBandits(ScoutingParams params, std::unique_ptr<BanditCore> bandit)
    : params_(params),
      grid_(scouting_grid(params.grid_size)),
      f_hat_(params.grid_size, 0.0),
      g_hat_(params.grid_size, 0.0),
      bandit_(std::move(bandit)) {
  validate(params_);
  if (!bandit_ || bandit_->arms() != params_.grid_size) {
    throw ContractViolation("scouting bandits needs a bandit with K arms");
  }
}

ScoutingBandits::ScoutingBandits(const ScoutingBandits& other)
    : Strategy(other),
      params_(other.params_),
      grid_(other.grid_),
      f_hat_(other.f_hat_),
      g_hat_(other.g_hat_),
      bandit_(other.bandit_->clone()),
      t_(other.t_),
      last_price_(other.last_price_),
      last_arm_(other.last_arm_) {}

std::string ScoutingBandits::name() const { return "scouting_bandits[" + bandit_->name() + "]"; }

std::unique_ptr<Strategy> ScoutingBandits::snapshot() const {
  return std::make_unique<ScoutingBandits>(*this);
}

ScoutingBandits::Phase ScoutingBandits::phase() const {
  return t_ < params_.exploration_rounds ? Phase::scouting : Phase::bandit;
}

PricePair ScoutingBandits::do_next_post(Rng& rng) {
  if (phase() == Phase::scouting) {
    last_price_ = rng.uniform();
  } else {
    last_arm_ = bandit_->select_arm(rng);
    last_price_ = grid_[last_arm_];
  }
  return PricePair(Price(last_price_));
}

void ScoutingBandits::do_observe(const Feedback& feedback) {
  const auto& bits = expect_variant<RealisticFeedback>(feedback);
  if (phase() == Phase::scouting) {
    const double step = 1.0 / static_cast<double>(params_.exploration_rounds);
    const double u = last_price_;
    for (std::size_t k = 0; k < grid_.size(); ++k) {
      if (bits.buyer_accepts && grid_[k] <= u) f_hat_[k] += step;
      if (bits.seller_accepts && u <= grid_[k]) g_hat_[k] += step;
    }
  } else {
    double z = 0.0;
    if (bits.seller_accepts) z += f_hat_[last_arm_];
    if (bits.buyer_accepts) z += g_hat_[last_arm_];
    bandit_->update(last_arm_, std::clamp(z, 0.0, 1.0));
  }
  ++t_;
}

// ---------------------------------------------------------------------------
// ScoutingBlindits

ScoutingBlindits::ScoutingBlindits(ScoutingParams params)
    : params_(params),
      grid_(scouting_grid(params.grid_size)),
      f_hat_(params.grid_size, 0.0),
      g_hat_(params.grid_size, 0.0) {
  validate(params_);
}

std::string ScoutingBlindits::name() const { return "scouting_blindits"; }

std::unique_ptr<Strategy> ScoutingBlindits::snapshot() const {
  return std::make_unique<ScoutingBlindits>(*this);
}

std::uint64_t ScoutingBlindits::scouting_length() const {
  return 2 * static_cast<std::uint64_t>(params_.grid_size) * params_.exploration_rounds;
}

ScoutingBlindits::Phase ScoutingBlindits::phase() const {
  return committed_ ? Phase::blind : Phase::scouting;
}

PricePair ScoutingBlindits::do_next_post(Rng& rng) {
  if (committed_) return PricePair(*committed_);
  const double q = grid_[cursor_ - 1];
  const bool odd_round = (t_ + 1) % 2 == 1;
  if (odd_round) return {Price(q), Price(rng.uniform(q, 1.0))};
  return {Price(rng.uniform(0.0, q)), Price(q)};
}

void ScoutingBlindits::do_observe(const Feedback& feedback) {
  const auto& bit = expect_variant<TradeBitFeedback>(feedback);
  if (committed_) return;
  ++t_;
  const std::size_t k = cursor_ - 1;
  const double q = grid_[k];
  const double step = 1.0 / static_cast<double>(params_.exploration_rounds);
  if (bit.traded) {
    if (t_ % 2 == 1) {
      f_hat_[k] += step * (1.0 - q);
    } else {
      g_hat_[k] += step * q;
    }
  }
  if (t_ >= 2 * static_cast<std::uint64_t>(cursor_) * params_.exploration_rounds) ++cursor_;
  if (t_ == scouting_length()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid_.size(); ++i) {
      if (f_hat_[i] + g_hat_[i] > f_hat_[best] + g_hat_[best]) best = i;
    }
    committed_ = Price(grid_[best]);
  }
}

// ---------------------------------------------------------------------------
// Baselines

FixedPrice::FixedPrice(Price p, std::string label) : price_(p), label_(std::move(label)) {}

std::string FixedPrice::name() const { return label_; }

std::unique_ptr<Strategy> FixedPrice::snapshot() const {
  return std::make_unique<FixedPrice>(*this);
}

PricePair FixedPrice::do_next_post(Rng& /*rng*/) { return PricePair(price_); }

void FixedPrice::do_observe(const Feedback& /*feedback*/) {}

std::unique_ptr<Strategy> SingleSample::snapshot() const {
  return std::make_unique<SingleSample>(*this);
}

PricePair SingleSample::do_next_post(Rng& /*rng*/) { return PricePair(next_); }

void SingleSample::do_observe(const Feedback& feedback) {
  next_ = Price(expect_variant<FullFeedback>(feedback).s);
}

std::unique_ptr<Strategy> RandomPrice::snapshot() const {
  return std::make_unique<RandomPrice>(*this);
}

PricePair RandomPrice::do_next_post(Rng& rng) { return PricePair(Price(rng.uniform())); }

void RandomPrice::do_observe(const Feedback& /*feedback*/) {}

// ---------------------------------------------------------------------------
// DoublingTrick

DoublingTrick::DoublingTrick(StrategyFactory factory) : factory_(std::move(factory)) {
  inner_ = factory_(1);
  kind_ = inner_->required_feedback();
  wbb_ = inner_->weakly_budget_balanced();
}

DoublingTrick::DoublingTrick(const DoublingTrick& other)
    : Strategy(other),
      factory_(other.factory_),
      inner_(other.inner_->snapshot()),
      kind_(other.kind_),
      wbb_(other.wbb_),
      epoch_(other.epoch_),
      epoch_rounds_(other.epoch_rounds_) {}

std::string DoublingTrick::name() const { return "doubling(" + inner_->name() + ")"; }

std::unique_ptr<Strategy> DoublingTrick::snapshot() const {
  return std::make_unique<DoublingTrick>(*this);
}

PricePair DoublingTrick::do_next_post(Rng& rng) {
  if (epoch_rounds_ == (std::uint64_t{1} << epoch_)) {
    ++epoch_;
    epoch_rounds_ = 0;
    inner_ = factory_(std::uint64_t{1} << epoch_);
  }
  return inner_->next_post(rng);
}

void DoublingTrick::do_observe(const Feedback& feedback) {
  inner_->observe(feedback);
  ++epoch_rounds_;
}

// ---------------------------------------------------------------------------
// FullFeedbackAdapter

FullFeedbackAdapter::FullFeedbackAdapter(std::unique_ptr<Strategy> inner)
    : inner_(std::move(inner)) {
  if (!inner_) throw ContractViolation("adapter needs a strategy");
}

FullFeedbackAdapter::FullFeedbackAdapter(const FullFeedbackAdapter& other)
    : Strategy(other), inner_(other.inner_->snapshot()), last_(other.last_) {}

std::string FullFeedbackAdapter::name() const { return "full_adapter(" + inner_->name() + ")"; }

std::unique_ptr<Strategy> FullFeedbackAdapter::snapshot() const {
  return std::make_unique<FullFeedbackAdapter>(*this);
}

PricePair FullFeedbackAdapter::do_next_post(Rng& rng) {
  last_ = inner_->next_post(rng);
  return last_;
}

void FullFeedbackAdapter::do_observe(const Feedback& feedback) {
  const auto& full = expect_variant<FullFeedback>(feedback);
  inner_->observe(make_feedback_wbb(inner_->required_feedback(), last_, {full.s, full.b}));
}

// ---------------------------------------------------------------------------

std::unique_ptr<Strategy> fbp_new(FollowTheBestPrice::Mode mode) {
  return std::make_unique<FollowTheBestPrice>(mode);
}

std::unique_ptr<Strategy> scouting_bandits_new(ScoutingParams params, const BanditFactory& bandit,
                                               std::uint64_t bandit_horizon) {
  validate(params);
  return std::make_unique<ScoutingBandits>(params, bandit(params.grid_size, bandit_horizon));
}

std::unique_ptr<Strategy> scouting_blindits_new(ScoutingParams params) {
  return std::make_unique<ScoutingBlindits>(params);
}

std::unique_ptr<Strategy> fixed_price_new(Price p) { return std::make_unique<FixedPrice>(p); }

std::unique_ptr<Strategy> median_mechanism_new(Price seller_median) {
  return std::make_unique<FixedPrice>(seller_median, "median_mechanism");
}

std::unique_ptr<Strategy> single_sample_new() { return std::make_unique<SingleSample>(); }

std::unique_ptr<Strategy> random_price_new() { return std::make_unique<RandomPrice>(); }

}  // namespace tradelab
