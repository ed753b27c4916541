#include "tradelab/adversary.hpp"

#include <cmath>

namespace tradelab {

AdversaryState::AdversaryState(double eps, std::size_t probe_budget)
    : eps_(eps), probe_budget_(probe_budget) {
  if (!(eps > 0.0 && eps < 1.0 / 18.0)) {
    throw ContractViolation("adversary eps must lie in (0, 1/18)");
  }
  if (probe_budget == 0) throw ContractViolation("probe budget must be at least 1");
  // Round 1 behaves like every later round started from the interval
  // [1/2 - 3 eps/2, 1/2 + 3 eps/2].
  width_ = 3.0 * eps;
  c_ = 0.5 - 1.5 * eps;
  d_ = 0.5 + 1.5 * eps;
}

namespace {

// Geometric shrinking stops while the next third still spans this many ulps,
// leaving room for one-ulp steps over any practical horizon.
constexpr double kStepFloorUlps = 4294967296.0;

double ulp_at(double x) { return std::nextafter(x, 2.0) - x; }

}  // namespace

double AdversaryState::threshold() const {
  if (frozen_) return c_;
  if (stepping_) return lean_low_ ? c_ : std::nextafter(d_, 0.0);
  return c_ + width_ / 3.0;
}

ValuationPair AdversaryState::next_valuation(std::uint64_t round, double mass) {
  if (round != history_.size() + 1) {
    throw ContractViolation("adversary rounds must be requested in order");
  }
  if (!(mass >= 0.0 && mass <= 1.0)) {
    throw ContractViolation("probe mass must lie in [0,1]");
  }
  const bool mostly_low = mass > 0.5;
  if (frozen_) {
    const ValuationPair v = mostly_low ? ValuationPair{c_, 1.0} : ValuationPair{0.0, c_};
    history_.push_back(v);
    return v;
  }

  if (stepping_) {
    // Prices at or below m lose on (next(m), 1); prices above m lose on (0, m).
    const double m = threshold();
    if (mostly_low) {
      c_ = std::nextafter(m, 1.0);
    } else {
      d_ = m;
    }
    if (c_ >= d_) {
      c_ = mostly_low ? c_ : d_;
      d_ = c_;
      width_ = 0.0;
      frozen_ = true;
    }
  } else {
    const double step = 2.0 * width_ / 3.0;
    if (mostly_low) {
      c_ += step;
    } else {
      d_ -= step;
    }
    width_ /= 3.0;
    if (width_ / 3.0 < kStepFloorUlps * ulp_at(d_)) stepping_ = true;
  }
  lean_low_ = mostly_low;
  const ValuationPair v = mostly_low ? ValuationPair{c_, 1.0} : ValuationPair{0.0, d_};
  history_.push_back(v);
  return v;
}

Price AdversaryState::common_price() const {
  if (history_.empty()) throw ContractViolation("common_price needs at least one round");
  return Price(c_);
}

double probe_mass(const SnapshotFactory& factory, const std::vector<ValuationPair>& history,
                  Price threshold, std::size_t budget, Rng& rng) {
  if (budget == 0) throw ContractViolation("probe budget must be at least 1");
  std::size_t below = 0;
  for (std::size_t i = 0; i < budget; ++i) {
    auto replay = factory();
    Rng own(rng.next_u64());
    for (const auto& v : history) {
      replay->next_post(own);
      replay->observe(FullFeedback{v.s, v.b});
    }
    if (replay->next_post(own).p() <= threshold) ++below;
  }
  return static_cast<double>(below) / static_cast<double>(budget);
}

ProbeBank::ProbeBank(const SnapshotFactory& factory, std::size_t budget, std::uint64_t seed) {
  if (budget == 0) throw ContractViolation("probe budget must be at least 1");
  mirrors_.reserve(budget);
  for (std::size_t i = 0; i < budget; ++i) {
    mirrors_.push_back(Mirror{factory(), Rng(mix_seed(seed, i))});
    if (mirrors_.back().strategy->required_feedback() != FeedbackKind::full) {
      throw ConfigError("the adversary needs a full-feedback strategy; wrap it with adapt_feedback");
    }
  }
}

double ProbeBank::probe(double threshold) {
  std::size_t below = 0;
  for (auto& m : mirrors_) {
    if (m.strategy->next_post(m.rng).p().value() <= threshold) ++below;
  }
  return static_cast<double>(below) / static_cast<double>(mirrors_.size());
}

void ProbeBank::reveal(const ValuationPair& v) {
  for (auto& m : mirrors_) m.strategy->observe(FullFeedback{v.s, v.b});
}

ObliviousAdversary::ObliviousAdversary(double eps, const SnapshotFactory& factory,
                                       std::size_t probe_budget, std::uint64_t seed)
    : state_(eps, probe_budget), bank_(factory, probe_budget, seed) {}

ValuationPair ObliviousAdversary::next() {
  const double mass = bank_.probe(state_.threshold());
  const ValuationPair v = state_.next_valuation(state_.round() + 1, mass);
  bank_.reveal(v);
  return v;
}

}  // namespace tradelab
