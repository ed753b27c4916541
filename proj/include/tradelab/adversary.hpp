#pragma once

// Oblivious adversary that forces linear regret on a full-feedback learner.
// It keeps a shrinking interval [c, d] and, each round, emits a valuation pair
// whose trading region excludes the side of the interval where the learner's
// next price is more likely to fall. The limit of c clears every emitted pair.

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "tradelab/core.hpp"
#include "tradelab/rng.hpp"
#include "tradelab/strategies.hpp"

namespace tradelab {

class AdversaryState {
 public:
  /// eps must lie in (0, 1/18); probe_budget >= 1.
  explicit AdversaryState(double eps, std::size_t probe_budget = 1);

  double eps() const { return eps_; }
  std::size_t probe_budget() const { return probe_budget_; }
  /// Rounds emitted so far.
  std::uint64_t round() const { return history_.size(); }
  /// Price whose cumulative probability decides the next emission.
  double threshold() const;
  /// Emits the pair for `round`, which must equal round() + 1. `mass` is the
  /// learner's probability of posting at most threshold().
  ValuationPair next_valuation(std::uint64_t round, double mass);
  /// Left endpoint c_t; lies in [s_u, b_u] for every emitted round u.
  Price common_price() const;

  double c() const { return c_; }
  double d() const { return d_; }
  /// True while the interval shrinks by thirds (d - c = eps 3^(1-t)).
  bool geometric() const { return !stepping_ && !frozen_; }
  /// True once the endpoints met; emissions then repeat the common price.
  bool frozen() const { return frozen_; }
  const std::vector<ValuationPair>& history() const { return history_; }

 private:
  double eps_;
  std::size_t probe_budget_;
  double c_;
  double d_;
  double width_;
  // Near the double-precision floor the interval stops shrinking by thirds
  // and one endpoint moves by a single ulp per round instead.
  bool stepping_ = false;
  bool lean_low_ = true;  // side the learner favoured last
  bool frozen_ = false;
  std::vector<ValuationPair> history_;
};

/// Fresh strategy instances, each behaving like the learner at round 1.
using SnapshotFactory = std::function<std::unique_ptr<Strategy>()>;

/// Fraction of `budget` independent replays whose next price is <= threshold.
/// Each replay builds a strategy, feeds it `history` as full feedback with its
/// own random stream and then draws one more post. Quadratic in the history
/// length; see ProbeBank for the incremental equivalent.
double probe_mass(const SnapshotFactory& factory, const std::vector<ValuationPair>& history,
                  Price threshold, std::size_t budget, Rng& rng);

/// `budget` mirror copies of the learner, each with a private random stream,
/// advanced in lockstep with the emitted sequence. Round t's mirror posts are
/// independent draws from the learner's round-t price law.
class ProbeBank {
 public:
  ProbeBank(const SnapshotFactory& factory, std::size_t budget, std::uint64_t seed);

  /// Asks every mirror for its next post; returns the fraction at or below
  /// threshold. Must alternate with reveal().
  double probe(double threshold);
  /// Delivers the emitted pair to every mirror as full feedback.
  void reveal(const ValuationPair& v);

 private:
  struct Mirror {
    std::unique_ptr<Strategy> strategy;
    Rng rng;
  };
  std::vector<Mirror> mirrors_;
};

/// AdversaryState driven by a ProbeBank: a self-contained valuation source.
class ObliviousAdversary {
 public:
  ObliviousAdversary(double eps, const SnapshotFactory& factory, std::size_t probe_budget,
                     std::uint64_t seed);

  ValuationPair next();
  const AdversaryState& state() const { return state_; }

 private:
  AdversaryState state_;
  ProbeBank bank_;
};

}  // namespace tradelab
