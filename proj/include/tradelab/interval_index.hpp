#pragma once

// Incremental maximization of the empirical gain-from-trade step function
//   p -> sum_i (b_i - s_i) 1{s_i <= p <= b_i}
// over the candidate prices {s_i}. Gains are accumulated in exact fixed-point
// units so that different summation orders produce identical values and the
// tie rule (smallest index among maximizers) is well defined.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tradelab/core.hpp"

namespace tradelab {

/// Exact gain accumulator; one unit is 2^-62.
using GainUnits = __int128;

GainUnits to_gain_units(double gain);
double from_gain_units(GainUnits units);

struct StepArgmax {
  GainUnits value = 0;
  std::size_t index = 0;  // 0-based position of the maximizing pair
  double price = 0.0;     // s of that pair
};

/// Balanced (treap) index over candidate prices with lazy range-add and
/// subtree-max augmentation. O(log t) expected per pair.
class IntervalIndex {
 public:
  IntervalIndex();

  /// Registers pair number size() as a candidate price s and adds its gain on
  /// [s, b].
  void add_pair(const ValuationPair& v);

  /// Maximizer with the smallest index. Requires size() > 0.
  StepArgmax argmax() const;

  std::size_t size() const { return count_; }
  /// Node visits performed so far, for complexity accounting.
  std::uint64_t operations() const { return ops_; }

 private:
  struct PointNode {
    double key;
    std::size_t index;
    std::uint64_t priority;
    int left = -1;
    int right = -1;
    GainUnits own = 0;
    GainUnits lazy = 0;
    GainUnits max = 0;
    std::size_t best_index = 0;
    double best_key = 0.0;
  };
  struct EventNode {
    double key;
    std::uint64_t priority;
    int left = -1;
    int right = -1;
    GainUnits weight = 0;
    GainUnits sum = 0;
  };

  // Point treap.
  void push(int t);
  void pull(int t);
  void apply_add(int t, GainUnits w);
  // Splits into keys < key (or <= key when inclusive) and the rest.
  void split_points(int t, double key, bool inclusive, int& l, int& r);
  int merge_points(int l, int r);

  // Event treaps giving the gain already covering a new point.
  static void pull_event(std::vector<EventNode>& nodes, int t);
  void split_events(std::vector<EventNode>& nodes, int t, double key, bool inclusive, int& l,
                    int& r);
  int merge_events(std::vector<EventNode>& nodes, int l, int r);
  void insert_event(std::vector<EventNode>& nodes, int& root, double key, GainUnits w);
  GainUnits prefix_sum(const std::vector<EventNode>& nodes, int root, double key,
                       bool inclusive);

  std::uint64_t next_priority();

  std::vector<PointNode> points_;
  int point_root_ = -1;
  std::vector<EventNode> starts_;
  int start_root_ = -1;
  std::vector<EventNode> ends_;
  int end_root_ = -1;
  std::size_t count_ = 0;
  std::uint64_t ops_ = 0;
  std::uint64_t prng_state_ = 0x853C49E6748FEA9BULL;
};

/// Reference computation by sorting and sweeping every candidate; same tie
/// rule as IntervalIndex. O(t log t) per call.
StepArgmax naive_step_argmax(std::span<const ValuationPair> pairs);

}  // namespace tradelab
