#include "tradelab/interval_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tradelab {

GainUnits to_gain_units(double gain) {
  return static_cast<GainUnits>(std::llround(std::ldexp(gain, 62)));
}

double from_gain_units(GainUnits units) {
  // Split to keep full precision for sums beyond 2^63.
  const auto hi = static_cast<double>(static_cast<long long>(units >> 62));
  const auto lo = static_cast<double>(static_cast<long long>(units & ((GainUnits(1) << 62) - 1)));
  return hi + std::ldexp(lo, -62);
}

namespace {

bool better(GainUnits v1, std::size_t i1, GainUnits v2, std::size_t i2) {
  return v1 > v2 || (v1 == v2 && i1 < i2);
}

}  // namespace

IntervalIndex::IntervalIndex() {
  points_.reserve(1024);
  starts_.reserve(1024);
  ends_.reserve(1024);
}

std::uint64_t IntervalIndex::next_priority() {
  prng_state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = prng_state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void IntervalIndex::apply_add(int t, GainUnits w) {
  if (t < 0) return;
  auto& n = points_[t];
  n.own += w;
  n.max += w;
  n.lazy += w;
}

void IntervalIndex::push(int t) {
  ++ops_;
  auto& n = points_[t];
  if (n.lazy != 0) {
    const GainUnits w = n.lazy;
    n.lazy = 0;
    apply_add(n.left, w);
    apply_add(n.right, w);
  }
}

void IntervalIndex::pull(int t) {
  ++ops_;
  auto& n = points_[t];
  n.max = n.own;
  n.best_index = n.index;
  n.best_key = n.key;
  for (int child : {n.left, n.right}) {
    if (child < 0) continue;
    const auto& c = points_[child];
    if (better(c.max, c.best_index, n.max, n.best_index)) {
      n.max = c.max;
      n.best_index = c.best_index;
      n.best_key = c.best_key;
    }
  }
}

void IntervalIndex::split_points(int t, double key, bool inclusive, int& l, int& r) {
  if (t < 0) {
    l = r = -1;
    return;
  }
  push(t);
  const bool goes_left = inclusive ? points_[t].key <= key : points_[t].key < key;
  if (goes_left) {
    int right = -1;
    split_points(points_[t].right, key, inclusive, right, r);
    points_[t].right = right;
    l = t;
  } else {
    int left = -1;
    split_points(points_[t].left, key, inclusive, l, left);
    points_[t].left = left;
    r = t;
  }
  pull(t);
}

int IntervalIndex::merge_points(int l, int r) {
  if (l < 0) return r;
  if (r < 0) return l;
  if (points_[l].priority > points_[r].priority) {
    push(l);
    const int right = merge_points(points_[l].right, r);
    points_[l].right = right;
    pull(l);
    return l;
  }
  push(r);
  const int left = merge_points(l, points_[r].left);
  points_[r].left = left;
  pull(r);
  return r;
}

void IntervalIndex::pull_event(std::vector<EventNode>& nodes, int t) {
  auto& n = nodes[t];
  n.sum = n.weight;
  if (n.left >= 0) n.sum += nodes[n.left].sum;
  if (n.right >= 0) n.sum += nodes[n.right].sum;
}

void IntervalIndex::split_events(std::vector<EventNode>& nodes, int t, double key,
                                 bool inclusive, int& l, int& r) {
  if (t < 0) {
    l = r = -1;
    return;
  }
  ++ops_;
  const bool goes_left = inclusive ? nodes[t].key <= key : nodes[t].key < key;
  if (goes_left) {
    int right = -1;
    split_events(nodes, nodes[t].right, key, inclusive, right, r);
    nodes[t].right = right;
    l = t;
  } else {
    int left = -1;
    split_events(nodes, nodes[t].left, key, inclusive, l, left);
    nodes[t].left = left;
    r = t;
  }
  pull_event(nodes, t);
}

int IntervalIndex::merge_events(std::vector<EventNode>& nodes, int l, int r) {
  if (l < 0) return r;
  if (r < 0) return l;
  ++ops_;
  if (nodes[l].priority > nodes[r].priority) {
    const int right = merge_events(nodes, nodes[l].right, r);
    nodes[l].right = right;
    pull_event(nodes, l);
    return l;
  }
  const int left = merge_events(nodes, l, nodes[r].left);
  nodes[r].left = left;
  pull_event(nodes, r);
  return r;
}

void IntervalIndex::insert_event(std::vector<EventNode>& nodes, int& root, double key,
                                 GainUnits w) {
  const int id = static_cast<int>(nodes.size());
  nodes.push_back(EventNode{key, next_priority(), -1, -1, w, w});
  int l = -1;
  int r = -1;
  split_events(nodes, root, key, true, l, r);
  root = merge_events(nodes, merge_events(nodes, l, id), r);
}

GainUnits IntervalIndex::prefix_sum(const std::vector<EventNode>& nodes, int root, double key,
                                    bool inclusive) {
  GainUnits acc = 0;
  int t = root;
  while (t >= 0) {
    ++ops_;
    const auto& n = nodes[t];
    const bool included = inclusive ? n.key <= key : n.key < key;
    if (included) {
      acc += n.weight;
      if (n.left >= 0) acc += nodes[n.left].sum;
      t = n.right;
    } else {
      t = n.left;
    }
  }
  return acc;
}

void IntervalIndex::add_pair(const ValuationPair& v) {
  const std::size_t index = count_++;
  const GainUnits covering =
      prefix_sum(starts_, start_root_, v.s, true) - prefix_sum(ends_, end_root_, v.s, false);

  const int id = static_cast<int>(points_.size());
  PointNode node{v.s, index, next_priority()};
  node.own = node.max = covering;
  node.best_index = index;
  node.best_key = v.s;
  points_.push_back(node);
  int l = -1;
  int r = -1;
  split_points(point_root_, v.s, true, l, r);
  point_root_ = merge_points(merge_points(l, id), r);

  if (v.b < v.s) return;
  const GainUnits w = to_gain_units(v.b - v.s);
  if (w == 0) return;

  int below = -1;
  int rest = -1;
  int middle = -1;
  int above = -1;
  split_points(point_root_, v.s, false, below, rest);
  split_points(rest, v.b, true, middle, above);
  apply_add(middle, w);
  point_root_ = merge_points(merge_points(below, middle), above);

  insert_event(starts_, start_root_, v.s, w);
  insert_event(ends_, end_root_, v.b, w);
}

StepArgmax IntervalIndex::argmax() const {
  if (point_root_ < 0) throw ContractViolation("argmax of an empty interval index");
  const auto& root = points_[point_root_];
  return {root.max, root.best_index, root.best_key};
}

StepArgmax naive_step_argmax(std::span<const ValuationPair> pairs) {
  if (pairs.empty()) throw ContractViolation("argmax of an empty pair list");
  const std::size_t n = pairs.size();
  std::vector<std::size_t> by_s(n);
  std::iota(by_s.begin(), by_s.end(), std::size_t{0});
  std::stable_sort(by_s.begin(), by_s.end(),
                   [&](std::size_t a, std::size_t b) { return pairs[a].s < pairs[b].s; });
  std::vector<std::size_t> by_b;
  for (std::size_t i = 0; i < n; ++i) {
    if (pairs[i].b >= pairs[i].s) by_b.push_back(i);
  }
  std::sort(by_b.begin(), by_b.end(),
            [&](std::size_t a, std::size_t b) { return pairs[a].b < pairs[b].b; });

  StepArgmax best{-1, 0, 0.0};
  bool have_best = false;
  GainUnits running = 0;
  std::size_t start_ptr = 0;
  std::size_t end_ptr = 0;
  std::size_t group = 0;
  while (group < n) {
    const double x = pairs[by_s[group]].s;
    while (start_ptr < n && pairs[by_s[start_ptr]].s <= x) {
      const auto& v = pairs[by_s[start_ptr]];
      if (v.b >= v.s) running += to_gain_units(v.b - v.s);
      ++start_ptr;
    }
    while (end_ptr < by_b.size() && pairs[by_b[end_ptr]].b < x) {
      const auto& v = pairs[by_b[end_ptr]];
      running -= to_gain_units(v.b - v.s);
      ++end_ptr;
    }
    std::size_t next = group;
    while (next < n && pairs[by_s[next]].s == x) {
      const std::size_t i = by_s[next];
      if (!have_best || better(running, i, best.value, best.index)) {
        best = {running, i, x};
        have_best = true;
      }
      ++next;
    }
    group = next;
  }
  return best;
}

}  // namespace tradelab
