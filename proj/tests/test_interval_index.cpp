#include <cmath>
#include <vector>

#include "doctest.h"
#include "tradelab/oracle.hpp"
#include "tradelab/strategies.hpp"

using namespace tradelab;

namespace {

double play_full(Strategy& s, Rng& rng, double sv, double bv) {
  const double p = s.next_price(rng).value();
  s.observe(FullFeedback{sv, bv});
  return p;
}

}  // namespace

TEST_CASE("FBP opens at one half") {
  auto fbp = fbp_new();
  Rng rng(0);
  CHECK(fbp->next_price(rng).value() == 0.5);
}

TEST_CASE("FBP hand-swept examples") {
  Rng rng(0);
  {
    auto fbp = fbp_new();
    play_full(*fbp, rng, 0.2, 0.8);
    play_full(*fbp, rng, 0.5, 0.6);
    CHECK(fbp->next_price(rng).value() == 0.5);
  }
  {
    auto fbp = fbp_new();
    play_full(*fbp, rng, 0.3, 0.3);
    CHECK(fbp->next_price(rng).value() == 0.3);
  }
}

TEST_CASE("index argmax matches the naive sweep step by step") {
  struct Stream {
    const char* label;
    std::uint64_t seed;
    double grid;  // 0 keeps the raw draws; otherwise values are rounded to multiples
  };
  for (const Stream& st : {Stream{"continuous", 5, 0.0}, Stream{"coarse", 6, 1.0 / 16.0},
                           Stream{"binary", 7, 1.0}}) {
    CAPTURE(st.label);
    Rng rng(st.seed);
    IntervalIndex index;
    std::vector<ValuationPair> pairs;
    for (int t = 0; t < 2000; ++t) {
      double s = rng.uniform();
      double b = rng.uniform();
      if (st.grid > 0.0) {
        s = std::round(s / st.grid) * st.grid;
        b = std::round(b / st.grid) * st.grid;
      }
      pairs.push_back({s, b});
      index.add_pair(pairs.back());
      const auto fast = index.argmax();
      const auto slow = naive_step_argmax(pairs);
      REQUIRE(fast.value == slow.value);
      REQUIRE(fast.index == slow.index);
      REQUIRE(fast.price == slow.price);
    }
  }
}

TEST_CASE("tree and naive FBP post identical prices") {
  auto tree = fbp_new(FollowTheBestPrice::Mode::tree);
  auto naive = fbp_new(FollowTheBestPrice::Mode::naive);
  Rng data(9);
  Rng unused(0);
  for (int t = 0; t < 2000; ++t) {
    const double s = data.uniform();
    const double b = data.uniform();
    REQUIRE(play_full(*tree, unused, s, b) == play_full(*naive, unused, s, b));
  }
}

TEST_CASE("index value equals the hindsight total") {
  Rng rng(21);
  IntervalIndex index;
  std::vector<ValuationPair> pairs;
  for (int t = 0; t < 3000; ++t) {
    pairs.push_back({rng.uniform(), rng.uniform()});
    index.add_pair(pairs.back());
  }
  const auto best = empirical_best_in_hindsight(pairs);
  CHECK(from_gain_units(index.argmax().value) == doctest::Approx(best.total).epsilon(1e-12));
}

TEST_CASE("index work grows like T log T") {
  double previous_ratio = 0.0;
  for (int horizon : {1000, 10000, 100000}) {
    CAPTURE(horizon);
    auto fbp = std::make_unique<FollowTheBestPrice>();
    Rng data(horizon);
    Rng unused(0);
    for (int t = 0; t < horizon; ++t) play_full(*fbp, unused, data.uniform(), data.uniform());
    const double ratio =
        static_cast<double>(fbp->index_operations()) / (horizon * std::log2(horizon));
    CHECK(ratio <= 25.0);
    if (previous_ratio > 0.0) CHECK(ratio <= 1.5 * previous_ratio);
    previous_ratio = ratio;
  }
}

TEST_CASE("gain units are exact for sums in any order") {
  const std::vector<double> gains = {0.1, 0.2, 0.3, 1e-10, 0.7};
  GainUnits forward = 0;
  GainUnits backward = 0;
  for (std::size_t i = 0; i < gains.size(); ++i) {
    forward += to_gain_units(gains[i]);
    backward += to_gain_units(gains[gains.size() - 1 - i]);
  }
  CHECK(forward == backward);
  CHECK(from_gain_units(to_gain_units(0.5)) == 0.5);
}
