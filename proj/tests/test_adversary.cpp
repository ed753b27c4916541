#include <cmath>
#include <vector>

#include "doctest.h"
#include "tradelab/adversary.hpp"

using namespace tradelab;
using doctest::Approx;

namespace {

SnapshotFactory fixed(double p) {
  return [p] { return fixed_price_new(Price(p)); };
}

SnapshotFactory fbp_factory() {
  return [] { return fbp_new(); };
}

}  // namespace

TEST_CASE("one-step traces") {
  AdversaryState low(0.03);
  CHECK(low.threshold() == Approx(0.485));
  const auto v1 = low.next_valuation(1, 0.0);
  CHECK(v1.s == 0.0);
  CHECK(v1.b == Approx(0.485));
  CHECK(low.c() == Approx(0.455));
  CHECK(low.d() == Approx(0.485));
  CHECK(low.common_price().value() == Approx(0.455));

  AdversaryState high(0.03);
  const auto v2 = high.next_valuation(1, 1.0);
  CHECK(v2.s == Approx(0.515));
  CHECK(v2.b == 1.0);
  CHECK(high.c() == Approx(0.515));
  CHECK(high.d() == Approx(0.545));
}

TEST_CASE("argument and ordering errors") {
  CHECK_THROWS_AS(AdversaryState(0.0), ContractViolation);
  CHECK_THROWS_AS(AdversaryState(1.0 / 18.0), ContractViolation);
  CHECK_THROWS_AS(AdversaryState(0.03, 0), ContractViolation);
  AdversaryState st(0.03);
  CHECK_THROWS_AS(st.common_price(), ContractViolation);
  CHECK_THROWS_AS(st.next_valuation(2, 0.0), ContractViolation);
  CHECK_THROWS_AS(st.next_valuation(1, 1.5), ContractViolation);
  st.next_valuation(1, 0.0);
  CHECK_THROWS_AS(st.next_valuation(1, 0.0), ContractViolation);
  CHECK_NOTHROW(st.next_valuation(2, 0.0));
}

TEST_CASE("probe_mass on Dirac and uniform strategies") {
  Rng rng(1);
  CHECK(probe_mass(fixed(0.9), {}, Price(0.485), 1, rng) == 0.0);
  CHECK(probe_mass(fixed(0.2), {}, Price(0.485), 1, rng) == 1.0);
  const double mass =
      probe_mass([] { return random_price_new(); }, {}, Price(0.5), 10000, rng);
  CHECK(std::abs(mass - 0.5) <= 0.02);
}

TEST_CASE("probe bank matches replay probing for a deterministic learner") {
  AdversaryState st(0.03);
  ProbeBank bank(fbp_factory(), 1, 17);
  Rng rng(2);
  for (std::uint64_t t = 1; t <= 60; ++t) {
    const double threshold = st.threshold();
    const double incremental = bank.probe(threshold);
    const double replayed = probe_mass(fbp_factory(), st.history(), Price(threshold), 1, rng);
    REQUIRE(incremental == replayed);
    bank.reveal(st.next_valuation(t, incremental));
  }
}

TEST_CASE("probe bank refuses learners without full feedback") {
  CHECK_THROWS_AS(ProbeBank([] { return scouting_blindits_new({3, 2}); }, 1, 0), ConfigError);
}

TEST_CASE("nesting, separation and containment against FBP") {
  const double eps = 0.03;
  ObliviousAdversary adversary(eps, fbp_factory(), 1, 5);
  double prev_c = 0.0;
  double prev_d = 1.0;
  for (int t = 1; t <= 1000; ++t) {
    const auto v = adversary.next();
    const auto& st = adversary.state();
    REQUIRE(prev_c <= st.c());
    REQUIRE(st.c() <= st.d());
    REQUIRE(st.d() <= prev_d);
    REQUIRE(v.b - v.s >= (1.0 - 3.0 * eps) / 2.0 - 1e-15);
    if (st.geometric()) REQUIRE(st.d() - st.c() == Approx(eps / std::pow(3.0, t - 1)));
    prev_c = st.c();
    prev_d = st.d();
  }
  const double c = adversary.state().common_price().value();
  for (const auto& v : adversary.state().history()) {
    REQUIRE(v.s <= c);
    REQUIRE(c <= v.b);
  }
}

TEST_CASE("the interval freezes once its width underflows") {
  AdversaryState st(0.03);
  Rng rng(3);
  for (std::uint64_t t = 1; t <= 100; ++t) st.next_valuation(t, rng.bernoulli(0.5) ? 1.0 : 0.0);
  CHECK(st.frozen());
  CHECK(st.c() == st.d());
  const auto last = st.history().back();
  CHECK(last.b - last.s >= (1.0 - 3.0 * 0.03) / 2.0);
}

TEST_CASE("deterministic learner suffers at least (1 - 3 eps) T / 4") {
  const double eps = 0.03;
  const int horizon = 2000;
  ObliviousAdversary adversary(eps, fbp_factory(), 1, 6);
  auto learner = fbp_new();
  Rng rng(7);
  std::vector<Price> posts;
  for (int t = 0; t < horizon; ++t) {
    const Price p = learner->next_price(rng);
    const auto v = adversary.next();
    learner->observe(FullFeedback{v.s, v.b});
    posts.push_back(p);
  }
  const Price star = adversary.state().common_price();
  double regret = 0.0;
  const auto& history = adversary.state().history();
  for (std::size_t t = 0; t < history.size(); ++t) {
    regret += gft(star, history[t]) - gft(posts[t], history[t]);
  }
  CHECK(regret >= (1.0 - 3.0 * eps) / 4.0 * horizon);
}
