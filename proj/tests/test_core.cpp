#include <variant>

#include "doctest.h"
#include "tradelab/core.hpp"
#include "tradelab/rng.hpp"

using namespace tradelab;

namespace {
ValuationPair vp(double s, double b) { return make_valuation(s, b); }
PricePair pp(double p, double q) { return PricePair(Price(p), Price(q)); }
}  // namespace

TEST_CASE("gft pays b - s only when the price clears both sides") {
  CHECK(gft(Price(0.5), vp(0.25, 0.75)) == doctest::Approx(0.5));
  CHECK(gft(Price(0.2), vp(0.25, 0.75)) == 0.0);
  CHECK(gft(Price(0.3), vp(0.3, 0.3)) == 0.0);
  CHECK(gft(Price(0.75), vp(0.25, 0.75)) == doctest::Approx(0.5));
  CHECK(gft(Price(0.5), vp(0.8, 0.2)) == 0.0);
}

TEST_CASE("gft_wbb on two-price posts") {
  CHECK(gft_wbb(pp(0.3, 0.6), vp(0.2, 0.8)) == doctest::Approx(0.3));
  CHECK(gft_wbb(pp(0.5, 0.5), vp(0.25, 0.75)) == doctest::Approx(0.5));
  CHECK(gft_wbb(pp(0.1, 0.9), vp(0.2, 0.8)) == 0.0);
  CHECK_THROWS_AS(pp(0.6, 0.3), ContractViolation);
}

TEST_CASE("out-of-range values are rejected") {
  CHECK_THROWS_AS(Price(1.5), ContractViolation);
  CHECK_THROWS_AS(Price(-0.1), ContractViolation);
  CHECK_THROWS_AS(make_valuation(0.2, 1.01), ContractViolation);
}

TEST_CASE("make_feedback reveals the configured variant") {
  const auto v = vp(0.25, 0.75);
  CHECK(std::get<RealisticFeedback>(make_feedback(FeedbackKind::realistic, Price(0.5), v)) ==
        RealisticFeedback{true, true});
  CHECK(std::get<RealisticFeedback>(make_feedback(FeedbackKind::realistic, Price(0.1), v)) ==
        RealisticFeedback{false, true});
  CHECK(std::get<TradeBitFeedback>(make_feedback(FeedbackKind::trade_bit, Price(0.9), v)) ==
        TradeBitFeedback{false});
  CHECK(std::get<FullFeedback>(make_feedback(FeedbackKind::full, Price(0.9), v)) ==
        FullFeedback{0.25, 0.75});
  CHECK(std::holds_alternative<NoFeedback>(make_feedback(FeedbackKind::none, Price(0.9), v)));
}

TEST_CASE("make_feedback_wbb uses p for the seller and p' for the buyer") {
  CHECK(std::get<TradeBitFeedback>(
            make_feedback_wbb(FeedbackKind::trade_bit, pp(0.3, 0.6), vp(0.2, 0.8))) ==
        TradeBitFeedback{true});
  CHECK(std::get<TradeBitFeedback>(
            make_feedback_wbb(FeedbackKind::trade_bit, pp(0.3, 0.6), vp(0.4, 0.8))) ==
        TradeBitFeedback{false});
  CHECK(std::get<RealisticFeedback>(
            make_feedback_wbb(FeedbackKind::realistic, pp(0.3, 0.6), vp(0.2, 0.5))) ==
        RealisticFeedback{true, false});
}

TEST_CASE("feedback kind names round-trip") {
  for (auto kind : {FeedbackKind::full, FeedbackKind::realistic, FeedbackKind::trade_bit,
                    FeedbackKind::none}) {
    CHECK(parse_feedback_kind(to_string(kind)) == kind);
    CHECK(kind_of(make_feedback(kind, Price(0.5), vp(0.1, 0.9))) == kind);
  }
  CHECK(parse_feedback_kind("one_bit") == FeedbackKind::trade_bit);
  CHECK_THROWS(parse_feedback_kind("partial"));
}

TEST_CASE("random sweep: gft range and consistency with gft_wbb") {
  Rng rng(11);
  for (int i = 0; i < 100000; ++i) {
    const double p = rng.uniform();
    const auto v = vp(rng.uniform(), rng.uniform());
    const double g = gft(Price(p), v);
    REQUIRE(g >= 0.0);
    REQUIRE(g <= 1.0);
    REQUIRE(gft_wbb(PricePair(Price(p)), v) == g);
    if (g > 0.0) REQUIRE((v.s <= p && p <= v.b));
    const double q = p + (1.0 - p) * rng.uniform();
    REQUIRE(gft_wbb(pp(p, q), v) <= g + 1e-15);
  }
}
