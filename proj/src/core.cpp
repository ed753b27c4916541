#include "tradelab/core.hpp"

#include <cmath>

namespace tradelab {

namespace {

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

Price::Price(double value) : value_(value) {
  if (!in_unit_interval(value)) {
    throw ContractViolation("price " + std::to_string(value) + " outside [0,1]");
  }
}

ValuationPair make_valuation(double s, double b) {
  if (!in_unit_interval(s) || !in_unit_interval(b)) {
    throw ContractViolation("valuation pair outside [0,1]^2");
  }
  return {s, b};
}

PricePair::PricePair(Price p, Price p_prime) : p_(p), p_prime_(p_prime) {
  if (p.value() > p_prime.value()) {
    throw ContractViolation("price pair requires p <= p'");
  }
}

std::string_view to_string(FeedbackKind kind) {
  switch (kind) {
    case FeedbackKind::full:
      return "full";
    case FeedbackKind::realistic:
      return "realistic";
    case FeedbackKind::trade_bit:
      return "trade_bit";
    case FeedbackKind::none:
      return "none";
  }
  return "unknown";
}

FeedbackKind parse_feedback_kind(std::string_view text) {
  if (text == "full") return FeedbackKind::full;
  if (text == "realistic") return FeedbackKind::realistic;
  if (text == "trade_bit" || text == "one_bit") return FeedbackKind::trade_bit;
  if (text == "none") return FeedbackKind::none;
  throw ConfigError("unknown feedback kind '" + std::string(text) + "'");
}

FeedbackKind kind_of(const Feedback& feedback) {
  switch (feedback.index()) {
    case 0:
      return FeedbackKind::full;
    case 1:
      return FeedbackKind::realistic;
    case 2:
      return FeedbackKind::trade_bit;
    default:
      return FeedbackKind::none;
  }
}

double gft(Price p, const ValuationPair& v) {
  const double x = p.value();
  return (v.s <= x && x <= v.b) ? v.b - v.s : 0.0;
}

double gft_wbb(const PricePair& pp, const ValuationPair& v) {
  const double p = pp.p().value();
  const double q = pp.p_prime().value();
  if (v.s <= p && p <= q && q <= v.b) {
    return (v.b - q) + (p - v.s);
  }
  return 0.0;
}

Feedback make_feedback(FeedbackKind kind, Price p, const ValuationPair& v) {
  return make_feedback_wbb(kind, PricePair(p), v);
}

Feedback make_feedback_wbb(FeedbackKind kind, const PricePair& pp, const ValuationPair& v) {
  const double p = pp.p().value();
  const double q = pp.p_prime().value();
  switch (kind) {
    case FeedbackKind::full:
      return FullFeedback{v.s, v.b};
    case FeedbackKind::realistic:
      return RealisticFeedback{v.s <= p, q <= v.b};
    case FeedbackKind::trade_bit:
      return TradeBitFeedback{v.s <= p && p <= q && q <= v.b};
    case FeedbackKind::none:
      break;
  }
  return NoFeedback{};
}

}  // namespace tradelab
