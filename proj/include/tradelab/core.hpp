#pragma once

// Valuations, prices, gain-from-trade rewards and feedback construction for
// the sequential bilateral trade game.

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace tradelab {

/// Raised when a caller breaks an operation's precondition (wrong feedback
/// variant, inverted price pair, out-of-range value).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised for user-supplied configuration that does not validate.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A posted price in [0,1].
class Price {
 public:
  constexpr Price() = default;
  explicit Price(double value);

  constexpr double value() const { return value_; }
  friend constexpr auto operator<=>(const Price&, const Price&) = default;

 private:
  double value_ = 0.0;
};

/// Private valuations of one round's seller (s) and buyer (b). No ordering is
/// implied between the two.
struct ValuationPair {
  double s = 0.0;
  double b = 0.0;

  friend constexpr bool operator==(const ValuationPair&, const ValuationPair&) = default;
};

/// Validates both components lie in [0,1]; throws ContractViolation otherwise.
ValuationPair make_valuation(double s, double b);

/// Weakly budget balanced posting: p to the seller, p_prime to the buyer,
/// with p <= p_prime. A budget balanced post has p == p_prime.
class PricePair {
 public:
  PricePair(Price p, Price p_prime);
  explicit PricePair(Price both) : p_(both), p_prime_(both) {}

  Price p() const { return p_; }
  Price p_prime() const { return p_prime_; }
  bool budget_balanced() const { return p_ == p_prime_; }

  friend bool operator==(const PricePair&, const PricePair&) = default;

 private:
  Price p_;
  Price p_prime_;
};

enum class FeedbackKind { full, realistic, trade_bit, none };

std::string_view to_string(FeedbackKind kind);
/// Parses "full", "realistic", "trade_bit" (or "one_bit"), "none".
FeedbackKind parse_feedback_kind(std::string_view text);

struct FullFeedback {
  double s = 0.0;
  double b = 0.0;
  friend bool operator==(const FullFeedback&, const FullFeedback&) = default;
};

struct RealisticFeedback {
  bool seller_accepts = false;
  bool buyer_accepts = false;
  friend bool operator==(const RealisticFeedback&, const RealisticFeedback&) = default;
};

struct TradeBitFeedback {
  bool traded = false;
  friend bool operator==(const TradeBitFeedback&, const TradeBitFeedback&) = default;
};

struct NoFeedback {
  friend bool operator==(const NoFeedback&, const NoFeedback&) = default;
};

using Feedback = std::variant<FullFeedback, RealisticFeedback, TradeBitFeedback, NoFeedback>;

FeedbackKind kind_of(const Feedback& feedback);

/// (b - s) * 1{s <= p <= b}. Ties trade.
double gft(Price p, const ValuationPair& v);

/// (b - p' + p - s) * 1{s <= p <= p' <= b}.
double gft_wbb(const PricePair& pp, const ValuationPair& v);

Feedback make_feedback(FeedbackKind kind, Price p, const ValuationPair& v);

/// Feedback for a two-price post. Realistic reports the seller's answer at p
/// and the buyer's answer at p'.
Feedback make_feedback_wbb(FeedbackKind kind, const PricePair& pp, const ValuationPair& v);

}  // namespace tradelab
