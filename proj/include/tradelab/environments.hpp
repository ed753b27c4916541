#pragma once

// Joint laws of (S, B) used as stochastic environments, with exact expected
// gain from trade and best fixed price solvers.

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tradelab/core.hpp"
#include "tradelab/rng.hpp"

namespace tradelab {

/// Mass tolerance accepted when validating a density or atom table.
inline constexpr double kMassTolerance = 1e-12;

struct Segment {
  double lo = 0.0;
  double hi = 0.0;
  double height = 0.0;
};

/// Density that is constant on finitely many disjoint sub-intervals of [0,1].
class PiecewiseUniformDensity {
 public:
  /// Segments must be sorted, non-overlapping, inside [0,1], with lo < hi and
  /// height >= 0, total mass 1 and max height <= declared_bound.
  PiecewiseUniformDensity(std::vector<Segment> segments, double declared_bound);

  double pdf(double x) const;
  double cdf(double x) const;
  /// E[(x - X)+], i.e. the integral of the CDF over [0, x].
  double lower_partial(double x) const;
  /// E[(X - x)+], i.e. the integral of the survival function over [x, 1].
  double upper_partial(double x) const;
  double quantile(double u) const;
  double max_height() const { return max_height_; }
  double declared_bound() const { return declared_bound_; }
  const std::vector<Segment>& segments() const { return segments_; }
  std::vector<double> breakpoints() const;

 private:
  std::vector<Segment> segments_;
  std::vector<double> cumulative_;  // mass strictly before each segment
  double declared_bound_;
  double max_height_ = 0.0;
};

struct Atom {
  double point = 0.0;
  double prob = 0.0;
};

class DiscreteDistribution {
 public:
  /// Points distinct and inside [0,1]; probabilities non-negative, summing to 1.
  explicit DiscreteDistribution(std::vector<Atom> atoms);

  /// P[X <= x].
  double cdf(double x) const;
  /// P[X >= x].
  double survival(double x) const;
  double lower_partial(double x) const;
  double upper_partial(double x) const;
  double sample(Rng& rng) const;
  const std::vector<Atom>& atoms() const { return atoms_; }

 private:
  std::vector<Atom> atoms_;  // sorted by point
};

/// Smooth density on [0,1] given by closed-form pdf and CDF.
class SmoothDensity1D {
 public:
  SmoothDensity1D(std::function<double(double)> pdf, std::function<double(double)> cdf,
                  std::string label, double declared_bound);

  double pdf(double x) const { return pdf_(x); }
  double cdf(double x) const;
  double lower_partial(double x) const;
  double upper_partial(double x) const;
  /// Inverse of the CDF by bisection, to 1e-12.
  double quantile(double u) const;
  const std::string& label() const { return label_; }
  double declared_bound() const { return declared_bound_; }

 private:
  std::function<double(double)> pdf_;
  std::function<double(double)> cdf_;
  std::string label_;
  double declared_bound_;
};

/// One coordinate's law: seller or buyer marginal of an independent product.
class Marginal {
 public:
  using Variant = std::variant<PiecewiseUniformDensity, DiscreteDistribution, SmoothDensity1D>;

  Marginal(PiecewiseUniformDensity d) : law_(std::move(d)) {}  // NOLINT
  Marginal(DiscreteDistribution d) : law_(std::move(d)) {}     // NOLINT
  Marginal(SmoothDensity1D d) : law_(std::move(d)) {}          // NOLINT

  double cdf(double x) const;
  double survival(double x) const;
  double lower_partial(double x) const;
  double upper_partial(double x) const;
  /// P[lo <= X <= hi].
  double mass(double lo, double hi) const;
  double sample(Rng& rng) const;
  std::vector<double> breakpoints() const;
  /// Supremum of the density, when one exists.
  std::optional<double> density_bound() const;
  bool is_smooth() const { return std::holds_alternative<SmoothDensity1D>(law_); }
  bool is_discrete() const { return std::holds_alternative<DiscreteDistribution>(law_); }
  const Variant& law() const { return law_; }

 private:
  Variant law_;
};

struct IndependentProduct {
  Marginal seller;
  Marginal buyer;
};

struct Rectangle {
  double s_lo = 0.0;
  double s_hi = 0.0;
  double b_lo = 0.0;
  double b_hi = 0.0;
  double weight = 0.0;

  double area() const { return (s_hi - s_lo) * (b_hi - b_lo); }
};

/// Mixture of uniform laws on axis-aligned rectangles; each rectangle
/// contributes density weight / area.
class RectangleMixtureJoint {
 public:
  RectangleMixtureJoint(std::vector<Rectangle> rectangles, double declared_bound);

  const std::vector<Rectangle>& rectangles() const { return rectangles_; }
  double declared_bound() const { return declared_bound_; }
  double max_density() const { return max_density_; }

 private:
  std::vector<Rectangle> rectangles_;
  double declared_bound_;
  double max_density_ = 0.0;
};

struct JointAtom {
  double s = 0.0;
  double b = 0.0;
  double prob = 0.0;
};

class DiscreteJoint {
 public:
  explicit DiscreteJoint(std::vector<JointAtom> atoms);
  const std::vector<JointAtom>& atoms() const { return atoms_; }

 private:
  std::vector<JointAtom> atoms_;
};

/// Quadrant masses around (p, p), in the order
/// P[S<=p,B<=p], P[S<=p,B>=p], P[S>=p,B>=p], P[S>=p,B<=p].
using QuadrantMasses = std::array<double, 4>;

struct BestPrice {
  Price price;
  double value = 0.0;
};

/// Immutable law of (S_1, B_1). Safe to share across threads.
class PairDistribution {
 public:
  using Variant = std::variant<IndependentProduct, RectangleMixtureJoint, DiscreteJoint>;

  PairDistribution(std::string name, Variant law);

  const std::string& name() const { return name_; }
  const Variant& law() const { return law_; }

  ValuationPair sample(Rng& rng) const;

  double expected_gft(Price p) const;
  double expected_gft_wbb(const PricePair& pp) const;

  /// P[s_lo <= S <= s_hi, b_lo <= B <= b_hi].
  double region_mass(double s_lo, double s_hi, double b_lo, double b_hi) const;
  QuadrantMasses quadrant_masses(double p) const;
  /// P[S <= p <= B].
  double trade_probability(double p) const;
  double seller_cdf(double x) const;
  /// Smallest m with P[S <= m] >= 1/2.
  double seller_median() const;

  /// Every point where the expected GFT may fail to be smooth, plus 0 and 1.
  std::vector<double> breakpoints() const;
  /// Supremum of the joint density; empty for laws with atoms.
  std::optional<double> density_bound() const;
  bool has_smooth_marginal() const;
  bool is_discrete() const;

 private:
  std::string name_;
  Variant law_;
};

/// Argmax of expected_gft over breakpoints and a uniform grid of `resolution`
/// points, refined by golden-section search in the winning bracket. Ties go to
/// the smaller price.
BestPrice best_price(const PairDistribution& d, int resolution = 1001);

// Instance families.

PairDistribution uniform_iid();
PairDistribution sqrt_lower_instance(double eps);
PairDistribution t23_lower_instance(double eps);
PairDistribution bd_lower_instance(double lambda);
PairDistribution needle_instance(double x);
/// (U[0,1] x U[0,1], S' x B'): equal trade probability at every price.
std::pair<PairDistribution, PairDistribution> one_bit_pair();
PairDistribution footnote_instance(double eps);

/// Width of the t23 instance's density blocks.
inline constexpr double kT23Theta = 1.0 / 48.0;

}  // namespace tradelab
