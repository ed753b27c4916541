#include "tradelab/environments.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace tradelab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

double overlap(double lo1, double hi1, double lo2, double hi2) {
  return std::max(0.0, std::min(hi1, hi2) - std::max(lo1, lo2));
}

double integrate(const std::function<double(double)>& f, double a, double b) {
  if (b <= a) return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(f, a, b, 10, 1e-13);
}

void sort_unique(std::vector<double>& xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
}

}  // namespace

// ---------------------------------------------------------------------------
// PiecewiseUniformDensity

PiecewiseUniformDensity::PiecewiseUniformDensity(std::vector<Segment> segments,
                                                 double declared_bound)
    : segments_(std::move(segments)), declared_bound_(declared_bound) {
  if (segments_.empty()) throw ContractViolation("piecewise density needs a segment");
  double mass = 0.0;
  double prev_hi = 0.0;
  for (const auto& seg : segments_) {
    if (!(seg.lo < seg.hi) || seg.lo < prev_hi || seg.lo < 0.0 || seg.hi > 1.0 ||
        seg.height < 0.0) {
      throw ContractViolation("piecewise density segments must be sorted, disjoint and in [0,1]");
    }
    cumulative_.push_back(mass);
    mass += seg.height * (seg.hi - seg.lo);
    max_height_ = std::max(max_height_, seg.height);
    prev_hi = seg.hi;
  }
  if (std::abs(mass - 1.0) > kMassTolerance) {
    throw ContractViolation("piecewise density has total mass " + std::to_string(mass));
  }
  if (max_height_ > declared_bound_ * (1.0 + 1e-12)) {
    throw ContractViolation("piecewise density exceeds its declared bound");
  }
}

double PiecewiseUniformDensity::pdf(double x) const {
  for (const auto& seg : segments_) {
    if (seg.lo <= x && x <= seg.hi) return seg.height;
  }
  return 0.0;
}

double PiecewiseUniformDensity::cdf(double x) const {
  double acc = 0.0;
  for (const auto& seg : segments_) {
    acc += seg.height * std::clamp(x - seg.lo, 0.0, seg.hi - seg.lo);
  }
  return std::min(acc, 1.0);
}

double PiecewiseUniformDensity::lower_partial(double x) const {
  double acc = 0.0;
  for (const auto& seg : segments_) {
    const double top = std::min(seg.hi, x);
    if (top <= seg.lo) continue;
    // integral of (x - t) over [lo, top]
    acc += seg.height * ((x - seg.lo) * (x - seg.lo) - (x - top) * (x - top)) / 2.0;
  }
  return acc;
}

double PiecewiseUniformDensity::upper_partial(double x) const {
  double acc = 0.0;
  for (const auto& seg : segments_) {
    const double bottom = std::max(seg.lo, x);
    if (bottom >= seg.hi) continue;
    acc += seg.height * ((seg.hi - x) * (seg.hi - x) - (bottom - x) * (bottom - x)) / 2.0;
  }
  return acc;
}

double PiecewiseUniformDensity::quantile(double u) const {
  u = clamp01(u);
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& seg = segments_[i];
    const double seg_mass = seg.height * (seg.hi - seg.lo);
    if (seg_mass <= 0.0) continue;
    if (u < cumulative_[i] + seg_mass || i + 1 == segments_.size()) {
      return std::clamp(seg.lo + (u - cumulative_[i]) / seg.height, seg.lo, seg.hi);
    }
  }
  // Trailing zero-mass segments; fall back to the last segment with mass.
  for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) {
    if (it->height > 0.0) return it->hi;
  }
  return 1.0;
}

std::vector<double> PiecewiseUniformDensity::breakpoints() const {
  std::vector<double> out;
  for (const auto& seg : segments_) {
    out.push_back(seg.lo);
    out.push_back(seg.hi);
  }
  return out;
}

// ---------------------------------------------------------------------------
// DiscreteDistribution

DiscreteDistribution::DiscreteDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw ContractViolation("discrete distribution needs an atom");
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& a, const Atom& b) { return a.point < b.point; });
  double mass = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const auto& a = atoms_[i];
    if (a.point < 0.0 || a.point > 1.0 || a.prob < 0.0) {
      throw ContractViolation("discrete atom outside [0,1] or with negative mass");
    }
    if (i > 0 && atoms_[i - 1].point == a.point) {
      throw ContractViolation("discrete atoms must be distinct");
    }
    mass += a.prob;
  }
  if (std::abs(mass - 1.0) > kMassTolerance) {
    throw ContractViolation("discrete distribution has total mass " + std::to_string(mass));
  }
}

double DiscreteDistribution::cdf(double x) const {
  double acc = 0.0;
  for (const auto& a : atoms_) {
    if (a.point <= x) acc += a.prob;
  }
  return acc;
}

double DiscreteDistribution::survival(double x) const {
  double acc = 0.0;
  for (const auto& a : atoms_) {
    if (a.point >= x) acc += a.prob;
  }
  return acc;
}

double DiscreteDistribution::lower_partial(double x) const {
  double acc = 0.0;
  for (const auto& a : atoms_) {
    if (a.point < x) acc += a.prob * (x - a.point);
  }
  return acc;
}

double DiscreteDistribution::upper_partial(double x) const {
  double acc = 0.0;
  for (const auto& a : atoms_) {
    if (a.point > x) acc += a.prob * (a.point - x);
  }
  return acc;
}

double DiscreteDistribution::sample(Rng& rng) const {
  const double u = rng.uniform();
  double acc = 0.0;
  for (const auto& a : atoms_) {
    acc += a.prob;
    if (u < acc) return a.point;
  }
  // Rounding left u above the accumulated mass: return the last charged atom.
  for (auto it = atoms_.rbegin(); it != atoms_.rend(); ++it) {
    if (it->prob > 0.0) return it->point;
  }
  return atoms_.back().point;
}

// ---------------------------------------------------------------------------
// SmoothDensity1D

SmoothDensity1D::SmoothDensity1D(std::function<double(double)> pdf,
                                 std::function<double(double)> cdf, std::string label,
                                 double declared_bound)
    : pdf_(std::move(pdf)),
      cdf_(std::move(cdf)),
      label_(std::move(label)),
      declared_bound_(declared_bound) {
  if (std::abs(cdf_(0.0)) > kMassTolerance || std::abs(cdf_(1.0) - 1.0) > kMassTolerance) {
    throw ContractViolation("smooth density '" + label_ + "' must have cdf(0)=0 and cdf(1)=1");
  }
}

double SmoothDensity1D::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return cdf_(x);
}

double SmoothDensity1D::lower_partial(double x) const {
  x = clamp01(x);
  return integrate([this](double t) { return cdf(t); }, 0.0, x);
}

double SmoothDensity1D::upper_partial(double x) const {
  x = clamp01(x);
  return integrate([this](double t) { return 1.0 - cdf(t); }, x, 1.0);
}

double SmoothDensity1D::quantile(double u) const {
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Marginal

double Marginal::cdf(double x) const {
  return std::visit([x](const auto& d) { return d.cdf(x); }, law_);
}

double Marginal::survival(double x) const {
  return std::visit(Overloaded{
                        [x](const DiscreteDistribution& d) { return d.survival(x); },
                        [x](const auto& d) { return 1.0 - d.cdf(x); },
                    },
                    law_);
}

double Marginal::lower_partial(double x) const {
  return std::visit([x](const auto& d) { return d.lower_partial(x); }, law_);
}

double Marginal::upper_partial(double x) const {
  return std::visit([x](const auto& d) { return d.upper_partial(x); }, law_);
}

double Marginal::mass(double lo, double hi) const {
  if (hi < lo) return 0.0;
  return std::visit(Overloaded{
                        [&](const DiscreteDistribution& d) {
                          double acc = 0.0;
                          for (const auto& a : d.atoms()) {
                            if (lo <= a.point && a.point <= hi) acc += a.prob;
                          }
                          return acc;
                        },
                        [&](const auto& d) { return d.cdf(hi) - d.cdf(lo); },
                    },
                    law_);
}

double Marginal::sample(Rng& rng) const {
  return std::visit(Overloaded{
                        [&](const DiscreteDistribution& d) { return d.sample(rng); },
                        [&](const auto& d) { return d.quantile(rng.uniform()); },
                    },
                    law_);
}

std::vector<double> Marginal::breakpoints() const {
  return std::visit(Overloaded{
                        [](const PiecewiseUniformDensity& d) { return d.breakpoints(); },
                        [](const DiscreteDistribution& d) {
                          std::vector<double> out;
                          for (const auto& a : d.atoms()) out.push_back(a.point);
                          return out;
                        },
                        [](const SmoothDensity1D&) { return std::vector<double>{}; },
                    },
                    law_);
}

std::optional<double> Marginal::density_bound() const {
  return std::visit(Overloaded{
                        [](const PiecewiseUniformDensity& d) -> std::optional<double> {
                          return d.max_height();
                        },
                        [](const DiscreteDistribution&) -> std::optional<double> {
                          return std::nullopt;
                        },
                        [](const SmoothDensity1D& d) -> std::optional<double> {
                          return d.declared_bound();
                        },
                    },
                    law_);
}

// ---------------------------------------------------------------------------
// Joint laws

RectangleMixtureJoint::RectangleMixtureJoint(std::vector<Rectangle> rectangles,
                                             double declared_bound)
    : rectangles_(std::move(rectangles)), declared_bound_(declared_bound) {
  double mass = 0.0;
  for (const auto& r : rectangles_) {
    if (!(r.s_lo < r.s_hi) || !(r.b_lo < r.b_hi) || r.s_lo < 0.0 || r.b_lo < 0.0 ||
        r.s_hi > 1.0 || r.b_hi > 1.0 || r.weight < 0.0) {
      throw ContractViolation("rectangle outside [0,1]^2 or with negative weight");
    }
    mass += r.weight;
    max_density_ = std::max(max_density_, r.weight / r.area());
  }
  if (std::abs(mass - 1.0) > kMassTolerance) {
    throw ContractViolation("rectangle mixture has total weight " + std::to_string(mass));
  }
  // Rectangles of one mixture may overlap; the pointwise bound is the sum of
  // heights covering a point, checked against every rectangle corner cell.
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& r : rectangles_) {
    xs.insert(xs.end(), {r.s_lo, r.s_hi});
    ys.insert(ys.end(), {r.b_lo, r.b_hi});
  }
  sort_unique(xs);
  sort_unique(ys);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      const double cx = 0.5 * (xs[i] + xs[i + 1]);
      const double cy = 0.5 * (ys[j] + ys[j + 1]);
      double h = 0.0;
      for (const auto& r : rectangles_) {
        if (r.s_lo <= cx && cx <= r.s_hi && r.b_lo <= cy && cy <= r.b_hi) h += r.weight / r.area();
      }
      max_density_ = std::max(max_density_, h);
    }
  }
  if (max_density_ > declared_bound_ * (1.0 + 1e-12)) {
    throw ContractViolation("rectangle mixture exceeds its declared density bound");
  }
}

DiscreteJoint::DiscreteJoint(std::vector<JointAtom> atoms) : atoms_(std::move(atoms)) {
  double mass = 0.0;
  for (const auto& a : atoms_) {
    if (a.s < 0.0 || a.s > 1.0 || a.b < 0.0 || a.b > 1.0 || a.prob < 0.0) {
      throw ContractViolation("joint atom outside [0,1]^2 or with negative mass");
    }
    mass += a.prob;
  }
  if (atoms_.empty() || std::abs(mass - 1.0) > kMassTolerance) {
    throw ContractViolation("discrete joint has total mass " + std::to_string(mass));
  }
}

// ---------------------------------------------------------------------------
// PairDistribution

PairDistribution::PairDistribution(std::string name, Variant law)
    : name_(std::move(name)), law_(std::move(law)) {}

ValuationPair PairDistribution::sample(Rng& rng) const {
  return std::visit(
      Overloaded{
          [&](const IndependentProduct& d) {
            const double s = d.seller.sample(rng);
            const double b = d.buyer.sample(rng);
            return ValuationPair{s, b};
          },
          [&](const RectangleMixtureJoint& d) {
            const double u = rng.uniform();
            double acc = 0.0;
            const Rectangle* chosen = nullptr;
            for (const auto& r : d.rectangles()) {
              if (r.weight <= 0.0) continue;
              chosen = &r;
              acc += r.weight;
              if (u < acc) break;
            }
            const double s = rng.uniform(chosen->s_lo, chosen->s_hi);
            const double b = rng.uniform(chosen->b_lo, chosen->b_hi);
            return ValuationPair{s, b};
          },
          [&](const DiscreteJoint& d) {
            const double u = rng.uniform();
            double acc = 0.0;
            const JointAtom* chosen = nullptr;
            for (const auto& a : d.atoms()) {
              if (a.prob <= 0.0) continue;
              chosen = &a;
              acc += a.prob;
              if (u < acc) break;
            }
            return ValuationPair{chosen->s, chosen->b};
          },
      },
      law_);
}

double PairDistribution::expected_gft(Price p) const { return expected_gft_wbb(PricePair(p)); }

double PairDistribution::expected_gft_wbb(const PricePair& pp) const {
  const double p = pp.p().value();
  const double q = pp.p_prime().value();
  return std::visit(
      Overloaded{
          [&](const IndependentProduct& d) {
            // E[(B - q) 1{S<=p, B>=q}] + E[(p - S) 1{S<=p, B>=q}]
            return d.seller.cdf(p) * d.buyer.upper_partial(q) +
                   d.buyer.survival(q) * d.seller.lower_partial(p);
          },
          [&](const RectangleMixtureJoint& d) {
            double acc = 0.0;
            for (const auto& r : d.rectangles()) {
              const double s_top = std::min(r.s_hi, p);
              const double b_bottom = std::max(r.b_lo, q);
              const double ls = s_top - r.s_lo;
              const double lb = r.b_hi - b_bottom;
              if (ls <= 0.0 || lb <= 0.0 || r.weight <= 0.0) continue;
              const double h = r.weight / r.area();
              const double buyer_part = ((r.b_hi - q) * (r.b_hi - q) -
                                         (b_bottom - q) * (b_bottom - q)) / 2.0;
              const double seller_part = ((p - r.s_lo) * (p - r.s_lo) -
                                          (p - s_top) * (p - s_top)) / 2.0;
              acc += h * (ls * buyer_part + lb * seller_part);
            }
            return acc;
          },
          [&](const DiscreteJoint& d) {
            double acc = 0.0;
            for (const auto& a : d.atoms()) acc += a.prob * gft_wbb(pp, {a.s, a.b});
            return acc;
          },
      },
      law_);
}

double PairDistribution::region_mass(double s_lo, double s_hi, double b_lo, double b_hi) const {
  return std::visit(Overloaded{
                        [&](const IndependentProduct& d) {
                          return d.seller.mass(s_lo, s_hi) * d.buyer.mass(b_lo, b_hi);
                        },
                        [&](const RectangleMixtureJoint& d) {
                          double acc = 0.0;
                          for (const auto& r : d.rectangles()) {
                            acc += r.weight * overlap(r.s_lo, r.s_hi, s_lo, s_hi) *
                                   overlap(r.b_lo, r.b_hi, b_lo, b_hi) / r.area();
                          }
                          return acc;
                        },
                        [&](const DiscreteJoint& d) {
                          double acc = 0.0;
                          for (const auto& a : d.atoms()) {
                            if (s_lo <= a.s && a.s <= s_hi && b_lo <= a.b && a.b <= b_hi) {
                              acc += a.prob;
                            }
                          }
                          return acc;
                        },
                    },
                    law_);
}

QuadrantMasses PairDistribution::quadrant_masses(double p) const {
  return {region_mass(0.0, p, 0.0, p), region_mass(0.0, p, p, 1.0), region_mass(p, 1.0, p, 1.0),
          region_mass(p, 1.0, 0.0, p)};
}

double PairDistribution::trade_probability(double p) const {
  return region_mass(0.0, p, p, 1.0);
}

double PairDistribution::seller_cdf(double x) const { return region_mass(0.0, x, 0.0, 1.0); }

double PairDistribution::seller_median() const {
  if (const auto* ind = std::get_if<IndependentProduct>(&law_)) {
    if (const auto* disc = std::get_if<DiscreteDistribution>(&ind->seller.law())) {
      double acc = 0.0;
      for (const auto& a : disc->atoms()) {
        acc += a.prob;
        if (acc >= 0.5 - kMassTolerance) return a.point;
      }
      return disc->atoms().back().point;
    }
  }
  if (const auto* joint = std::get_if<DiscreteJoint>(&law_)) {
    std::vector<double> points;
    for (const auto& a : joint->atoms()) points.push_back(a.s);
    sort_unique(points);
    for (double x : points) {
      if (seller_cdf(x) >= 0.5 - kMassTolerance) return x;
    }
    return points.back();
  }
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (seller_cdf(mid) >= 0.5) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::vector<double> PairDistribution::breakpoints() const {
  std::vector<double> out{0.0, 1.0};
  std::visit(Overloaded{
                 [&](const IndependentProduct& d) {
                   for (double x : d.seller.breakpoints()) out.push_back(x);
                   for (double x : d.buyer.breakpoints()) out.push_back(x);
                 },
                 [&](const RectangleMixtureJoint& d) {
                   for (const auto& r : d.rectangles()) {
                     out.insert(out.end(), {r.s_lo, r.s_hi, r.b_lo, r.b_hi});
                   }
                 },
                 [&](const DiscreteJoint& d) {
                   for (const auto& a : d.atoms()) out.insert(out.end(), {a.s, a.b});
                 },
             },
             law_);
  sort_unique(out);
  return out;
}

std::optional<double> PairDistribution::density_bound() const {
  return std::visit(Overloaded{
                        [](const IndependentProduct& d) -> std::optional<double> {
                          const auto s = d.seller.density_bound();
                          const auto b = d.buyer.density_bound();
                          if (!s || !b) return std::nullopt;
                          return *s * *b;
                        },
                        [](const RectangleMixtureJoint& d) -> std::optional<double> {
                          return d.max_density();
                        },
                        [](const DiscreteJoint&) -> std::optional<double> {
                          return std::nullopt;
                        },
                    },
                    law_);
}

bool PairDistribution::has_smooth_marginal() const {
  const auto* ind = std::get_if<IndependentProduct>(&law_);
  return ind != nullptr && (ind->seller.is_smooth() || ind->buyer.is_smooth());
}

bool PairDistribution::is_discrete() const {
  if (std::holds_alternative<DiscreteJoint>(law_)) return true;
  const auto* ind = std::get_if<IndependentProduct>(&law_);
  return ind != nullptr && ind->seller.is_discrete() && ind->buyer.is_discrete();
}

// ---------------------------------------------------------------------------
// best_price

namespace {

constexpr double kTieTolerance = 1e-12;

// Maximizes f over [a, b] assuming unimodality; returns (x, f(x)).
std::pair<double, double> golden_section_max(const std::function<double(double)>& f, double a,
                                             double b) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > 1e-12) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

}  // namespace

BestPrice best_price(const PairDistribution& d, int resolution) {
  if (resolution < 2) throw ContractViolation("best_price needs resolution >= 2");
  std::vector<double> candidates = d.breakpoints();
  for (int i = 0; i < resolution; ++i) {
    candidates.push_back(static_cast<double>(i) / (resolution - 1));
  }
  sort_unique(candidates);

  const auto value = [&d](double p) { return d.expected_gft(Price(clamp01(p))); };
  std::size_t best = 0;
  double best_value = value(candidates[0]);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double v = value(candidates[i]);
    if (v > best_value + kTieTolerance) {
      best = i;
      best_value = v;
    }
  }

  double best_p = candidates[best];
  // The bracket around the winner may hide a smooth interior maximum on
  // either side; refine each half separately.
  if (best > 0) {
    const auto [x, v] = golden_section_max(value, candidates[best - 1], candidates[best]);
    if (v > best_value + kTieTolerance) {
      best_p = x;
      best_value = v;
    }
  }
  if (best + 1 < candidates.size()) {
    const auto [x, v] = golden_section_max(value, candidates[best], candidates[best + 1]);
    if (v > best_value + kTieTolerance) {
      best_p = x;
      best_value = v;
    }
  }
  return {Price(clamp01(best_p)), best_value};
}

// ---------------------------------------------------------------------------
// Instances

namespace {

std::string format_parameter(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

}  // namespace

PairDistribution uniform_iid() {
  PiecewiseUniformDensity u({{0.0, 1.0, 1.0}}, 1.0);
  return {"uniform_iid", IndependentProduct{u, u}};
}

PairDistribution sqrt_lower_instance(double eps) {
  if (!(std::abs(eps) <= 1.0)) throw ContractViolation("sqrt_lower_instance needs |eps| <= 1");
  PiecewiseUniformDensity seller({{0.0, 0.25, 2.0 * (1.0 + eps)}, {0.5, 0.75, 2.0 * (1.0 - eps)}},
                                 4.0);
  PiecewiseUniformDensity buyer({{0.25, 0.5, 2.0}, {0.75, 1.0, 2.0}}, 2.0);
  return {"sqrt_lower(eps=" + format_parameter(eps) + ")", IndependentProduct{seller, buyer}};
}

PairDistribution t23_lower_instance(double eps) {
  if (!(std::abs(eps) <= 1.0)) throw ContractViolation("t23_lower_instance needs |eps| <= 1");
  constexpr double th = kT23Theta;
  const double scale = 1.0 / (4.0 * th);
  const double bound = (1.0 + std::abs(eps)) * scale;
  PiecewiseUniformDensity seller({{0.0, th, (1.0 + eps) * scale},
                                  {1.0 / 6.0, 1.0 / 6.0 + th, (1.0 - eps) * scale},
                                  {0.25, 0.25 + th, scale},
                                  {2.0 / 3.0, 2.0 / 3.0 + th, scale}},
                                 bound);
  PiecewiseUniformDensity buyer({{1.0 / 3.0 - th, 1.0 / 3.0, scale},
                                 {0.75 - th, 0.75, scale},
                                 {5.0 / 6.0 - th, 5.0 / 6.0, scale},
                                 {1.0 - th, 1.0, scale}},
                                scale);
  return {"t23_lower(eps=" + format_parameter(eps) + ")", IndependentProduct{seller, buyer}};
}

PairDistribution bd_lower_instance(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ContractViolation("bd_lower_instance needs lambda in [0,1]");
  }
  // Support of f; g(s,b) = f(1-b, 1-s) maps [a1,a2]x[c1,c2] to [1-c2,1-c1]x[1-a2,1-a1].
  const std::array<std::array<double, 4>, 3> f_rects{{
      {0.0, 1.0 / 8.0, 3.0 / 8.0, 4.0 / 8.0},
      {2.0 / 8.0, 3.0 / 8.0, 7.0 / 8.0, 1.0},
      {4.0 / 8.0, 5.0 / 8.0, 5.0 / 8.0, 6.0 / 8.0},
  }};
  std::vector<Rectangle> rects;
  for (const auto& r : f_rects) rects.push_back({r[0], r[1], r[2], r[3], (1.0 - lambda) / 3.0});
  for (const auto& r : f_rects) {
    rects.push_back({1.0 - r[3], 1.0 - r[2], 1.0 - r[1], 1.0 - r[0], lambda / 3.0});
  }
  return {"bd_lower(lambda=" + format_parameter(lambda) + ")",
          RectangleMixtureJoint(std::move(rects), 64.0 / 3.0)};
}

PairDistribution needle_instance(double x) {
  if (!(x > 0.0 && x < 1.0)) throw ContractViolation("needle_instance needs 0 < x < 1");
  DiscreteDistribution seller({{0.0, 0.5}, {x, 0.5}});
  DiscreteDistribution buyer({{x, 0.5}, {1.0, 0.5}});
  return {"needle(x=" + format_parameter(x) + ")", IndependentProduct{seller, buyer}};
}

std::pair<PairDistribution, PairDistribution> one_bit_pair() {
  SmoothDensity1D seller(
      [](double s) {
        const double den = s * s * s - s * s + 4.0;
        return 4.0 * (4.0 - 2.0 * s * s * s + s * s) / (den * den);
      },
      [](double s) { return 4.0 * s / (s * s * s - s * s + 4.0); }, "one_bit_seller", 2.0);
  SmoothDensity1D buyer([](double b) { return b * (b - 0.5) * (b - 1.0) + 1.0; },
                        [](double b) {
                          const double b2 = b * b;
                          return b2 * b2 / 4.0 - b2 * b / 2.0 + b2 / 4.0 + b;
                        },
                        "one_bit_buyer", 2.0);
  PairDistribution smooth("one_bit_smooth", IndependentProduct{seller, buyer});
  PairDistribution uniform = uniform_iid();
  return {std::move(uniform), std::move(smooth)};
}

PairDistribution footnote_instance(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ContractViolation("footnote_instance needs 0 < eps < 1");
  DiscreteDistribution seller({{0.0, 0.5}, {eps, 0.5}});
  DiscreteDistribution buyer({{1.0, 1.0}});
  return {"footnote(eps=" + format_parameter(eps) + ")", IndependentProduct{seller, buyer}};
}

}  // namespace tradelab
