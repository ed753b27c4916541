#pragma once

// Independent validators: numeric expected gain from trade, the pointwise
// decomposition identity, best price in hindsight, and closed-form regret
// bounds.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tradelab/core.hpp"
#include "tradelab/environments.hpp"
#include "tradelab/rng.hpp"

namespace tradelab {

struct OracleEstimate {
  double estimate = 0.0;
  double std_error = 0.0;  // zero for deterministic routes
};

/// Midpoint rule for f on [lo, hi] with about `cells` cells, each piece
/// between consecutive breakpoints integrated separately.
double integrate_midpoint(const std::function<double(double)>& f, double lo, double hi,
                          const std::vector<double>& breaks, std::size_t cells);

/// Expected GFT at p computed without the closed-form partial expectations.
/// Laws with atoms are enumerated exactly. Continuous laws integrate
///   int_p^1 P[S<=p, B>=l] dl + int_0^p P[S<=l, B>=p] dl
/// with the midpoint rule on n cells aligned to the law's breakpoints, which
/// is exact for piecewise-constant densities. Requires n >= 1000.
OracleEstimate numeric_expected_gft(const PairDistribution& d, Price p, std::size_t n = 10000);

/// Sample mean of gft(p, .) over n draws, with its standard error.
OracleEstimate monte_carlo_expected_gft(const PairDistribution& d, Price p, std::size_t n,
                                        Rng& rng);

/// |gft(p,s,b) - (right integral + left integral)| where both integrals are
/// evaluated as interval lengths.
double check_decomposition(double p, double s, double b);

struct HindsightBest {
  Price price;
  double total = 0.0;
};

/// Exact maximizer of p -> sum_i gft(p, v_i) over the candidate prices {s_i};
/// ties go to the smallest price. Throws ContractViolation on empty input.
HindsightBest empirical_best_in_hindsight(std::span<const ValuationPair> pairs);

/// 2 (2 sqrt(m0) + c1 sqrt(pi / c2)) with m0 = 1200, c1 = 13448, c2 = 1/576.
double fbp_constant();
/// 1/2 + c sqrt(T - 1); zero for T = 0.
double bound_fbp(std::uint64_t horizon);
/// T0 + (4M/(K+1) + sqrt(2 pi / T0)) (T - T0) + bandit_bound.
double bound_sb(std::uint64_t horizon, std::uint64_t exploration_rounds, std::size_t grid_size,
                double density_bound, double bandit_bound);
/// Same with the MOSS bound 49 sqrt(K (T - T0)) as the bandit term.
double bound_sb(std::uint64_t horizon, std::uint64_t exploration_rounds, std::size_t grid_size,
                double density_bound);
/// 2 K T0 + 2 (2M/K + inf_e (e + K exp(-2 e^2 T0))) (T - 2 K T0), the infimum
/// taken over a logarithmic grid of e in [1e-6, 1].
double bound_sbl(std::uint64_t horizon, std::uint64_t exploration_rounds, std::size_t grid_size,
                 double density_bound);

struct LowerBoundRow {
  std::string regime;
  std::string rate;  // "sqrt(T)", "T^(2/3)" or "T"
  double exponent = 0.0;
  double constant = 0.0;
};

/// Minimax lower-bound rates and constants for the five settings.
std::vector<LowerBoundRow> lower_bound_constants();

}  // namespace tradelab
