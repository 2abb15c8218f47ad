#pragma once

// Brute-force verification. The leader's (p, q) box is gridded; the
// follower always plays its closed-form best response, which is itself
// checked against a price grid by follower_grid_check().
//
// Nothing in here calls the regime solvers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "coexist/detail/parallel.hpp"
#include "coexist/follower.hpp"
#include "coexist/geometry.hpp"
#include "coexist/market.hpp"

namespace coexist {

struct OracleConfig {
  std::size_t p_steps = 500;
  std::size_t q_steps = 500;
  int refinement_rounds = 2;
  std::optional<RegionTag> region_filter;
  double tolerance_rel = 1e-3;
  unsigned threads = 0;  ///< 0 = hardware concurrency

  void validate() const {
    if (p_steps < 2 || q_steps < 2) throw std::invalid_argument("oracle grid needs >= 2 steps per axis");
    if (refinement_rounds < 0) throw std::invalid_argument("refinement_rounds must be >= 0");
    if (!(tolerance_rel > 0.0)) throw std::invalid_argument("tolerance_rel must be > 0");
  }

  friend bool operator==(const OracleConfig&, const OracleConfig&) = default;
};

struct OracleResult {
  bool found = false;  ///< false when the region filter matched no grid node
  double best_p = 0.0;
  double best_q = 0.0;
  double best_value = -kInf;
  RegionTag regime_at_best = RegionTag::OutsideFco;
  double cell_p = 0.0;  ///< node spacing of the finest grid searched
  double cell_q = 0.0;
  std::vector<double> round_values;  ///< best value after the base scan and each refinement

  std::optional<double> candidate_value;
  double gap_vs_candidate = std::numeric_limits<double>::quiet_NaN();  ///< best - candidate
  bool value_agrees = false;
  bool region_agrees = false;
  bool agrees = false;
};

namespace detail {

struct Incumbent {
  double value = -kInf;
  double p = 0.0;
  double q = 0.0;
  bool found = false;
};

inline double node(double lo, double hi, std::size_t k, std::size_t n) {
  if (n <= 1) return lo;
  if (k + 1 == n) return hi;
  return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
}

/// Row-major scan; within and across rows the first strictly better node wins.
inline Incumbent scan_box(const MarketParams& m, double p_lo, double p_hi, std::size_t n_p,
                          double q_lo, double q_hi, std::size_t n_q,
                          std::optional<RegionTag> filter, unsigned threads) {
  std::vector<Incumbent> rows(n_p);
  parallel_for(
      n_p,
      [&](std::size_t i) {
        const double p = node(p_lo, p_hi, i, n_p);
        Incumbent best;
        for (std::size_t k = 0; k < n_q; ++k) {
          const double q = node(q_lo, q_hi, k, n_q);
          if (filter && region_of(m, p, q) != *filter) continue;
          const double v = leader_value(m, p, q);
          if (!best.found || v > best.value) best = {v, p, q, true};
        }
        rows[i] = best;
      },
      threads);

  Incumbent best;
  for (const auto& r : rows) {
    if (r.found && (!best.found || r.value > best.value)) best = r;
  }
  return best;
}

inline std::size_t nodes_for(double span, double spacing) {
  if (!(spacing > 0.0)) return 1;
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(span / spacing)) + 1);
}

}  // namespace detail

/// Exhaustive search of p in [0, p_mx] x q in [0, theta(p_mx)], followed by
/// `refinement_rounds` zooms around the incumbent, each with a 10x finer
/// spacing over +-5 cells of the previous grid. With a candidate value the
/// result also reports the gap and whether |gap| <= tolerance_rel * scale.
inline OracleResult grid_leader_max(const MarketParams& m, const OracleConfig& cfg,
                                    std::optional<double> candidate_value = std::nullopt) {
  check_params(m);
  cfg.validate();

  const double p_hi = max_price_in_house(m);
  const double q_hi = std::max(0.0, theta(m, p_hi));
  double dp = p_hi / static_cast<double>(cfg.p_steps - 1);
  double dq = q_hi / static_cast<double>(cfg.q_steps - 1);

  OracleResult res;
  detail::Incumbent best = detail::scan_box(m, 0.0, p_hi, cfg.p_steps, 0.0, q_hi, cfg.q_steps,
                                            cfg.region_filter, cfg.threads);
  res.round_values.push_back(best.value);

  for (int round = 0; round < cfg.refinement_rounds && best.found; ++round) {
    const double lo_p = std::max(0.0, best.p - 5.0 * dp);
    const double up_p = std::min(p_hi, best.p + 5.0 * dp);
    const double lo_q = std::max(0.0, best.q - 5.0 * dq);
    const double up_q = std::min(q_hi, best.q + 5.0 * dq);
    dp /= 10.0;
    dq /= 10.0;
    const auto zoom = detail::scan_box(m, lo_p, up_p, detail::nodes_for(up_p - lo_p, dp), lo_q,
                                       up_q, detail::nodes_for(up_q - lo_q, dq),
                                       cfg.region_filter, cfg.threads);
    if (zoom.found && zoom.value > best.value) best = zoom;
    res.round_values.push_back(best.value);
  }

  res.found = best.found;
  res.best_p = best.p;
  res.best_q = best.q;
  res.best_value = best.value;
  res.cell_p = dp;
  res.cell_q = dq;
  if (best.found) res.regime_at_best = region_of(m, best.p, best.q);

  if (candidate_value) {
    res.candidate_value = candidate_value;
    res.gap_vs_candidate = best.value - *candidate_value;
    res.value_agrees =
        best.found && std::abs(res.gap_vs_candidate) <= cfg.tolerance_rel * utility_scale(m);
    res.region_agrees = res.value_agrees;
    res.agrees = res.value_agrees;
  }
  return res;
}

/// True iff the closed-form best response weakly beats every operating
/// price on a `steps`-point grid of [0, p_tilde_mx] and the option of not
/// operating, up to the largest utility change between neighbouring nodes.
inline bool follower_grid_check(const MarketParams& m, double p, double q, std::size_t steps) {
  if (steps <= 1) return true;
  const double closed = follower_opt_utility(m, p, q);
  const double cap = max_price_out_house(m);
  const double rounding = 1e-12 * utility_scale(m);

  double grid_best = -kInf;
  double step_change = 0.0;
  double prev = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double pt = detail::node(0.0, cap, k, steps);
    const double u = follower_utility(m, p, q, FollowerAction::operate(pt));
    if (k > 0) step_change = std::max(step_change, std::abs(u - prev));
    prev = u;
    grid_best = std::max(grid_best, u);
  }
  return closed >= grid_best - step_change - rounding && closed >= -rounding;
}

}  // namespace coexist
