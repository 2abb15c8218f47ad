#pragma once

#include <cmath>
#include <optional>

#include "coexist/geometry.hpp"
#include "coexist/oracle.hpp"
#include "coexist/regimes.hpp"

namespace coexist {

/// The solution a region-filtered oracle run is compared against.
inline std::optional<RegimeSolution> restricted_candidate(const MarketParams& m, RegionTag t) {
  switch (t) {
    case RegionTag::FcoPlus: return solve_both_profitable(m).solution;
    case RegionTag::FcoLoss: return solve_loss(m).solution;
    case RegionTag::FcoSaturated: {
      if (switching_price(m) > max_price_in_house(m)) return std::nullopt;
      return solve_at_par_branches(m).second;
    }
    case RegionTag::OutsideFco: return std::nullopt;
  }
  return std::nullopt;
}

/// Compares the report's winner (or, with a region filter, the matching
/// sub-regime solution) against the grid oracle. Agreement needs both the
/// value within tolerance_rel * scale and the same region at the two
/// points, or the two points within one final grid cell of each other.
inline OracleResult verify_solution(const MarketParams& m, const EquilibriumReport& report,
                                    const OracleConfig& cfg) {
  std::optional<RegimeSolution> cand = report.winner;
  if (cfg.region_filter) cand = restricted_candidate(m, *cfg.region_filter);
  if (!cand) {
    auto r = grid_leader_max(m, cfg);
    r.agrees = !r.found;  // both sides find nothing
    return r;
  }

  auto r = grid_leader_max(m, cfg, cand->leader_value);
  const bool near = std::abs(r.best_p - cand->p_opt) <= r.cell_p &&
                    std::abs(r.best_q - cand->q_opt) <= r.cell_q;
  r.region_agrees = r.found && (region_of(m, cand->p_opt, cand->q_opt) == r.regime_at_best || near);
  r.agrees = r.value_agrees && r.region_agrees;
  return r;
}

}  // namespace coexist
