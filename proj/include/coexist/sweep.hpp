#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coexist/detail/parallel.hpp"
#include "coexist/market.hpp"
#include "coexist/oracle.hpp"
#include "coexist/regimes.hpp"
#include "coexist/verify.hpp"

namespace coexist {

struct SweepRow {
  double eps = 0.0;
  std::optional<Regime> winner;  ///< empty when the row was skipped
  double p_opt = 0.0;
  double q_opt = 0.0;
  double leader_value = 0.0;
  double follower_value = 0.0;
  std::optional<bool> oracle_agrees;
  std::string skip_reason;
};

/// from, from + step, ... up to `to` (inclusive up to rounding), each value
/// rounded to 12 significant digits so 0.05 + k 0.05 prints as expected.
inline std::vector<double> make_eps_grid(double from, double to, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("eps step must be > 0");
  std::vector<double> grid;
  const auto n = static_cast<long>(std::floor((to - from) / step + 1e-9));
  for (long k = 0; k <= n; ++k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", from + static_cast<double>(k) * step);
    double v = 0.0;
    std::from_chars(buf, buf + std::char_traits<char>::length(buf), v);
    grid.push_back(v);
  }
  return grid;
}

inline void check_eps_grid(const std::vector<double>& grid) {
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] >= 0.0 && grid[k] <= 1.0)) throw std::invalid_argument("eps grid outside [0, 1]");
    if (k > 0 && !(grid[k] > grid[k - 1])) {
      throw std::invalid_argument("eps grid must be strictly increasing");
    }
  }
}

inline SweepRow sweep_row(const MarketParams& base, double eps, const OracleConfig* oracle) {
  MarketParams m = base;
  m.eps = eps;
  SweepRow row;
  row.eps = eps;
  const auto a = validate_assumptions(m);
  if (!a.holds()) {
    row.skip_reason = !a.a1_holds ? "A.1 fails" : "A.2 fails";
    return row;
  }
  const auto rep = solve_coexistence(m);
  row.winner = rep.winner.regime;
  row.p_opt = rep.winner.p_opt;
  row.q_opt = rep.winner.q_opt;
  row.leader_value = rep.winner.leader_value;
  row.follower_value = rep.winner.follower_value;
  if (oracle) row.oracle_agrees = verify_solution(m, rep, *oracle).agrees;
  return row;
}

/// One row per grid value, in grid order. Without an oracle the rows run in
/// parallel; with one the oracle itself is parallel and rows run in turn.
inline std::vector<SweepRow> epsilon_sweep(const MarketParams& base, const std::vector<double>& grid,
                                           std::optional<OracleConfig> oracle = std::nullopt) {
  check_eps_grid(grid);
  std::vector<SweepRow> rows(grid.size());
  if (oracle) {
    oracle->validate();
    for (std::size_t k = 0; k < grid.size(); ++k) rows[k] = sweep_row(base, grid[k], &*oracle);
  } else {
    detail::parallel_for(grid.size(), [&](std::size_t k) { rows[k] = sweep_row(base, grid[k], nullptr); });
  }
  return rows;
}

/// Smallest grid eps from which every later winner is AtPar or MaxPrice.
inline std::optional<double> epsilon_bar_estimate(const std::vector<SweepRow>& rows) {
  std::optional<double> bar;
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    if (!it->winner || (*it->winner != Regime::AtPar && *it->winner != Regime::MaxPrice)) break;
    bar = it->eps;
  }
  return bar;
}

}  // namespace coexist
