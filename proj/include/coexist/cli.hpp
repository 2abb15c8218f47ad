#pragma once

// Subcommand bodies of the command-line tool, kept stream-based so tests can
// drive them directly.

#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "coexist/regimes.hpp"
#include "coexist/report.hpp"
#include "coexist/scenario.hpp"
#include "coexist/sweep.hpp"
#include "coexist/verify.hpp"

namespace coexist::cli {

enum ExitCode : int {
  kOk = 0,
  kParseError = 1,
  kAssumptionViolated = 2,
  kInconsistent = 3,
  kOracleDisagrees = 4,
};

struct Options {
  bool json = false;
  bool verify = false;
  bool verbose = false;
  std::optional<std::size_t> p_steps;
  std::optional<std::size_t> q_steps;
  std::optional<int> refine;
  std::optional<double> tol;
};

/// "500x400" -> {500, 400}.
inline std::pair<std::size_t, std::size_t> parse_grid(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos || x == 0 || x + 1 == s.size()) {
    throw std::invalid_argument("grid must look like <p_steps>x<q_steps>");
  }
  std::size_t used = 0;
  const auto p = std::stoul(s.substr(0, x), &used);
  if (used != x) throw std::invalid_argument("bad p_steps in grid");
  const auto q = std::stoul(s.substr(x + 1), &used);
  if (used != s.size() - x - 1) throw std::invalid_argument("bad q_steps in grid");
  return {p, q};
}

/// Scenario oracle block (or defaults) overridden by command-line flags.
inline OracleConfig oracle_config(const Scenario& sc, const Options& opt) {
  OracleConfig cfg = sc.oracle.value_or(OracleConfig{});
  if (opt.p_steps) cfg.p_steps = *opt.p_steps;
  if (opt.q_steps) cfg.q_steps = *opt.q_steps;
  if (opt.refine) cfg.refinement_rounds = *opt.refine;
  if (opt.tol) cfg.tolerance_rel = *opt.tol;
  cfg.validate();
  return cfg;
}

namespace detail {

inline std::optional<Scenario> load(const std::string& path, std::ostream& err) {
  try {
    return load_scenario(path);
  } catch (const ScenarioError& e) {
    err << "error: " << e.what() << '\n';
    return std::nullopt;
  }
}

inline void print_assumption_failure(std::ostream& err, const AssumptionViolated& e) {
  const auto& r = e.report;
  err << "error: " << e.what() << '\n'
      << "  A.1 in-house slack  " << fixed(r.a1_in_house_slack) << '\n'
      << "  A.1 out-house slack " << fixed(r.a1_out_house_slack) << '\n'
      << "  A.2 slack           " << fixed(r.a2_slack) << '\n';
}

/// Runs the solver and the containment check; returns an exit code and
/// fills `rep` on success.
inline int solve_checked(const MarketParams& m, EquilibriumReport& rep, std::ostream& err) {
  try {
    rep = solve_coexistence(m);
  } catch (const AssumptionViolated& e) {
    print_assumption_failure(err, e);
    return kAssumptionViolated;
  }
  for (const auto& o : rep.outcomes) {
    if (!o.solution) continue;
    const double slack = containment_slack(m, *o.solution);
    if (slack < -1e-9) {
      err << "error: " << to_string(o.regime) << " solution leaves its region (slack "
          << slack << ")\n";
      return kInconsistent;
    }
  }
  return kOk;
}

}  // namespace detail

inline int cmd_solve(const std::string& path, const Options& opt, std::ostream& out,
                     std::ostream& err) {
  const auto sc = detail::load(path, err);
  if (!sc) return kParseError;
  EquilibriumReport rep;
  if (int rc = detail::solve_checked(sc->params, rep, err); rc != kOk) return rc;

  if (opt.verify) {
    OracleConfig cfg;
    try {
      cfg = oracle_config(*sc, opt);
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << '\n';
      return kParseError;
    }
    rep.oracle_check = verify_solution(sc->params, rep, cfg);
  }

  std::ostream& human = opt.json ? err : out;
  if (!sc->name.empty()) human << sc->name << '\n';
  write_report(human, rep);
  if (rep.oracle_check) write_oracle_summary(human, *rep.oracle_check, rep.winner.p_opt, rep.winner.q_opt);
  if (opt.json) out << report_to_json(rep).dump(2) << '\n';
  return rep.oracle_check && !rep.oracle_check->agrees ? kOracleDisagrees : kOk;
}

inline int cmd_sweep(const std::string& path, const Options& opt, std::ostream& out,
                     std::ostream& err) {
  const auto sc = detail::load(path, err);
  if (!sc) return kParseError;
  if (!sc->sweep) {
    err << "error: scenario has no sweep block\n";
    return kParseError;
  }
  std::vector<SweepRow> rows;
  try {
    const auto grid = make_eps_grid(sc->sweep->eps_from, sc->sweep->eps_to, sc->sweep->eps_step);
    std::optional<OracleConfig> cfg;
    if (opt.verify) cfg = oracle_config(*sc, opt);
    rows = epsilon_sweep(sc->params, grid, cfg);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }
  write_sweep_csv(out, rows, opt.verbose);
  for (const auto& r : rows) {
    if (r.oracle_agrees && !*r.oracle_agrees) return kOracleDisagrees;
  }
  return kOk;
}

inline int cmd_verify(const std::string& path, const Options& opt, std::ostream& out,
                      std::ostream& err) {
  const auto sc = detail::load(path, err);
  if (!sc) return kParseError;
  OracleConfig cfg;
  try {
    cfg = oracle_config(*sc, opt);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }
  EquilibriumReport rep;
  if (int rc = detail::solve_checked(sc->params, rep, err); rc != kOk) return rc;

  const auto res = verify_solution(sc->params, rep, cfg);
  RegimeSolution cand = rep.winner;
  if (cfg.region_filter) {
    if (auto r = restricted_candidate(sc->params, *cfg.region_filter)) cand = *r;
    out << "region filter " << to_string(*cfg.region_filter) << '\n';
  }
  write_oracle_summary(out, res, cand.p_opt, cand.q_opt);
  return res.agrees ? kOk : kOracleDisagrees;
}

}  // namespace coexist::cli
