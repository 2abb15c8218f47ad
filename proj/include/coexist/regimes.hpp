#pragma once

// Sub-regime optimizers of the co-existence problem and their aggregation.
//
//   BothProfitable  both units sell with positive margins (mutual-profit region)
//   InHouseLoss     in-house price at p_mx, in-house demand clamped to zero
//   MaxPrice        in-house price at p_mx inside the mutual-profit region
//   AtPar           q on the participation frontier, follower profit zero
//
// Every reported leader_value is leader_utility() at the reported point with
// the follower's exact best response; the closed-form objectives only pick
// the point.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "coexist/derived.hpp"
#include "coexist/follower.hpp"
#include "coexist/geometry.hpp"
#include "coexist/lemmas.hpp"
#include "coexist/market.hpp"
#include "coexist/oracle.hpp"
#include "coexist/quadratic.hpp"

namespace coexist {

enum class Regime { BothProfitable, InHouseLoss, MaxPrice, AtPar };

inline constexpr std::array<Regime, 4> kAllRegimes = {Regime::BothProfitable, Regime::InHouseLoss,
                                                      Regime::MaxPrice, Regime::AtPar};

inline constexpr std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::BothProfitable: return "BothProfitable";
    case Regime::InHouseLoss: return "InHouseLoss";
    case Regime::MaxPrice: return "MaxPrice";
    case Regime::AtPar: return "AtPar";
  }
  return "?";
}

/// Numeric label used in sweep CSVs: 1 both profitable, 2 loss, 3 at par, 4 max price.
inline constexpr int regime_code(Regime r) {
  switch (r) {
    case Regime::BothProfitable: return 1;
    case Regime::InHouseLoss: return 2;
    case Regime::AtPar: return 3;
    case Regime::MaxPrice: return 4;
  }
  return 0;
}

/// Lower rank wins a tie in value.
inline constexpr int tie_rank(Regime r) {
  switch (r) {
    case Regime::BothProfitable: return 0;
    case Regime::AtPar: return 1;
    case Regime::MaxPrice: return 2;
    case Regime::InHouseLoss: return 3;
  }
  return 4;
}

class SingularHessian : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class AssumptionViolated : public std::invalid_argument {
 public:
  AssumptionViolated(const std::string& what, AssumptionReport r)
      : std::invalid_argument(what), report(r) {}
  AssumptionReport report;
};

struct RegimeSolution {
  Regime regime = Regime::AtPar;
  double p_opt = 0.0;
  double q_opt = 0.0;
  BestResponse follower;
  double leader_value = 0.0;
  double follower_value = 0.0;
  std::optional<Boundary> active_boundary;
};

/// One sub-regime's result. `solution` may be present with `gate_open`
/// false: the aggregate then ignores it (e.g. a boundary optimum of the
/// mutual-profit region).
struct RegimeOutcome {
  Regime regime = Regime::AtPar;
  std::optional<RegimeSolution> solution;
  bool gate_open = false;
  std::string reason;
};

inline RegimeSolution make_solution(const MarketParams& m, Regime r, double p, double q,
                                    std::optional<Boundary> b = std::nullopt) {
  RegimeSolution s;
  s.regime = r;
  s.p_opt = p;
  s.q_opt = q;
  s.follower = best_response(m, p, q);
  s.leader_value = leader_utility(m, p, q, s.follower.action);
  s.follower_value = follower_utility(m, p, q, s.follower.action);
  s.active_boundary = b;
  return s;
}

// ---------------------------------------------------------------------------
// Unconstrained objective

inline double unconstrained_objective(const MarketParams& m, double p, double q) {
  return objective_coefficients(m)(p, q);
}

struct UnconstrainedOptimum {
  double p = 0.0;
  double q = 0.0;
  bool hessian_negdef = false;
};

inline UnconstrainedOptimum solve_unconstrained(const MarketParams& m) {
  const auto w = objective_coefficients(m);
  const double det = w.hessian_det();
  if (std::abs(det) < 1e-12 * (4.0 * std::abs(w.w1 * w.w3) + w.w2 * w.w2)) {
    throw SingularHessian("4 w1 w3 - w2^2 vanishes");
  }
  UnconstrainedOptimum o;
  o.p = -(2.0 * w.w3 * w.w4 - w.w2 * w.w5) / det;
  o.q = -(w.w2 * o.p + w.w5) / (2.0 * w.w3);
  o.hessian_negdef = det > 0.0 && w.w1 < 0.0;
  return o;
}

// ---------------------------------------------------------------------------
// At par: q = theta(p)

/// Leader utility along the affine frontier branch, follower interior and
/// in-house demand unclamped.
inline Quadratic<double> at_par_branch1_objective(const MarketParams& m) {
  const double e = m.eps;
  const double s = std::sqrt(m.alpha_j * m.o_j);
  const double k = m.c_i + m.c_s;
  const double a_lin = m.d_bar_i + e * m.d_bar_j - e * s;
  const double slope = m.alpha_i * (1.0 - e * e);
  Quadratic<double> f;
  f.a = -slope;
  f.b = a_lin + slope * k + s * e * m.alpha_i / m.alpha_j;
  f.c = -a_lin * k + s * (m.d_bar_j - m.alpha_j * m.c_j - m.alpha_j * m.c_s - 2.0 * s) / m.alpha_j -
        m.o_i - m.o_s;
  return f;
}

/// Leader utility along the hyperbolic frontier branch, follower saturated
/// at its cap.
inline Quadratic<double> at_par_branch2_objective(const MarketParams& m) {
  const double e = m.eps;
  const double k = m.c_i + m.c_s;
  const double margin = max_price_out_house(m) - m.c_j - m.c_s;
  const double base = m.d_bar_i * (1.0 + e * e) + e * m.d_bar_j;
  Quadratic<double> f;
  f.a = -m.alpha_i;
  f.b = base + m.alpha_i * k + e * m.alpha_i * margin;
  f.c = -k * base - e * m.d_bar_i * margin - m.o_j - m.o_i - m.o_s;
  return f;
}

/// Closed-form optimizer on [0, min(p_sw, p_mx)]; endpoint comparison at eps = 1.
inline double at_par_branch1_price(const MarketParams& m) {
  const double hi = std::min(switching_price(m), max_price_in_house(m));
  const double slope = m.alpha_i * (1.0 - m.eps * m.eps);
  if (slope <= 0.0) return maximize_on_interval(at_par_branch1_objective(m), 0.0, hi).x;
  const double s = std::sqrt(m.alpha_j * m.o_j);
  const double a_lin = m.d_bar_i + m.eps * m.d_bar_j - m.eps * s;
  const double vertex =
      (m.c_i + m.c_s) / 2.0 + (a_lin + m.eps * m.alpha_i * s / m.alpha_j) / (2.0 * slope);
  return std::max(0.0, std::min(hi, vertex));
}

/// Closed-form optimizer on [p_sw, p_mx]; meaningful only when p_sw <= p_mx.
inline double at_par_branch2_price(const MarketParams& m) {
  const double b = at_par_branch2_objective(m).b;
  return std::max(switching_price(m), std::min(max_price_in_house(m), b / (2.0 * m.alpha_i)));
}

struct AtParBranches {
  RegimeSolution first;
  std::optional<RegimeSolution> second;  ///< absent when p_sw > p_mx
};

inline AtParBranches solve_at_par_branches(const MarketParams& m) {
  AtParBranches out;
  const double p1 = at_par_branch1_price(m);
  out.first = make_solution(m, Regime::AtPar, p1, theta(m, p1), Boundary::L3);
  if (switching_price(m) <= max_price_in_house(m)) {
    const double p2 = at_par_branch2_price(m);
    out.second = make_solution(m, Regime::AtPar, p2, theta(m, p2));
  }
  return out;
}

inline RegimeOutcome solve_at_par(const MarketParams& m) {
  const auto br = solve_at_par_branches(m);
  RegimeOutcome o{Regime::AtPar, br.first, true, "always available"};
  if (br.second && br.second->leader_value > br.first.leader_value) o.solution = br.second;
  return o;
}

// ---------------------------------------------------------------------------
// In-house at a loss

/// Leader utility at p = p_mx as a function of q: follower interior up to
/// phi(p_mx), saturated beyond. In-house revenue is zero in both branches.
inline double loss_objective(const MarketParams& m, double q) {
  const double e = m.eps;
  const double fixed = m.o_i + m.o_s;
  const double phi_mx = phi(m, max_price_in_house(m));
  if (q <= phi_mx) {
    const double demand =
        (m.d_bar_j * (1.0 + e * e) + e * m.d_bar_i - m.alpha_j * m.c_j - m.alpha_j * q) / 2.0;
    return demand * (q - m.c_s) - fixed;
  }
  return e * e * m.d_bar_j * (q - m.c_s) - fixed;
}

inline double loss_stationary_q(const MarketParams& m) {
  const double e = m.eps;
  return (m.d_bar_j * (1.0 + e * e) + e * m.d_bar_i - m.alpha_j * m.c_j) / (2.0 * m.alpha_j) +
         m.c_s / 2.0;
}

inline RegimeOutcome solve_loss(const MarketParams& m) {
  RegimeOutcome o{Regime::InHouseLoss, std::nullopt, false, ""};
  if (loss_regime_empty(m)) {
    o.reason = "empty: psi(0) >= p_mx";
    return o;
  }
  const double p = max_price_in_house(m);
  const double upper = std::min(std::max(0.0, psi_inv(m, p)), theta(m, p));
  const double stationary = loss_stationary_q(m);
  const double q = stationary <= std::min(upper, phi(m, p)) ? stationary : upper;
  o.solution = make_solution(m, Regime::InHouseLoss, p, q, Boundary::L4);
  o.gate_open = true;
  o.reason = "psi(0) < p_mx";
  return o;
}

// ---------------------------------------------------------------------------
// Maximum in-house price

inline RegimeOutcome solve_max_price(const MarketParams& m) {
  RegimeOutcome o{Regime::MaxPrice, std::nullopt, false, ""};
  const auto d = derive(m);
  if (!(d.l_mx < d.r_mx)) {
    o.reason = "empty: l_mx >= r_mx";
    return o;
  }
  const double q = std::max(d.l_mx, std::min(d.r_mx, h(m, d.p_mx)));
  o.solution = make_solution(m, Regime::MaxPrice, d.p_mx, q, Boundary::L4);
  o.gate_open = true;
  o.reason = "l_mx < r_mx";
  return o;
}

// ---------------------------------------------------------------------------
// Mutual profit

/// True iff (p, q) is strictly inside the mutual-profit region by more than `slack`.
inline bool strictly_inside_plus(const MarketParams& m, double p, double q, double slack) {
  if (!(p > slack) || !(q > slack)) return false;
  const auto s = region_slacks(m, p, q);
  return s.theta_gap > slack && s.phi_gap > slack && s.psi_gap > slack && s.p_mx_gap > slack;
}

/// Stationary point when it lies strictly inside the region; otherwise the
/// best point over every non-empty edge. The gate is open only in the
/// interior case.
inline RegimeOutcome solve_both_profitable(const MarketParams& m) {
  RegimeOutcome o{Regime::BothProfitable, std::nullopt, false, ""};
  const double slack = 1e-9 * utility_scale(m);

  std::string why_not;
  try {
    const auto u = solve_unconstrained(m);
    if (u.hessian_negdef && strictly_inside_plus(m, u.p, u.q, slack)) {
      o.solution = make_solution(m, Regime::BothProfitable, u.p, u.q, Boundary::Interior);
      o.gate_open = true;
      o.reason = "interior stationary point";
      return o;
    }
    why_not = u.hessian_negdef ? "stationary point outside the open region"
                               : "objective not concave";
  } catch (const SingularHessian&) {
    why_not = "singular Hessian";
  }

  const auto w = objective_coefficients(m);
  for (Boundary b : {Boundary::L1, Boundary::L2, Boundary::L3, Boundary::L4, Boundary::AxisP,
                     Boundary::AxisQ}) {
    const auto seg = plus_region_edge(m, b);
    if (!seg) continue;
    double p = 0.0;
    double q = 0.0;
    if (b == Boundary::L3) {
      // t is p on this edge
      p = maximize_on_interval(at_par_branch1_objective(m), seg->t_lo, seg->t_hi).x;
      q = theta(m, p);
    } else {
      const double t = maximize_on_interval(restrict_objective(w, *seg), seg->t_lo, seg->t_hi).x;
      p = seg->p_at(t);
      q = seg->q_at(t);
    }
    auto cand = make_solution(m, Regime::BothProfitable, p, q, b);
    if (!o.solution || cand.leader_value > o.solution->leader_value) o.solution = cand;
  }
  o.reason = o.solution ? "boundary optimum (" + why_not + ")" : "empty region";
  return o;
}

// ---------------------------------------------------------------------------
// Containment

/// Smallest signed slack of the solution against its sub-region's defining
/// inequalities; negative means outside.
inline double containment_slack(const MarketParams& m, const RegimeSolution& s) {
  const double p = s.p_opt;
  const double q = s.q_opt;
  const double p_mx = max_price_in_house(m);
  const double th = theta(m, p) - q;
  double slack = std::min({p, q, p_mx - p, th});
  switch (s.regime) {
    case Regime::BothProfitable: {
      const auto r = region_slacks(m, p, q);
      slack = std::min({slack, r.phi_gap, r.psi_gap});
      break;
    }
    case Regime::InHouseLoss:
      slack = std::min(slack, p - psi(m, q));
      break;
    case Regime::MaxPrice: {
      const auto d = derive(m);
      slack = std::min({slack, -std::abs(p - p_mx), q - d.l_mx, d.r_mx - q});
      break;
    }
    case Regime::AtPar:
      slack = std::min(slack, -std::abs(th));
      break;
  }
  return slack;
}

inline bool contained(const MarketParams& m, const RegimeSolution& s) {
  return containment_slack(m, s) >= -1e-9;
}

// ---------------------------------------------------------------------------
// Aggregate

struct EmptyRegime {
  Regime regime = Regime::AtPar;
  std::string reason;
};

struct EquilibriumReport {
  MarketParams params;
  AssumptionReport assumptions;
  DerivedConstants derived;
  std::array<RegimeOutcome, 4> outcomes;  ///< in kAllRegimes order
  std::vector<RegimeSolution> solutions;  ///< gated-in solutions only
  RegimeSolution winner;
  std::vector<EmptyRegime> empty_regimes;
  LemmaFlags lemma_flags;
  std::optional<OracleResult> oracle_check;

  const RegimeOutcome& outcome(Regime r) const {
    for (const auto& o : outcomes) {
      if (o.regime == r) return o;
    }
    throw std::logic_error("missing regime outcome");
  }
};

/// Throws AssumptionViolated when A.1 or A.2 fails.
inline EquilibriumReport solve_coexistence(const MarketParams& m) {
  check_params(m);
  EquilibriumReport rep;
  rep.params = m;
  rep.assumptions = validate_assumptions(m);
  if (!rep.assumptions.holds()) {
    throw AssumptionViolated(rep.assumptions.a1_holds ? "assumption A.2 violated"
                                                      : "assumption A.1 violated",
                             rep.assumptions);
  }
  rep.derived = derive(m);
  rep.lemma_flags = lemma_flags(m);
  rep.outcomes = {solve_both_profitable(m), solve_loss(m), solve_max_price(m), solve_at_par(m)};

  const double tie = 1e-12 * rep.derived.scale;
  std::optional<RegimeSolution> best;
  for (const auto& o : rep.outcomes) {
    if (!o.gate_open || !o.solution) {
      rep.empty_regimes.push_back({o.regime, o.reason});
      continue;
    }
    rep.solutions.push_back(*o.solution);
    const auto& s = *o.solution;
    if (!best || s.leader_value > best->leader_value + tie ||
        (std::abs(s.leader_value - best->leader_value) <= tie &&
         tie_rank(s.regime) < tie_rank(best->regime))) {
      best = s;
    }
  }
  rep.winner = *best;  // AtPar is always gated in
  return rep;
}

}  // namespace coexist
