#include <gtest/gtest.h>

#include <cmath>

#include "coexist/oracle.hpp"
#include "coexist/regimes.hpp"
#include "support/random_params.hpp"
#include "support/reference.hpp"

using namespace coexist;
using coexist::testing::fig3;
using coexist::testing::fig4;
using coexist::testing::ParamSampler;

namespace {

OracleConfig restricted(RegionTag t) {
  OracleConfig c;
  c.region_filter = t;
  return c;
}

void expect_oracle_match(const MarketParams& m, const RegimeSolution& s, const OracleConfig& cfg) {
  const auto o = grid_leader_max(m, cfg, s.leader_value);
  ASSERT_TRUE(o.found);
  EXPECT_TRUE(o.value_agrees) << "solver " << s.leader_value << " oracle " << o.best_value;
}

}  // namespace

TEST(Unconstrained, MatchesProductForm) {
  ParamSampler s(41);
  for (int k = 0; k < 1000; ++k) {
    const auto m = s.raw();
    const double p = s.uni(-100.0, 2.0 * max_price_in_house(m));
    const double q = s.uni(-100.0, 2.0 * max_price_out_house(m));
    const double ref = coexist::testing::ref_product_form(m, p, q);
    EXPECT_NEAR(unconstrained_objective(m, p, q), ref, 1e-9 * std::max(1.0, std::abs(ref)));
  }
}

TEST(Unconstrained, SeparableAtEpsZero) {
  EXPECT_EQ(objective_coefficients(fig3(0.0)).w2, 0.0);
}

TEST(Unconstrained, EqualsLeaderValueInMutualProfitRegion) {
  ParamSampler s(43);
  int checked = 0;
  for (int k = 0; k < 100; ++k) {
    const auto m = s.draw();
    for (int i = 0; i < 100; ++i) {
      const double p = s.uni(0.0, max_price_in_house(m));
      const double q = s.uni(0.0, theta(m, max_price_in_house(m)));
      if (region_of(m, p, q) != RegionTag::FcoPlus) continue;
      if (best_response(m, p, q).branch != ResponseBranch::Interior) continue;
      ++checked;
      EXPECT_NEAR(unconstrained_objective(m, p, q), leader_value(m, p, q), 1e-9 * utility_scale(m));
    }
  }
  EXPECT_GT(checked, 1000);
}

TEST(Unconstrained, DecoupledMonopolyAtEpsZero) {
  const auto u = solve_unconstrained(fig3(0.0));
  EXPECT_NEAR(u.p, 503.5, 1e-9);
  EXPECT_NEAR(u.q, 499.5, 1e-9);
  EXPECT_TRUE(u.hessian_negdef);
}

TEST(Unconstrained, GradientVanishes) {
  ParamSampler s(45);
  for (int k = 0; k < 200; ++k) {
    const auto m = s.draw();
    UnconstrainedOptimum u;
    try {
      u = solve_unconstrained(m);
    } catch (const SingularHessian&) {
      continue;
    }
    const double step = 1e-4 * std::max({1.0, std::abs(u.p), std::abs(u.q)});
    const auto U = [&](double p, double q) { return unconstrained_objective(m, p, q); };
    const double gp = (U(u.p + step, u.q) - U(u.p - step, u.q)) / (2 * step);
    const double gq = (U(u.p, u.q + step) - U(u.p, u.q - step)) / (2 * step);
    const double mag = std::abs(objective_coefficients(m).w4) + std::abs(objective_coefficients(m).w5);
    EXPECT_LE(std::abs(gp), 1e-5 * mag);
    EXPECT_LE(std::abs(gq), 1e-5 * mag);
  }
}

TEST(Unconstrained, SymmetricAlphaConcaveBelowOne) {
  for (double e = 0.0; e < 0.999; e += 0.05) {
    EXPECT_TRUE(solve_unconstrained(fig3(e)).hessian_negdef) << e;
    EXPECT_EQ(solve_unconstrained(fig3(e)).hessian_negdef, !lemma1_condition(fig3(e)));
  }
}

TEST(Unconstrained, SingularAtEpsOneSymmetric) {
  const auto m = fig3(1.0);
  EXPECT_THROW(solve_unconstrained(m), SingularHessian);
  const auto o = solve_both_profitable(m);
  EXPECT_FALSE(o.gate_open);
  EXPECT_NE(o.reason.find("singular"), std::string::npos);
}

TEST(BothProfitable, InteriorAtLowEps) {
  const auto m = fig3(0.1);
  const auto o = solve_both_profitable(m);
  ASSERT_TRUE(o.solution);
  EXPECT_TRUE(o.gate_open);
  EXPECT_EQ(o.solution->active_boundary, Boundary::Interior);
  EXPECT_EQ(region_of(m, o.solution->p_opt, o.solution->q_opt), RegionTag::FcoPlus);
  expect_oracle_match(m, *o.solution, restricted(RegionTag::FcoPlus));
}

TEST(BothProfitable, BoundaryAtHighEps) {
  const auto m = fig3(0.9);
  const auto o = solve_both_profitable(m);
  ASSERT_TRUE(o.solution);
  EXPECT_FALSE(o.gate_open);
  ASSERT_TRUE(o.solution->active_boundary);
  EXPECT_NE(*o.solution->active_boundary, Boundary::Interior);
  EXPECT_GE(containment_slack(m, *o.solution), -1e-9);
  expect_oracle_match(m, *o.solution, restricted(RegionTag::FcoPlus));
}

TEST(BothProfitable, AxesNeverCarryTheMaximum) {
  ParamSampler s(47);
  for (int k = 0; k < 300; ++k) {
    const auto m = s.draw();
    const auto o = solve_both_profitable(m);
    ASSERT_TRUE(o.solution);
    EXPECT_NE(o.solution->active_boundary, Boundary::AxisP);
    EXPECT_NE(o.solution->active_boundary, Boundary::AxisQ);
  }
}

TEST(BothProfitable, MatchesRestrictedOracleOnRandomDraws) {
  ParamSampler s(49);
  for (int k = 0; k < 15; ++k) {
    const auto m = s.draw();
    const auto o = solve_both_profitable(m);
    ASSERT_TRUE(o.solution);
    EXPECT_GE(containment_slack(m, *o.solution), -1e-9);
    expect_oracle_match(m, *o.solution, restricted(RegionTag::FcoPlus));
  }
}

TEST(Loss, Fig3NonEmpty) {
  const auto m = fig3(0.5);
  const auto o = solve_loss(m);
  ASSERT_TRUE(o.solution);
  EXPECT_TRUE(o.gate_open);
  const auto& s = *o.solution;
  EXPECT_EQ(s.p_opt, max_price_in_house(m));
  EXPECT_NEAR(demand_in_house(m, s.p_opt, s.follower.action), 0.0, 1e-9);
  EXPECT_GT(s.p_opt - m.c_i - m.c_s, 0.0);
  EXPECT_NEAR(loss_objective(m, s.q_opt), s.leader_value, 1e-9 * utility_scale(m));
  EXPECT_GE(containment_slack(m, s), -1e-9);
  expect_oracle_match(m, s, restricted(RegionTag::FcoLoss));
}

TEST(Loss, EmptyWhenSpillDominates) {
  // eps d_bar_i > (1 - eps^2) d_bar_j - alpha_j c_j
  const auto m = fig3(0.7);
  ASSERT_GT(m.eps * m.d_bar_i, (1 - m.eps * m.eps) * m.d_bar_j - m.alpha_j * m.c_j);
  const auto o = solve_loss(m);
  EXPECT_FALSE(o.gate_open);
  EXPECT_FALSE(o.solution);
  EXPECT_TRUE(loss_regime_empty(fig3(0.0)));
}

TEST(Loss, MatchesRestrictedOracleOnRandomDraws) {
  ParamSampler s(51);
  for (int k = 0; k < 10; ++k) {
    const auto m = s.draw([](const MarketParams& x) { return !loss_regime_empty(x); });
    const auto o = solve_loss(m);
    ASSERT_TRUE(o.solution);
    expect_oracle_match(m, *o.solution, restricted(RegionTag::FcoLoss));
  }
}

TEST(Loss, FollowerNeverSaturated) {
  ParamSampler s(52);
  for (int k = 0; k < 200; ++k) {
    const auto m = s.draw([](const MarketParams& x) { return !loss_regime_empty(x); });
    const auto o = solve_loss(m);
    ASSERT_TRUE(o.solution);
    EXPECT_NE(o.solution->follower.branch, ResponseBranch::SaturatedAtMax) << "draw " << k;
  }
}

TEST(MaxPrice, Fig3Segment) {
  const auto m = fig3(0.5);
  const auto d = derive(m);
  EXPECT_GT(d.p_mx, d.p_sw);
  EXPECT_NEAR(d.r_mx, 1246.0, 1e-9);
  const auto o = solve_max_price(m);
  ASSERT_TRUE(o.solution);
  const auto& s = *o.solution;
  EXPECT_EQ(s.p_opt, d.p_mx);
  EXPECT_GE(containment_slack(m, s), -1e-9);
  // 1-D oracle on the line p = p_mx
  const double grid = coexist::testing::grid_max_1d(
      [&](double q) { return leader_value(m, d.p_mx, q); }, d.l_mx, d.r_mx, 100000);
  EXPECT_NEAR(s.leader_value, grid, 1e-6 * d.scale);
  EXPECT_LE(s.leader_value, solve_coexistence(m).winner.leader_value);
}

TEST(MaxPrice, LineOracleOnRandomDraws) {
  ParamSampler s(53);
  int nonempty = 0;
  for (int k = 0; k < 100; ++k) {
    const auto m = s.draw();
    const auto o = solve_max_price(m);
    if (!o.solution) continue;
    ++nonempty;
    const auto d = derive(m);
    const double grid = coexist::testing::grid_max_1d(
        [&](double q) { return leader_value(m, d.p_mx, q); }, d.l_mx, d.r_mx, 20000);
    EXPECT_GE(o.solution->leader_value, grid - 1e-9 * d.scale);
    EXPECT_LE(o.solution->leader_value, grid + 1e-6 * d.scale);
  }
  EXPECT_GT(nonempty, 20);
}

TEST(MaxPrice, NonEmptyAboveSwitchingPrice) {
  ParamSampler s(57);
  for (int k = 0; k < 100; ++k) {
    const auto m = s.draw([](const MarketParams& x) {
      const auto d = derive(x);
      return d.p_mx > d.p_sw;
    });
    const auto d = derive(m);
    EXPECT_LT(d.l_mx, d.r_mx) << "draw " << k;
  }
}

TEST(AtPar, ZeroFollowerProfit) {
  ParamSampler s(55);
  for (int k = 0; k < 300; ++k) {
    const auto m = s.draw();
    const auto o = solve_at_par(m);
    ASSERT_TRUE(o.solution);
    EXPECT_TRUE(o.gate_open);
    EXPECT_LE(std::abs(o.solution->follower_value), 1e-6 * utility_scale(m));
    EXPECT_TRUE(o.solution->follower.action.operates());
    EXPECT_GE(containment_slack(m, *o.solution), -1e-9);
  }
}

TEST(AtPar, WinsForSymmetricHighEps) {
  EXPECT_EQ(solve_coexistence(fig3(0.9)).winner.regime, Regime::AtPar);
}

TEST(AtPar, ClosedFormPricesMaximizeTheirQuadratics) {
  ParamSampler s(57);
  for (int k = 0; k < 300; ++k) {
    const auto m = s.draw();
    const double hi1 = std::min(switching_price(m), max_price_in_house(m));
    const auto f1 = at_par_branch1_objective(m);
    EXPECT_NEAR(at_par_branch1_price(m), maximize_on_interval(f1, 0.0, hi1).x,
                1e-9 * std::max(1.0, hi1));
    if (switching_price(m) <= max_price_in_house(m)) {
      const auto f2 = at_par_branch2_objective(m);
      const auto best = maximize_on_interval(f2, switching_price(m), max_price_in_house(m));
      EXPECT_NEAR(at_par_branch2_price(m), best.x, 1e-9 * max_price_in_house(m));
    }
  }
}

TEST(AtPar, QuadraticsTrackFrontierUtility) {
  ParamSampler s(59);
  for (int k = 0; k < 100; ++k) {
    const auto m = s.draw([](const MarketParams& x) { return x.eps > 0.05; });
    const double p_sw = switching_price(m);
    const double p_mx = max_price_in_house(m);
    const auto f1 = at_par_branch1_objective(m);
    const auto f2 = at_par_branch2_objective(m);
    for (int i = 0; i <= 200; ++i) {
      const double p = p_mx * i / 200.0;
      const double q = theta(m, p);
      const auto br = best_response(m, p, q);
      if (demand_in_house(m, p, br.action) <= 0.0) continue;  // clamped: quadratics do not apply
      const double f = p <= p_sw ? f1(p) : f2(p);
      EXPECT_NEAR(f, leader_value(m, p, q), 1e-8 * utility_scale(m)) << p;
    }
  }
}

TEST(AtPar, Branch1AgainstFrontierGrid) {
  for (const auto& m : {fig3(0.5), fig3(0.9), fig4(0.8), coexist::testing::fig5(0.5)}) {
    const double hi = std::min(switching_price(m), max_price_in_house(m));
    const auto br = solve_at_par_branches(m);
    const double grid = coexist::testing::grid_max_1d(
        [&](double p) { return leader_value(m, p, theta(m, p)); }, 0.0, hi, 10000);
    EXPECT_GE(br.first.leader_value, grid - 1e-9 * utility_scale(m));
    EXPECT_LE(br.first.leader_value, grid + 1e-5 * utility_scale(m));
  }
}

TEST(AtPar, Branch2AgainstFrontierGrid) {
  for (const auto& m : {fig3(0.5), fig3(0.9), fig4(0.8)}) {
    ASSERT_LE(switching_price(m), max_price_in_house(m));
    const auto br = solve_at_par_branches(m);
    ASSERT_TRUE(br.second);
    const double grid = coexist::testing::grid_max_1d(
        [&](double p) { return leader_value(m, p, theta(m, p)); }, switching_price(m),
        max_price_in_house(m), 10000);
    EXPECT_GE(br.second->leader_value, grid - 1e-9 * utility_scale(m));
    EXPECT_LE(br.second->leader_value, grid + 1e-5 * utility_scale(m));
  }
}

TEST(Coexistence, WorkedExamples) {
  EXPECT_EQ(solve_coexistence(fig3(0.1)).winner.regime, Regime::BothProfitable);
  EXPECT_EQ(solve_coexistence(fig4(0.8)).winner.regime, Regime::AtPar);
}

TEST(Coexistence, RefusesWhenAssumptionsFail) {
  auto m = fig3(0.5);
  m.d_bar_i = 0.0;
  EXPECT_THROW(solve_coexistence(m), AssumptionViolated);
}

TEST(Coexistence, WinnerDominatesEverySolution) {
  ParamSampler s(61);
  for (int k = 0; k < 500; ++k) {
    const auto m = s.draw();
    const auto rep = solve_coexistence(m);
    for (const auto& sol : rep.solutions) EXPECT_GE(rep.winner.leader_value, sol.leader_value);
    // gated-out boundary optima of the mutual-profit region are covered by the other regimes
    const auto& bp = rep.outcome(Regime::BothProfitable);
    if (bp.solution) {
      EXPECT_GE(rep.winner.leader_value, bp.solution->leader_value - 1e-9 * rep.derived.scale);
    }
    EXPECT_EQ(rep.solutions.size() + rep.empty_regimes.size(), 4u);
    for (const auto& o : rep.outcomes) {
      if (o.solution) EXPECT_GE(containment_slack(m, *o.solution), -1e-9) << to_string(o.regime);
    }
  }
}

TEST(Coexistence, LemmaOneExcludesInteriorWinner) {
  ParamSampler s(63);
  for (int k = 0; k < 200; ++k) {
    const auto m = s.draw([](const MarketParams& x) { return lemma1_condition(x); });
    const auto w = solve_coexistence(m).winner;
    EXPECT_FALSE(w.regime == Regime::BothProfitable && w.active_boundary == Boundary::Interior);
  }
}

TEST(Coexistence, UnclampedOptimizersAreStationary) {
  ParamSampler s(65);
  for (int k = 0; k < 300; ++k) {
    const auto m = s.draw();
    const double scale = utility_scale(m);
    const auto rep = solve_coexistence(m);
    const auto& bp = rep.outcome(Regime::BothProfitable);
    if (bp.gate_open) {
      const auto w = objective_coefficients(m);
      EXPECT_LE(std::abs(w.d_dp(bp.solution->p_opt, bp.solution->q_opt)), 1e-8 * scale);
      EXPECT_LE(std::abs(w.d_dq(bp.solution->p_opt, bp.solution->q_opt)), 1e-8 * scale);
    }
    const double p1 = at_par_branch1_price(m);
    const double hi1 = std::min(switching_price(m), max_price_in_house(m));
    if (p1 > 0.0 && p1 < hi1) {
      EXPECT_LE(std::abs(at_par_branch1_objective(m).derivative(p1)), 1e-8 * scale);
    }
    if (!loss_regime_empty(m)) {
      const double q = rep.outcome(Regime::InHouseLoss).solution->q_opt;
      if (q == loss_stationary_q(m)) {
        const double step = 1e-6 * std::max(1.0, q);
        const double d = (loss_objective(m, q + step) - loss_objective(m, q - step)) / (2 * step);
        EXPECT_LE(std::abs(d), 1e-8 * scale);
      }
    }
  }
}

TEST(Coexistence, RegimeCodesAndTieOrder) {
  EXPECT_EQ(regime_code(Regime::BothProfitable), 1);
  EXPECT_EQ(regime_code(Regime::InHouseLoss), 2);
  EXPECT_EQ(regime_code(Regime::AtPar), 3);
  EXPECT_EQ(regime_code(Regime::MaxPrice), 4);
  EXPECT_LT(tie_rank(Regime::BothProfitable), tie_rank(Regime::AtPar));
  EXPECT_LT(tie_rank(Regime::AtPar), tie_rank(Regime::MaxPrice));
  EXPECT_LT(tie_rank(Regime::MaxPrice), tie_rank(Regime::InHouseLoss));
}

TEST(Coexistence, TieResolvesToEarlierRegime) {
  // On the fig5 family the at-par optimum lies on the L3 edge of the
  // mutual-profit region, so both edge solvers return the same point.
  const auto m = coexist::testing::fig5(0.1);
  const auto bp = solve_both_profitable(m);
  const auto ap = solve_at_par(m);
  ASSERT_TRUE(bp.solution && ap.solution);
  EXPECT_EQ(bp.solution->active_boundary, Boundary::L3);
  EXPECT_NEAR(bp.solution->leader_value, ap.solution->leader_value, 1e-6 * utility_scale(m));
  // gated out, so AtPar takes it
  EXPECT_EQ(solve_coexistence(m).winner.regime, Regime::AtPar);
}
