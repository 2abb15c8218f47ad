#pragma once

// Closed-form best response of the out-house manufacturer to a leader
// announcement (p, q).

#include <cmath>
#include <stdexcept>
#include <string>

#include "coexist/market.hpp"

namespace coexist {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Participation frontier: the largest wholesale price q at which the
/// follower still (weakly) prefers operating, given in-house price p.
/// Affine below the switching price, hyperbolic above it. The affine branch
/// is used at p == switching_price(m); both branches agree there.
inline double theta(const MarketParams& m, double p) {
  const double root = std::sqrt(m.alpha_j * m.o_j);
  if (p <= switching_price(m)) {
    return (m.d_bar_j + m.eps * m.alpha_i * p - m.alpha_j * m.c_j - 2.0 * root) / m.alpha_j;
  }
  const double spill = m.eps * m.alpha_i * p - m.eps * m.d_bar_i;
  if (!(spill > 0.0)) {
    throw DomainError("theta: hyperbolic branch evaluated at or below d_bar_i/alpha_i (p = " +
                      std::to_string(p) + ")");
  }
  return (m.d_bar_j + m.eps * m.d_bar_i - m.alpha_j * m.c_j) / m.alpha_j -
         m.alpha_j * m.o_j / (m.alpha_j * spill);
}

enum class ResponseBranch { Interior, SaturatedAtMax, NoOperate };

struct BestResponse {
  FollowerAction action = FollowerAction::no_operate();
  double theta_at_p = 0.0;
  ResponseBranch branch = ResponseBranch::NoOperate;
};

/// Unclamped stationary price of the follower's concave profit.
inline double follower_stationary_price(const MarketParams& m, double p, double q) {
  return (m.d_bar_j + m.eps * m.alpha_i * p) / (2.0 * m.alpha_j) + (m.c_j + q) / 2.0;
}

/// Ties at q == theta(p) resolve to operating.
inline BestResponse best_response(const MarketParams& m, double p, double q) {
  BestResponse r;
  r.theta_at_p = theta(m, p);
  if (q > r.theta_at_p) {
    r.action = FollowerAction::no_operate();
    r.branch = ResponseBranch::NoOperate;
    return r;
  }
  const double cap = max_price_out_house(m);
  const double stationary = follower_stationary_price(m, p, q);
  if (stationary >= cap) {
    r.action = FollowerAction::operate(cap);
    r.branch = ResponseBranch::SaturatedAtMax;
  } else {
    r.action = FollowerAction::operate(stationary);
    r.branch = ResponseBranch::Interior;
  }
  return r;
}

inline double follower_opt_utility(const MarketParams& m, double p, double q) {
  return follower_utility(m, p, q, best_response(m, p, q).action);
}

/// Leader utility when the follower plays its best response to (p, q).
inline double leader_value(const MarketParams& m, double p, double q) {
  return leader_utility(m, p, q, best_response(m, p, q).action);
}

}  // namespace coexist
