#pragma once

// Closed-form constants that depend on MarketParams alone.

#include <algorithm>
#include <cmath>

#include "coexist/market.hpp"

namespace coexist {

/// U(p, q) = w1 p^2 + w2 p q + w3 q^2 + w4 p + w5 q + w6: the coalition's
/// utility with the follower at its interior best response and no demand
/// clamping.
struct ObjectiveCoefficients {
  double w1 = 0.0, w2 = 0.0, w3 = 0.0, w4 = 0.0, w5 = 0.0, w6 = 0.0;

  double operator()(double p, double q) const {
    return w1 * p * p + w2 * p * q + w3 * q * q + w4 * p + w5 * q + w6;
  }
  double d_dp(double p, double q) const { return 2.0 * w1 * p + w2 * q + w4; }
  double d_dq(double p, double q) const { return w2 * p + 2.0 * w3 * q + w5; }
  /// 4 w1 w3 - w2^2; positive together with w1 < 0 means U is strictly concave.
  double hessian_det() const { return 4.0 * w1 * w3 - w2 * w2; }
};

inline ObjectiveCoefficients objective_coefficients(const MarketParams& m) {
  const double e = m.eps;
  const double k = m.c_i + m.c_s;
  ObjectiveCoefficients w;
  w.w1 = -m.alpha_i * (1.0 - e * e / 2.0);
  w.w2 = e * (m.alpha_i + m.alpha_j) / 2.0;
  w.w3 = -m.alpha_j / 2.0;
  w.w4 = (2.0 * m.d_bar_i + e * m.d_bar_j + e * m.alpha_j * m.c_j - e * m.alpha_i * m.c_s +
          2.0 * m.alpha_i * (1.0 - e * e / 2.0) * k) /
         2.0;
  w.w5 = -e * m.alpha_j * k / 2.0 + (m.d_bar_j - m.alpha_j * m.c_j + m.alpha_j * m.c_s) / 2.0;
  // The fixed costs belong in the constant term as well.
  w.w6 = -(m.d_bar_i + e * (m.d_bar_j + m.alpha_j * m.c_j) / 2.0) * k -
         ((m.d_bar_j - m.alpha_j * m.c_j) / 2.0) * m.c_s - m.o_i - m.o_s;
  return w;
}

struct DerivedConstants {
  double p_mx = 0.0;
  double p_tilde_mx = 0.0;
  double p_sw = 0.0;
  ObjectiveCoefficients w;
  double p_bar = 0.0;  ///< right end of the p-sections whose left boundary is q = 0
  double l_mx = 0.0;   ///< lower q end of the p = p_mx edge of the mutual-profit region
  double r_mx = 0.0;   ///< upper q end of that edge
  double scale = 1.0;
};

/// Everything here uses the printed closed forms; the geometry module
/// recomputes p_bar, l_mx and r_mx from the boundary curves and the tests
/// compare the two.
inline DerivedConstants derive(const MarketParams& m) {
  check_params(m);
  const double e = m.eps;
  DerivedConstants d;
  d.p_mx = max_price_in_house(m);
  d.p_tilde_mx = max_price_out_house(m);
  d.p_sw = switching_price(m);
  d.w = objective_coefficients(m);
  d.scale = utility_scale(m);

  const double psi_at_zero =
      (2.0 * m.d_bar_i + e * m.d_bar_j + e * m.alpha_j * m.c_j) / (m.alpha_i * (2.0 - e * e));
  const double phi_root =
      e == 0.0 ? kInf : (m.d_bar_j + 2.0 * e * m.d_bar_i - m.alpha_j * m.c_j) / (e * m.alpha_i);
  d.p_bar = std::min({psi_at_zero, d.p_mx, phi_root});

  d.l_mx = std::max(
      (-e * m.d_bar_i + (1.0 - e * e) * m.d_bar_j - m.alpha_j * m.c_j) / m.alpha_j, 0.0);
  if (d.p_mx <= d.p_sw) {
    d.r_mx = (m.d_bar_j * (1.0 + e * e) + e * m.d_bar_i - m.alpha_j * m.c_j -
              2.0 * std::sqrt(m.alpha_j * m.o_j)) /
             m.alpha_j;
  } else {
    d.r_mx = (m.d_bar_j * (1.0 - e * e) + e * m.d_bar_i - m.alpha_j * m.c_j) / m.alpha_j;
  }
  return d;
}

}  // namespace coexist
