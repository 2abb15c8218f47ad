#pragma once

// Boundary curves and region membership for the co-existence analysis.
//
// The co-existence region is {(p, q) : 0 <= p <= p_mx, q >= 0, q <= theta(p)}.
// Inside it:
//   mutual-profit region  q <= min(theta(p), phi(p)) and p <= min(p_mx, psi(q))
//   loss region           p > psi(q)            (in-house demand clamped at 0)
//   saturated region      q > phi(p)            (follower price stuck at its cap)
// The mutual-profit region is a convex polygon; see plus_region_halfplanes().

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string_view>

#include "coexist/derived.hpp"
#include "coexist/follower.hpp"
#include "coexist/market.hpp"
#include "coexist/quadratic.hpp"

namespace coexist {

class NotInvertible : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class EmptySection : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class RegionTag { FcoPlus, FcoLoss, FcoSaturated, OutsideFco };

inline constexpr std::string_view to_string(RegionTag t) {
  switch (t) {
    case RegionTag::FcoPlus: return "FcoPlus";
    case RegionTag::FcoLoss: return "FcoLoss";
    case RegionTag::FcoSaturated: return "FcoSaturated";
    case RegionTag::OutsideFco: return "OutsideFco";
  }
  return "?";
}

inline std::optional<RegionTag> region_tag_from_string(std::string_view s) {
  for (auto t : {RegionTag::FcoPlus, RegionTag::FcoLoss, RegionTag::FcoSaturated,
                 RegionTag::OutsideFco}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

/// Wholesale price above which the follower's best price hits its cap.
inline double phi(const MarketParams& m, double p) {
  return (m.d_bar_j + 2.0 * m.eps * m.d_bar_i - m.eps * m.alpha_i * p - m.alpha_j * m.c_j) /
         m.alpha_j;
}

/// In-house price at which in-house demand reaches zero, given q.
inline double psi(const MarketParams& m, double q) {
  const double e = m.eps;
  return (2.0 * m.d_bar_i + e * m.d_bar_j + e * m.alpha_j * (m.c_j + q)) /
         ((2.0 - e * e) * m.alpha_i);
}

/// Throws NotInvertible at eps = 0, where psi is constant.
inline double psi_inv(const MarketParams& m, double p) {
  const double e = m.eps;
  if (e == 0.0) throw NotInvertible("psi is constant when eps = 0");
  return ((2.0 - e * e) * m.alpha_i * p - 2.0 * m.d_bar_i - e * m.d_bar_j) / (e * m.alpha_j) -
         m.c_j;
}

inline double phi_inv(const MarketParams& m, double q) {
  const double e = m.eps;
  if (e == 0.0) throw NotInvertible("phi is constant when eps = 0");
  return (m.d_bar_j + 2.0 * e * m.d_bar_i - m.alpha_j * m.c_j - m.alpha_j * q) / (e * m.alpha_i);
}

/// Signed distances to each defining inequality; non-negative means satisfied.
struct RegionSlacks {
  double theta_gap = 0.0;  ///< theta(p) - q
  double phi_gap = 0.0;    ///< phi(p) - q
  double psi_gap = 0.0;    ///< psi(q) - p
  double p_mx_gap = 0.0;   ///< p_mx - p
};

inline RegionSlacks region_slacks(const MarketParams& m, double p, double q) {
  return {theta(m, p) - q, phi(m, p) - q, psi(m, q) - p, max_price_in_house(m) - p};
}

/// Boundary points belong to the first matching region in the order
/// FcoPlus, FcoLoss, FcoSaturated.
inline RegionTag region_of(const MarketParams& m, double p, double q) {
  const double th = theta(m, p);
  if (q > th) return RegionTag::OutsideFco;
  const double ps = psi(m, q);
  if (q <= std::min(th, phi(m, p)) && p <= std::min(max_price_in_house(m), ps)) {
    return RegionTag::FcoPlus;
  }
  if (p > ps) return RegionTag::FcoLoss;
  return RegionTag::FcoSaturated;
}

// ---------------------------------------------------------------------------
// p-sections of the mutual-profit region

/// Right end of the p-section: min(theta(p), phi(p)).
inline double q_bar(const MarketParams& m, double p) { return std::min(theta(m, p), phi(m, p)); }

/// Same quantity by the branch shortcut: theta up to the switching price,
/// phi beyond it. Used as a cross-check of q_bar().
inline double q_bar_branch_form(const MarketParams& m, double p) {
  return p <= switching_price(m) ? theta(m, p) : phi(m, p);
}

/// Left end of the p-section: max(0, psi^-1(p)). At eps = 0 psi is the
/// constant p_mx, so the section is [0, ...] up to psi(0) and empty past it.
inline double l_bound(const MarketParams& m, double p) {
  if (m.eps == 0.0) return p <= psi(m, 0.0) ? 0.0 : kInf;
  return std::max(0.0, psi_inv(m, p));
}

inline double p_bar(const MarketParams& m) {
  const double phi_root = m.eps == 0.0 ? kInf : phi_inv(m, 0.0);
  return std::min({psi(m, 0.0), max_price_in_house(m), phi_root});
}

/// Maximizer of U(p, .) over all real q.
inline double h(const MarketParams& m, double p) {
  const auto w = objective_coefficients(m);
  return -(w.w2 * p + w.w5) / (2.0 * w.w3);
}

/// Maximizer of U(p, .) over the p-section [l_bound(p), q_bar(p)].
inline double q_star_section(const MarketParams& m, double p) {
  const double lo = l_bound(m, p);
  const double hi = q_bar(m, p);
  if (hi < lo) throw EmptySection("empty p-section");
  return std::max(lo, std::min(h(m, p), hi));
}

// ---------------------------------------------------------------------------
// The mutual-profit region as a polygon

/// Boundary lines of the mutual-profit region. L1: q = phi(p); L2: p = psi(q);
/// L3: q = theta(p) (affine branch); L4: p = p_mx. AxisP / AxisQ are p = 0
/// and q = 0.
enum class Boundary { Interior, L1, L2, L3, L4, AxisP, AxisQ };

inline constexpr std::string_view to_string(Boundary b) {
  switch (b) {
    case Boundary::Interior: return "Interior";
    case Boundary::L1: return "L1";
    case Boundary::L2: return "L2";
    case Boundary::L3: return "L3";
    case Boundary::L4: return "L4";
    case Boundary::AxisP: return "AxisP";
    case Boundary::AxisQ: return "AxisQ";
  }
  return "?";
}

/// a p + b q <= c
struct HalfPlane {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  Boundary line = Boundary::Interior;

  double residual(double p, double q) const { return c - (a * p + b * q); }
};

/// min(theta, phi) coincides with min(theta_affine, phi) everywhere, so the
/// region is cut out by six half-planes.
inline std::array<HalfPlane, 6> plus_region_halfplanes(const MarketParams& m) {
  const double e = m.eps;
  const double root = std::sqrt(m.alpha_j * m.o_j);
  return {{
      {e * m.alpha_i, m.alpha_j, m.d_bar_j + 2.0 * e * m.d_bar_i - m.alpha_j * m.c_j,
       Boundary::L1},
      {(2.0 - e * e) * m.alpha_i, -e * m.alpha_j,
       2.0 * m.d_bar_i + e * m.d_bar_j + e * m.alpha_j * m.c_j, Boundary::L2},
      {-e * m.alpha_i, m.alpha_j, m.d_bar_j - m.alpha_j * m.c_j - 2.0 * root, Boundary::L3},
      {1.0, 0.0, max_price_in_house(m), Boundary::L4},
      {-1.0, 0.0, 0.0, Boundary::AxisP},
      {0.0, -1.0, 0.0, Boundary::AxisQ},
  }};
}

/// Points (p0 + t dp, q0 + t dq) for t in [t_lo, t_hi].
struct Segment {
  Boundary line = Boundary::Interior;
  double p0 = 0.0, q0 = 0.0;
  double dp = 0.0, dq = 0.0;
  double t_lo = 0.0, t_hi = 0.0;

  double p_at(double t) const { return p0 + t * dp; }
  double q_at(double t) const { return q0 + t * dq; }
};

/// The part of one boundary line inside the mutual-profit region, or
/// nullopt when the two do not meet.
inline std::optional<Segment> plus_region_edge(const MarketParams& m, Boundary line) {
  const double e = m.eps;
  Segment s;
  s.line = line;
  switch (line) {
    case Boundary::L1:
      s.p0 = 0.0, s.q0 = phi(m, 0.0), s.dp = 1.0, s.dq = -e * m.alpha_i / m.alpha_j;
      break;
    case Boundary::L3:
      s.p0 = 0.0, s.q0 = theta(m, 0.0), s.dp = 1.0, s.dq = e * m.alpha_i / m.alpha_j;
      break;
    case Boundary::AxisQ:
      s.p0 = 0.0, s.q0 = 0.0, s.dp = 1.0, s.dq = 0.0;
      break;
    case Boundary::L2:
      s.p0 = psi(m, 0.0), s.q0 = 0.0, s.dp = e * m.alpha_j / ((2.0 - e * e) * m.alpha_i),
      s.dq = 1.0;
      break;
    case Boundary::L4:
      s.p0 = max_price_in_house(m), s.q0 = 0.0, s.dp = 0.0, s.dq = 1.0;
      break;
    case Boundary::AxisP:
      s.p0 = 0.0, s.q0 = 0.0, s.dp = 0.0, s.dq = 1.0;
      break;
    case Boundary::Interior:
      return std::nullopt;
  }

  double lo = -kInf;
  double hi = kInf;
  for (const HalfPlane& hp : plus_region_halfplanes(m)) {
    if (hp.line == line) continue;
    const double g = hp.a * s.dp + hp.b * s.dq;
    const double r = hp.residual(s.p0, s.q0);
    const double tol = 1e-12 * std::max({1.0, std::abs(hp.c), std::abs(hp.a * s.p0),
                                         std::abs(hp.b * s.q0)});
    if (std::abs(g) <= 1e-15 * (std::abs(hp.a) + std::abs(hp.b))) {
      if (r < -tol) return std::nullopt;  // parallel and outside
      continue;
    }
    if (g > 0.0) {
      hi = std::min(hi, r / g);
    } else {
      lo = std::max(lo, r / g);
    }
  }
  const double t_tol = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
  if (lo > hi + t_tol) return std::nullopt;
  if (lo > hi) lo = hi = 0.5 * (lo + hi);
  s.t_lo = lo;
  s.t_hi = hi;
  return s;
}

/// Restriction of U to a segment, as a quadratic in the segment parameter.
inline Quadratic<double> restrict_objective(const ObjectiveCoefficients& w, const Segment& s) {
  Quadratic<double> f;
  f.a = w.w1 * s.dp * s.dp + w.w2 * s.dp * s.dq + w.w3 * s.dq * s.dq;
  f.b = 2.0 * w.w1 * s.p0 * s.dp + w.w2 * (s.p0 * s.dq + s.q0 * s.dp) +
        2.0 * w.w3 * s.q0 * s.dq + w.w4 * s.dp + w.w5 * s.dq;
  f.c = w(s.p0, s.q0);
  return f;
}

}  // namespace coexist
