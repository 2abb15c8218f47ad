#pragma once

// Market model: exogenous parameters, assumption checks, demands and raw
// utilities of the coalition (supplier + in-house manufacturer) and of the
// out-house manufacturer.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace coexist {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// The eleven exogenous scalars. Index `i` is the in-house manufacturer
/// (part of the leading coalition), `j` the out-house follower, `s` the
/// supplier.
struct MarketParams {
  double d_bar_i = 0.0;  ///< dedicated market potential of the in-house unit
  double d_bar_j = 0.0;  ///< dedicated market potential of the out-house unit
  double alpha_i = 0.0;  ///< price sensitivity of in-house customers
  double alpha_j = 0.0;  ///< price sensitivity of out-house customers
  double eps = 0.0;      ///< substitutability, in [0, 1]
  double c_i = 0.0;      ///< in-house per-unit production cost
  double c_j = 0.0;      ///< out-house per-unit production cost
  double c_s = 0.0;      ///< per-unit raw-material procurement cost
  double o_i = 0.0;      ///< in-house operating cost
  double o_j = 0.0;      ///< out-house operating cost
  double o_s = 0.0;      ///< supplier operating cost

  friend bool operator==(const MarketParams&, const MarketParams&) = default;
};

class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws InvalidParams naming the first offending field.
inline void check_params(const MarketParams& m) {
  const auto require = [](bool ok, const char* what) {
    if (!ok) throw InvalidParams(std::string("invalid market parameter: ") + what);
  };
  const auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  require(finite_nonneg(m.d_bar_i), "d_bar_i must be finite and >= 0");
  require(finite_nonneg(m.d_bar_j), "d_bar_j must be finite and >= 0");
  require(std::isfinite(m.alpha_i) && m.alpha_i > 0.0, "alpha_i must be finite and > 0");
  require(std::isfinite(m.alpha_j) && m.alpha_j > 0.0, "alpha_j must be finite and > 0");
  require(std::isfinite(m.eps) && m.eps >= 0.0 && m.eps <= 1.0, "eps must lie in [0, 1]");
  require(finite_nonneg(m.c_i), "c_i must be finite and >= 0");
  require(finite_nonneg(m.c_j), "c_j must be finite and >= 0");
  require(finite_nonneg(m.c_s), "c_s must be finite and >= 0");
  require(finite_nonneg(m.o_i), "o_i must be finite and >= 0");
  require(finite_nonneg(m.o_j), "o_j must be finite and >= 0");
  require(finite_nonneg(m.o_s), "o_s must be finite and >= 0");
}

/// Largest in-house price with non-zero demand even under maximal spill-over.
inline double max_price_in_house(const MarketParams& m) {
  return (m.d_bar_i + m.eps * m.d_bar_j) / m.alpha_i;
}

/// Largest out-house price with non-zero demand even under maximal spill-over.
inline double max_price_out_house(const MarketParams& m) {
  return (m.d_bar_j + m.eps * m.d_bar_i) / m.alpha_j;
}

/// In-house price above which the follower's best price saturates on its
/// participation frontier. +inf when eps = 0.
inline double switching_price(const MarketParams& m) {
  if (m.eps == 0.0) return kInf;
  return m.d_bar_i / m.alpha_i + std::sqrt(m.alpha_j * m.o_j) / (m.eps * m.alpha_i);
}

/// Natural utility magnitude used to scale every tolerance.
inline double utility_scale(const MarketParams& m) {
  return std::max({1.0, std::abs(m.o_i) + std::abs(m.o_s), m.d_bar_i * max_price_in_house(m),
                   m.d_bar_j * max_price_out_house(m)});
}

// ---------------------------------------------------------------------------
// Assumptions

struct AssumptionReport {
  bool a1_holds = false;
  bool a2_holds = false;
  // Each slack is (left side - right side) of the inequality, oriented so
  // that a non-negative slack means the inequality holds.
  double a1_in_house_slack = 0.0;
  double a1_out_house_slack = 0.0;
  double a2_slack = 0.0;  ///< bound - eps; +inf when c_i = 0

  bool holds() const { return a1_holds && a2_holds; }
};

/// Market potentials large enough against costs (A.1) and a cap on the
/// substitutability factor (A.2).
inline AssumptionReport validate_assumptions(const MarketParams& m) {
  check_params(m);
  AssumptionReport r;
  r.a1_in_house_slack =
      m.d_bar_i - (m.alpha_i * (m.c_s + m.c_i) + 2.0 * std::sqrt(m.alpha_i * (m.o_s + m.o_i)));
  const double fixed_cost_term = std::max(std::sqrt(2.0 * m.alpha_j * (m.o_s + m.o_i)),
                                          std::sqrt(m.alpha_j * m.o_j));
  r.a1_out_house_slack = m.d_bar_j - (m.alpha_j * (m.c_s + m.c_j) + 2.0 * fixed_cost_term);
  r.a1_holds = r.a1_in_house_slack >= 0.0 && r.a1_out_house_slack >= 0.0;

  // Vacuous bound when c_i = 0.
  const double a2_bound =
      m.c_i == 0.0 ? kInf : 2.0 * std::sqrt(m.alpha_j * m.o_j) / (m.alpha_j * m.c_i);
  r.a2_slack = a2_bound - m.eps;
  r.a2_holds = m.eps <= a2_bound;
  return r;
}

// ---------------------------------------------------------------------------
// Follower action

/// Either a finished-product price quoted by the out-house unit or the
/// decision not to operate.
class FollowerAction {
 public:
  static FollowerAction operate(double p_tilde) { return FollowerAction(p_tilde); }
  static FollowerAction no_operate() { return FollowerAction(); }

  bool operates() const { return price_.has_value(); }
  /// Precondition: operates().
  double price() const { return *price_; }

  friend bool operator==(const FollowerAction&, const FollowerAction&) = default;

 private:
  FollowerAction() = default;
  explicit FollowerAction(double p) : price_(p) {}

  std::optional<double> price_;
};

// ---------------------------------------------------------------------------
// Demands and utilities

inline double demand_in_house(const MarketParams& m, double p, const FollowerAction& follower) {
  double raw = m.d_bar_i - m.alpha_i * p;
  if (follower.operates()) raw += m.eps * m.alpha_j * follower.price();
  return std::max(raw, 0.0);
}

inline double demand_out_house(const MarketParams& m, double p, double p_tilde) {
  return std::max(m.d_bar_j - m.alpha_j * p_tilde + m.eps * m.alpha_i * p, 0.0);
}

struct UtilityBreakdown {
  double demand_i = 0.0;
  double demand_j = 0.0;
  double retail_margin_revenue = 0.0;  ///< in-house demand times in-house margin
  double wholesale_revenue = 0.0;      ///< out-house demand times supplier margin
  double leader_utility = 0.0;
  double follower_utility = 0.0;
};

/// Evaluates every demand and utility at a price profile. The coalition is
/// charged o_i + o_s whenever it operates, whether or not the in-house unit
/// is open.
inline UtilityBreakdown evaluate(const MarketParams& m, double p, double q,
                                 const FollowerAction& follower, bool in_house_open = true,
                                 bool coalition_operates = true) {
  UtilityBreakdown b;
  if (!coalition_operates) return b;

  b.demand_i = demand_in_house(m, p, follower);
  if (follower.operates()) b.demand_j = demand_out_house(m, p, follower.price());

  if (in_house_open) b.retail_margin_revenue = b.demand_i * (p - m.c_i - m.c_s);
  if (follower.operates()) {
    b.wholesale_revenue = b.demand_j * (q - m.c_s);
    b.follower_utility = b.demand_j * (follower.price() - q - m.c_j) - m.o_j;
  }
  b.leader_utility = b.retail_margin_revenue + b.wholesale_revenue - m.o_s - m.o_i;
  return b;
}

inline double leader_utility(const MarketParams& m, double p, double q,
                             const FollowerAction& follower, bool in_house_open = true,
                             bool coalition_operates = true) {
  return evaluate(m, p, q, follower, in_house_open, coalition_operates).leader_utility;
}

inline double follower_utility(const MarketParams& m, double p, double q,
                               const FollowerAction& follower) {
  return evaluate(m, p, q, follower).follower_utility;
}

}  // namespace coexist
