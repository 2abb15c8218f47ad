#pragma once

// Comparison predicates between the co-existence sub-regimes.

#include <cmath>
#include <optional>

#include "coexist/market.hpp"

namespace coexist {

/// Sign test of (8 - 6 eps^2) a_i a_j - eps^2 (a_i^2 + a_j^2) < 0. When it
/// holds, U is not concave and operating both units profitably in the
/// interior is never optimal.
inline bool lemma1_condition(const MarketParams& m) {
  const double e2 = m.eps * m.eps;
  const double ai = m.alpha_i;
  const double aj = m.alpha_j;
  return (8.0 - 6.0 * e2) * ai * aj - e2 * (ai * ai + aj * aj) < 0.0;
}

/// Large-eps test between operating at the maximum in-house price and
/// forcing the follower to operate at par. False when d_bar_j^2 < alpha_j o_j.
inline bool lemma2_condition(const MarketParams& m) {
  const double radicand = m.d_bar_j * m.d_bar_j - m.alpha_j * m.o_j;
  if (radicand < 0.0) return false;
  const double ai = m.alpha_i;
  const double aj = m.alpha_j;
  const double lhs = (aj - ai) * m.d_bar_i + (2.0 * ai + aj) * m.d_bar_j + ai * aj * (m.c_j - m.c_i);
  const double rhs = 2.0 * std::sqrt(2.0) * ai * std::sqrt(radicand);
  return lhs < rhs;
}

/// Numerator of psi(0) - p_mx; the denominator alpha_i (2 - eps^2) is positive.
inline double loss_gate_numerator(const MarketParams& m) {
  const double e = m.eps;
  return e * e * m.d_bar_i - e * (1.0 - e * e) * m.d_bar_j + e * m.alpha_j * m.c_j;
}

/// True iff psi(0) >= p_mx, i.e. there is no price pair at which the
/// in-house unit sells nothing while the follower still operates below p_mx.
inline bool loss_regime_empty(const MarketParams& m) { return loss_gate_numerator(m) >= 0.0; }

struct LemmaFlags {
  bool lemma1_holds = false;
  bool loss_regime_empty = false;
  bool lemma2_condition_holds = false;
  std::optional<double> epsilon_bar_estimate;  ///< filled from an eps sweep
};

inline LemmaFlags lemma_flags(const MarketParams& m) {
  LemmaFlags f;
  f.lemma1_holds = lemma1_condition(m);
  f.loss_regime_empty = loss_regime_empty(m);
  f.lemma2_condition_holds = lemma2_condition(m);
  return f;
}

}  // namespace coexist
