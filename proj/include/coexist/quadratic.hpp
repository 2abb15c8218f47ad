#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>

namespace coexist {

/// a x^2 + b x + c
template <std::floating_point Real>
struct Quadratic {
  Real a{};
  Real b{};
  Real c{};

  constexpr Real operator()(Real x) const { return (a * x + b) * x + c; }
  constexpr Real derivative(Real x) const { return Real(2) * a * x + b; }
};

template <std::floating_point Real>
struct IntervalMax {
  Real x{};
  Real value{};
  bool clamped = false;  ///< true when x sits on an interval end rather than a stationary point
};

/// Maximizes f over [lo, hi] (lo <= hi). Concave case clamps the vertex;
/// otherwise the larger endpoint wins, ties going to lo.
template <std::floating_point Real>
IntervalMax<Real> maximize_on_interval(const Quadratic<Real>& f, Real lo, Real hi) {
  if (f.a < Real(0)) {
    const Real vertex = -f.b / (Real(2) * f.a);
    if (vertex > lo && vertex < hi) return {vertex, f(vertex), false};
  }
  const Real f_lo = f(lo);
  const Real f_hi = f(hi);
  if (f_hi > f_lo) return {hi, f_hi, true};
  return {lo, f_lo, true};
}

}  // namespace coexist
