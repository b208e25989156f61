#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "cars/diagnostics.hpp"

namespace cars {

struct GoldenResult {
  double x = 0.0;
  double value = 0.0;
  std::size_t evaluations = 0;
};

/// Golden-section search for the maximum of a unimodal f on [a, b], stopped
/// when the bracket is narrower than abs_tol.
template <class F>
GoldenResult golden_section_maximize(F&& f, double a, double b, double abs_tol) {
  constexpr double kInvPhi = 0.6180339887498948482;
  GoldenResult r;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  r.evaluations = 2;
  while (std::abs(b - a) > abs_tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
    ++r.evaluations;
  }
  if (f1 >= f2) {
    r.x = x1;
    r.value = f1;
  } else {
    r.x = x2;
    r.value = f2;
  }
  return r;
}

/// Coarse scan of `coarse_points` samples to bracket the global maximum,
/// then golden-section refinement inside the bracket. Throws DomainError if
/// the best sample sits on either bound (no interior maximum).
template <class F>
GoldenResult maximize_bracketed(F&& f, double lo, double hi, double abs_tol,
                                int coarse_points = 41) {
  if (!(hi > lo)) throw DomainError("optimization bounds must satisfy lo < hi");
  if (coarse_points < 3) coarse_points = 3;
  const double step = (hi - lo) / (coarse_points - 1);
  int best = 0;
  double best_value = f(lo);
  for (int i = 1; i < coarse_points; ++i) {
    const double v = f(lo + i * step);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  if (best == 0 || best == coarse_points - 1)
    throw DomainError("no interior maximum in [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  auto r = golden_section_maximize(f, lo + (best - 1) * step, lo + (best + 1) * step, abs_tol);
  r.evaluations += static_cast<std::size_t>(coarse_points);
  return r;
}

}  // namespace cars
