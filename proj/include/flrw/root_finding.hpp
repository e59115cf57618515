#pragma once

#include "flrw/types.hpp"

#include <cmath>

namespace flrw {

// Bracketing bisection. Requires f(lo) and f(hi) with opposite signs (zero
// endpoint values count as roots). Converges to |hi-lo| <= xtol_abs + xtol_rel*|x|.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double xtol_abs = 0.0, double xtol_rel = 1e-12, int max_iter = 200) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  double fhi = f(hi);
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0))
    throw std::invalid_argument("bisect: no sign change over bracket");
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= xtol_abs + xtol_rel * std::abs(mid)) return mid;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Golden-section minimizer on [lo, hi] for a unimodal objective.
inline double golden_minimize(const std::function<double(double)>& f, double lo, double hi,
                              double xtol = 1e-10, int max_iter = 200) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace flrw
