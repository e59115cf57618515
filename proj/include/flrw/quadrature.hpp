#pragma once

#include "flrw/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace flrw {

// Adaptive Gauss-Kronrod (7,15) panel subdivision. Panels with the largest
// error estimate are split first until the global estimate meets
// max(abs_floor, rel_tol * |value|) or the panel budget runs out.

namespace gk {
// 15-point Kronrod abscissae on [0,1] side (symmetric), odd indices are the
// embedded 7-point Gauss nodes.
inline constexpr double nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};
}  // namespace gk

namespace detail {
inline double qnorm(double v) { return std::abs(v); }
inline double qnorm(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }
inline void qzero(double& v, const double&) { v = 0.0; }
inline void qzero(Vec& v, const Vec& like) { v = Vec::Zero(like.size()); }
}  // namespace detail

template <typename T>
struct QuadResult {
  T value;
  double abs_error;
  int panels;
};

// One (7,15) pair on [lo, hi]; err is the classic scaled |K15 - G7| estimate.
template <typename T, typename F>
QuadResult<T> gk15_panel(const F& f, double lo, double hi) {
  const double h = 0.5 * (hi - lo);
  const double mid = 0.5 * (lo + hi);
  T fc = f(mid);
  T k15 = fc * gk::wk[7];
  T g7 = fc * gk::wg[3];
  for (int i = 0; i < 7; ++i) {
    T fl = f(mid - h * gk::nodes[i]);
    T fr = f(mid + h * gk::nodes[i]);
    T pair = fl + fr;
    k15 += pair * gk::wk[i];
    if (i % 2 == 1) g7 += pair * gk::wg[i / 2];
  }
  T diff = k15 - g7;
  double err = detail::qnorm(diff) * std::abs(h);
  // QUADPACK-style sharpening for smooth integrands.
  const double scaled = std::pow(200.0 * err, 1.5);
  if (scaled < err) err = scaled;
  QuadResult<T> out{k15 * h, err, 1};
  return out;
}

template <typename T, typename F>
QuadResult<T> integrate_adaptive(const F& f, double lo, double hi, double rel_tol = 1e-10,
                                 double abs_floor = 1e-14, int max_panels = 10000) {
  QuadResult<T> out{};
  if (lo == hi) {
    T probe = f(lo);
    detail::qzero(out.value, probe);
    out.abs_error = 0.0;
    out.panels = 0;
    return out;
  }
  if (lo > hi) throw std::invalid_argument("integrate_adaptive: lo > hi");

  struct Panel {
    double lo, hi, err;
    T value;
  };
  std::vector<Panel> panels;
  auto first = gk15_panel<T>(f, lo, hi);
  panels.push_back(Panel{lo, hi, first.abs_error, first.value});
  T total = first.value;
  double total_err = first.abs_error;

  while (true) {
    const double tol = std::max(abs_floor, rel_tol * detail::qnorm(total));
    if (total_err <= tol) break;
    if (static_cast<int>(panels.size()) >= max_panels)
      throw NumericalError("quadrature: panel budget exhausted", total_err);
    std::size_t worst = 0;
    for (std::size_t i = 1; i < panels.size(); ++i)
      if (panels[i].err > panels[worst].err) worst = i;
    Panel p = panels[worst];
    const double mid = 0.5 * (p.lo + p.hi);
    if (mid <= p.lo || mid >= p.hi)
      throw NumericalError("quadrature: interval underflow", total_err);
    auto left = gk15_panel<T>(f, p.lo, mid);
    auto right = gk15_panel<T>(f, mid, p.hi);
    total += left.value + right.value - p.value;
    total_err += left.abs_error + right.abs_error - p.err;
    panels[worst] = Panel{p.lo, mid, left.abs_error, left.value};
    panels.push_back(Panel{mid, p.hi, right.abs_error, right.value});
  }
  out.value = total;
  out.abs_error = total_err;
  out.panels = static_cast<int>(panels.size());
  return out;
}

inline double integrate(const std::function<double(double)>& f, double lo, double hi,
                        double rel_tol = 1e-10, double abs_floor = 1e-14,
                        int max_panels = 10000) {
  return integrate_adaptive<double>(f, lo, hi, rel_tol, abs_floor, max_panels).value;
}

// Cached running integral from 0. Queries at new upper limits only pay for
// the gap to the nearest cached point, so monotone sweeps in t are cheap and
// out-of-order queries stay exact.
template <typename T>
class CumulativeIntegralT {
 public:
  CumulativeIntegralT() = default;
  CumulativeIntegralT(std::function<T(double)> f, T zero, double rel_tol = 1e-10)
      : f_(std::move(f)), rel_tol_(rel_tol) {
    cache_.emplace(0.0, std::move(zero));
  }

  T operator()(double t) {
    if (t < 0.0) throw std::invalid_argument("cumulative integral: negative upper limit");
    auto it = cache_.upper_bound(t);
    --it;  // cache always holds t=0
    if (it->first == t) return it->second;
    T value = it->second +
              integrate_adaptive<T>(f_, it->first, t, rel_tol_).value;
    cache_.emplace_hint(std::next(it), t, value);
    return value;
  }

 private:
  std::function<T(double)> f_;
  double rel_tol_ = 1e-10;
  std::map<double, T> cache_;
};

using CumulativeIntegral = CumulativeIntegralT<double>;
using CumulativeIntegralVec = CumulativeIntegralT<Vec>;

}  // namespace flrw
