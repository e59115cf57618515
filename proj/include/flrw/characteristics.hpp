#pragma once

#include "flrw/initial_data.hpp"
#include "flrw/quadrature.hpp"
#include "flrw/scale_factor.hpp"
#include "flrw/types.hpp"

#include <optional>

namespace flrw {

struct JacobianEval {
  Mat matrix;   // d x / d alpha
  double det;
  double t;
  Vec alpha;
};

// Exact characteristic flow of the damped velocity transport on an expanding
// background: speed, velocity, flow map, Jacobian, inverse map and second
// derivatives, each a closed form in the boosted data and the slow time
// integrals
//   I0 = int a^-2 (1 + q a^-2)^{-1/2},   F2 = int a^-2 (1 + q a^-2)^{-3/2},
//   F4 = int a^-4 (1 + q a^-2)^{-3/2},   F6 = int a^-6 (1 + q a^-2)^{-5/2},
// with q = f0(alpha)^2.
class CharacteristicFlow {
 public:
  CharacteristicFlow(ScaleFactor scale, InitialData data);

  const ScaleFactor& scale() const { return scale_; }
  const InitialData& data() const { return data_; }
  int dim() const { return data_.dim(); }

  // Per-label evaluation context. Owns cumulative caches for the four time
  // integrals, so sweeping t for a fixed label only pays for the increments.
  // Not thread-safe; give each worker its own Point.
  class Point {
   public:
    Point(const CharacteristicFlow& flow, Vec alpha);

    const Vec& alpha() const { return alpha_; }
    const InitialData::Transforms& boost() const { return tr_; }

    double speed_squared(double t);
    Vec velocity(double t);
    Vec position(double t);
    JacobianEval jacobian(double t);
    Mat dv_dalpha(double t);           // d v^i / d alpha^l
    Tensor3 d2v_dalpha2(double t);
    Mat velocity_gradient(double t);   // d v^i / d x^j (throws BlownUpError if det <= 0)
    Tensor3 position_hessian(double t);
    Tensor3 inverse_hessian(double t); // d^2 alpha^l / d x^j d x^k

    double I0(double t) { return i0_(t); }
    double F2(double t) { return f2_(t); }
    double F4(double t) { return f4_(t); }
    double F6(double t) { return f6_(t); }

   private:
    void need_second_order();

    const CharacteristicFlow* flow_;
    Vec alpha_;
    InitialData::Transforms tr_;
    CumulativeIntegral i0_, f2_, f4_, f6_;
  };

  Point at(Vec alpha) const { return Point(*this, std::move(alpha)); }

  // One-shot conveniences; hot loops should hold a Point.
  double speed_squared(double t, const Vec& alpha) const;
  Vec velocity(double t, const Vec& alpha) const;
  Vec position(double t, const Vec& alpha) const;
  JacobianEval jacobian(double t, const Vec& alpha) const;
  Mat velocity_gradient(double t, const Vec& alpha) const;
  Tensor3 position_hessian(double t, const Vec& alpha) const;
  Tensor3 inverse_hessian(double t, const Vec& alpha) const;

  // Newton inversion of the flow map, seeded at x (or the given seed for
  // continuation along trajectories). Converges to
  // |position(t, alpha) - x| <= tol * (1 + |x|).
  Vec invert_position(double t, const Vec& x,
                      std::optional<Vec> seed = std::nullopt,
                      double tol = 1e-9, int max_iter = 100) const;

 private:
  ScaleFactor scale_;
  InitialData data_;
};

}  // namespace flrw
