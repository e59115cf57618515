#pragma once

#include "flrw/characteristics.hpp"

namespace flrw {

// Spherically symmetric reduction: the radial velocity obeys the
// one-dimensional transport along r while the density keeps the full
// n-dimensional expansion damping. Labels are initial radii.
class RadialFlow {
 public:
  // data must be one-dimensional (signed radial profile); ambient_n is the
  // spatial dimension entering the damping term.
  RadialFlow(ScaleFactor scale, InitialData data, int ambient_n);

  const CharacteristicFlow& flow() const { return flow_; }
  int ambient_dim() const { return ambient_n_; }

  struct State {
    double r = 0.0;
    double vr = 0.0;  // radial velocity
    double t = 0.0;
    double alpha = 0.0;
  };
  State radial_flow(double t, double alpha) const;

  struct Derivs {
    double dr_dalpha = 1.0;
    double d2r_dalpha2 = 0.0;
    double dv_dalpha = 0.0;
    double d2v_dalpha2 = 0.0;
    double v_r = 0.0;   // (dv/dalpha) / (dr/dalpha)
    double v_rr = 0.0;  // second radial derivative of the velocity
  };
  Derivs radial_derivs(double t, double alpha) const;

  double density(double t, double alpha) const;
  double density_gradient(double t, double alpha) const;  // d rho / d r

  // First zero of dr/dalpha along the label (infinity if v0'(alpha) >= 0).
  double blowup_time(double alpha) const;

  struct FitOptions {
    double window_lo = 1e-6;  // offsets t2 - t sampled ...
    double window_hi = 1e-2;  // ... between these bounds
    int pts_per_decade = 40;
    double min_r2 = 0.99;
  };
  struct RateFit {
    double t2 = 0.0;
    double gradient_exponent = 0.0;  // slope of log|v_r| vs log(t2 - t)
    double density_exponent = 0.0;   // slope of log rho  vs log(t2 - t)
    double r2_gradient = 0.0;
    double r2_density = 0.0;
    double vr_limit = 0.0;           // lim (t2 - t) v_r
  };
  // Locates t2 by determinant bracketing and fits the divergence rates on a
  // geometric window below it. Throws DiagnosticsError (with raw samples)
  // when either fit quality falls under min_r2.
  RateFit blowup_rate_fit(double alpha, const FitOptions& opt) const;
  RateFit blowup_rate_fit(double alpha) const { return blowup_rate_fit(alpha, FitOptions()); }

  // Per-label density context mirroring DensityPoint for repeated queries.
  // Pinned in place: the time integrand refers back to the owning object.
  class Point {
   public:
    Point(const RadialFlow& rf, double alpha);
    Point(const Point&) = delete;
    Point& operator=(const Point&) = delete;
    double rho(double t);
    double drho_dr(double t);
    Derivs derivs(double t);
    CharacteristicFlow::Point& characteristic() { return p_; }

   private:
    const RadialFlow* rf_;
    double alpha_;
    double rho0_, drho0_;
    CharacteristicFlow::Point p_;
    CumulativeIntegralVec time_integrals_;  // [Phi_r, G_r]
  };
  Point at(double alpha) const { return Point(*this, alpha); }

 private:
  CharacteristicFlow flow_;
  int ambient_n_;
  bool origin_regular_;
};

}  // namespace flrw
