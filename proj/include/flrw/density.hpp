#pragma once

#include "flrw/characteristics.hpp"

namespace flrw {

struct DensityEval {
  double rho = 0.0;
  Vec grad_rho;
  double t = 0.0;
  Vec alpha;
};

// Density transported along a characteristic:
//   rho(t, alpha) = eps rho0(alpha) exp(-int_0^t [ (da/a)(n - |v|^2/c^2)
//                                                  + (1/a) div_x v ] ds)
// and its exact spatial gradient. The time quadrature (relative tolerance
// 1e-8) runs over one cumulative vector integrand so that repeated queries at
// growing t reuse all work; the divergence reuses the characteristic caches.
//
// Where rho0(alpha) = 0 the gradient keeps the product form
// eps * drho0 * exp(-int ...), so no division by rho0 ever happens.
class DensityPoint {
 public:
  DensityPoint(const CharacteristicFlow& flow, Vec alpha, double rel_tol = 1e-8);
  DensityPoint(const DensityPoint&) = delete;
  DensityPoint& operator=(const DensityPoint&) = delete;

  double rho(double t);
  DensityEval eval(double t);  // rho and grad_rho (needs second derivatives)

  CharacteristicFlow::Point& point() { return point_; }

 private:
  Vec integrals(double t);  // [Phi, G_1..G_n] accumulated over [0, t]

  const CharacteristicFlow* flow_;
  Vec alpha_;
  double rho0_;
  Vec drho0_;
  CharacteristicFlow::Point point_;
  CumulativeIntegralVec time_integrals_;
};

// One-shot conveniences.
double density_along_char(const CharacteristicFlow& flow, double t, const Vec& alpha);
DensityEval density_eval(const CharacteristicFlow& flow, double t, const Vec& alpha);

}  // namespace flrw
