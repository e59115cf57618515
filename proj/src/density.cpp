#include "flrw/density.hpp"

#include "flrw/linalg.hpp"

#include <cmath>

namespace flrw {

DensityPoint::DensityPoint(const CharacteristicFlow& flow, Vec alpha, double rel_tol)
    : flow_(&flow),
      alpha_(std::move(alpha)),
      rho0_(flow.data().rho0(alpha_)),
      drho0_(flow.data().drho0(alpha_)),
      point_(flow, alpha_) {
  const int n = flow.dim();
  const double c2 = flow.data().light_speed() * flow.data().light_speed();
  auto integrand = [this, n, c2](double s) {
    const ScaleFactor& sf = flow_->scale();
    const double a_ratio = sf.eval_da(s) * sf.inv_power(s, 1);  // da/a, stable for large s
    JacobianEval J = point_.jacobian(s);
    if (J.det <= 0.0)
      throw BlownUpError("density: flow map degenerate inside the time integral", s, alpha_,
                         J.det);
    double det = 0.0;
    const Mat Jinv = cofactor_inverse(J.matrix, det);
    const Mat Dv = point_.dv_dalpha(s);
    const Vec v = point_.velocity(s);
    const double u = v.squaredNorm();
    const double inv_a = sf.inv_power(s, 1);

    Vec out(1 + n);
    out[0] = a_ratio * (n - u / c2) + inv_a * (Dv * Jinv).trace();

    // gradient integrand per label direction:
    //   G_l = (da/a)(2/c^2) v . dv/dalpha_l - (1/a) d_l [div_x v]
    // with d_l [tr(Dv Jinv)] = tr(d_l Dv Jinv) - tr(Dv Jinv d_l J Jinv)
    const Tensor3 D2v = point_.d2v_dalpha2(s);
    const Tensor3 T = point_.position_hessian(s);
    const Mat DvJinv = Dv * Jinv;
    for (int l = 0; l < n; ++l) {
      Mat dDv(n, n), dJ(n, n);
      for (int i = 0; i < n; ++i)
        for (int m = 0; m < n; ++m) {
          dDv(i, m) = D2v[i](m, l);
          dJ(i, m) = T[i](m, l);
        }
      const double div_deriv = (dDv * Jinv).trace() - (DvJinv * dJ * Jinv).trace();
      out[1 + l] = a_ratio * (2.0 / c2) * v.dot(Dv.col(l)) - inv_a * div_deriv;
    }
    return out;
  };
  time_integrals_ = CumulativeIntegralVec(integrand, Vec::Zero(1 + n), rel_tol);
}

Vec DensityPoint::integrals(double t) { return time_integrals_(t); }

double DensityPoint::rho(double t) {
  const double eps = flow_->data().epsilon();
  return eps * rho0_ * std::exp(-integrals(t)[0]);
}

DensityEval DensityPoint::eval(double t) {
  const int n = flow_->dim();
  const double eps = flow_->data().epsilon();
  const Vec I = integrals(t);
  const double envelope = std::exp(-I[0]);

  DensityEval out;
  out.t = t;
  out.alpha = alpha_;
  out.rho = eps * rho0_ * envelope;

  JacobianEval J = point_.jacobian(t);
  if (J.det <= 0.0)
    throw BlownUpError("density gradient: flow map degenerate", t, alpha_, J.det);
  double det = 0.0;
  const Mat Jinv = cofactor_inverse(J.matrix, det);

  out.grad_rho = Vec::Zero(n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      out.grad_rho[j] += Jinv(l, j) * (eps * drho0_[l] * envelope + out.rho * I[1 + l]);
  return out;
}

double density_along_char(const CharacteristicFlow& flow, double t, const Vec& alpha) {
  return DensityPoint(flow, alpha).rho(t);
}

DensityEval density_eval(const CharacteristicFlow& flow, double t, const Vec& alpha) {
  return DensityPoint(flow, alpha).eval(t);
}

}  // namespace flrw
