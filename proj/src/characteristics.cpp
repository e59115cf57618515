#include "flrw/characteristics.hpp"

#include "flrw/linalg.hpp"

#include <cmath>

namespace flrw {

CharacteristicFlow::CharacteristicFlow(ScaleFactor scale, InitialData data)
    : scale_(std::move(scale)), data_(std::move(data)) {}

CharacteristicFlow::Point::Point(const CharacteristicFlow& flow, Vec alpha)
    : flow_(&flow), alpha_(std::move(alpha)), tr_(flow.data().transforms(alpha_)) {
  const ScaleFactor* sf = &flow_->scale();
  const double q = tr_.q;
  i0_ = CumulativeIntegral(
      [sf, q](double s) {
        const double ia2 = sf->inv_power(s, 2);
        return ia2 / std::sqrt(1.0 + q * ia2);
      },
      0.0);
  f2_ = CumulativeIntegral(
      [sf, q](double s) {
        const double ia2 = sf->inv_power(s, 2);
        const double r = 1.0 + q * ia2;
        return ia2 / (r * std::sqrt(r));
      },
      0.0);
  f4_ = CumulativeIntegral(
      [sf, q](double s) {
        const double ia2 = sf->inv_power(s, 2);
        const double r = 1.0 + q * ia2;
        return ia2 * ia2 / (r * std::sqrt(r));
      },
      0.0);
  f6_ = CumulativeIntegral(
      [sf, q](double s) {
        const double ia2 = sf->inv_power(s, 2);
        const double r = 1.0 + q * ia2;
        return ia2 * ia2 * ia2 / (r * r * std::sqrt(r));
      },
      0.0);
}

void CharacteristicFlow::Point::need_second_order() {
  if (!tr_.second_order) tr_ = flow_->data().transforms(alpha_, true);
}

double CharacteristicFlow::Point::speed_squared(double t) {
  const double c = flow_->data().light_speed();
  const double ia2 = flow_->scale().inv_power(t, 2);
  const double qa = tr_.q * ia2;
  return c * c * qa / (1.0 + qa);
}

Vec CharacteristicFlow::Point::velocity(double t) {
  const double c = flow_->data().light_speed();
  const double ia = flow_->scale().inv_power(t, 1);
  return (c * ia / std::sqrt(1.0 + tr_.q * ia * ia)) * tr_.g0;
}

Vec CharacteristicFlow::Point::position(double t) {
  const double c = flow_->data().light_speed();
  return alpha_ + c * i0_(t) * tr_.g0;
}

JacobianEval CharacteristicFlow::Point::jacobian(double t) {
  const double c = flow_->data().light_speed();
  const int n = flow_->dim();
  // d h / d alpha = c F2 dg0 + c F4 (q dg0 - g0 (dq/2)^T)
  Mat J = Mat::Identity(n, n) + c * f2_(t) * tr_.dg0 +
          c * f4_(t) * (tr_.q * tr_.dg0 - 0.5 * (tr_.g0 * tr_.dq.transpose()));
  JacobianEval out;
  out.det = det_small(J);
  out.matrix = std::move(J);
  out.t = t;
  out.alpha = alpha_;
  return out;
}

Mat CharacteristicFlow::Point::dv_dalpha(double t) {
  const double c = flow_->data().light_speed();
  const double ia = flow_->scale().inv_power(t, 1);
  const double ia2 = ia * ia;
  const double r = 1.0 + tr_.q * ia2;
  const double r32 = r * std::sqrt(r);
  return (c * ia / r32) * tr_.dg0 +
         (c * ia * ia2 / r32) * (tr_.q * tr_.dg0 - 0.5 * (tr_.g0 * tr_.dq.transpose()));
}

Tensor3 CharacteristicFlow::Point::d2v_dalpha2(double t) {
  need_second_order();
  const double c = flow_->data().light_speed();
  const int n = flow_->dim();
  const double ia = flow_->scale().inv_power(t, 1);
  const double ia2 = ia * ia;
  const double r = 1.0 + tr_.q * ia2;
  const double r12 = std::sqrt(r);
  const double r32 = r * r12;
  const double r52 = r32 * r;
  Tensor3 out(n);
  const Mat dq_outer = 0.25 * (tr_.dq * tr_.dq.transpose());
  for (int i = 0; i < n; ++i) {
    Mat bracket = 0.5 * (tr_.dg0.row(i).transpose() * tr_.dq.transpose() +
                         tr_.dq * tr_.dg0.row(i)) +
                  0.5 * tr_.g0[i] * tr_.d2q;
    out[i] = (c * ia / r12) * tr_.d2g0[i] - (c * ia * ia2 / r32) * bracket +
             (3.0 * c * ia * ia2 * ia2 / r52) * tr_.g0[i] * dq_outer;
  }
  return out;
}

Mat CharacteristicFlow::Point::velocity_gradient(double t) {
  JacobianEval J = jacobian(t);
  if (J.det <= 0.0)
    throw BlownUpError("velocity gradient: flow map degenerate", t, alpha_, J.det);
  double det = 0.0;
  Mat Jinv = cofactor_inverse(J.matrix, det);
  return dv_dalpha(t) * Jinv;
}

Tensor3 CharacteristicFlow::Point::position_hessian(double t) {
  need_second_order();
  const double c = flow_->data().light_speed();
  const int n = flow_->dim();
  const double I0t = i0_(t), F4t = f4_(t), F6t = f6_(t);
  Tensor3 out(n);
  const Mat dq_outer = 0.25 * (tr_.dq * tr_.dq.transpose());
  for (int i = 0; i < n; ++i) {
    Mat bracket = 0.5 * (tr_.dg0.row(i).transpose() * tr_.dq.transpose() +
                         tr_.dq * tr_.dg0.row(i)) +
                  0.5 * tr_.g0[i] * tr_.d2q;
    out[i] = c * I0t * tr_.d2g0[i] - c * F4t * bracket +
             3.0 * c * F6t * tr_.g0[i] * dq_outer;
  }
  return out;
}

Tensor3 CharacteristicFlow::Point::inverse_hessian(double t) {
  JacobianEval J = jacobian(t);
  if (J.det <= 0.0)
    throw BlownUpError("inverse hessian: flow map degenerate", t, alpha_, J.det);
  double det = 0.0;
  Mat Binv = cofactor_inverse(J.matrix, det);
  Tensor3 T = position_hessian(t);
  const int n = flow_->dim();
  // d2 alpha^l / dx^j dx^k = - Binv(l,m) T[m](p,s) Binv(p,j) Binv(s,k)
  Tensor3 out(n, Mat::Zero(n, n));
  for (int l = 0; l < n; ++l) {
    Mat inner = Mat::Zero(n, n);
    for (int m = 0; m < n; ++m) inner += Binv(l, m) * T[m];
    out[l] = -(Binv.transpose() * inner * Binv);
  }
  return out;
}

double CharacteristicFlow::speed_squared(double t, const Vec& alpha) const {
  return Point(*this, alpha).speed_squared(t);
}
Vec CharacteristicFlow::velocity(double t, const Vec& alpha) const {
  return Point(*this, alpha).velocity(t);
}
Vec CharacteristicFlow::position(double t, const Vec& alpha) const {
  return Point(*this, alpha).position(t);
}
JacobianEval CharacteristicFlow::jacobian(double t, const Vec& alpha) const {
  return Point(*this, alpha).jacobian(t);
}
Mat CharacteristicFlow::velocity_gradient(double t, const Vec& alpha) const {
  return Point(*this, alpha).velocity_gradient(t);
}
Tensor3 CharacteristicFlow::position_hessian(double t, const Vec& alpha) const {
  return Point(*this, alpha).position_hessian(t);
}
Tensor3 CharacteristicFlow::inverse_hessian(double t, const Vec& alpha) const {
  return Point(*this, alpha).inverse_hessian(t);
}

Vec CharacteristicFlow::invert_position(double t, const Vec& x, std::optional<Vec> seed,
                                        double tol, int max_iter) const {
  Vec a = seed.value_or(x);
  const double target = tol * (1.0 + x.norm());
  Point p(*this, a);
  Vec r = p.position(t) - x;
  double rn = r.norm();
  for (int it = 0; it < max_iter; ++it) {
    if (rn <= target) return a;
    JacobianEval J = p.jacobian(t);
    if (J.det <= 0.0)
      throw InversionError("invert_position: flow map not invertible at the iterate");
    double det = 0.0;
    Vec step = cofactor_inverse(J.matrix, det) * r;
    // damped update: halve until the residual decreases
    double lambda = 1.0;
    for (int k = 0; k < 40; ++k) {
      Vec cand = a - lambda * step;
      Point pc(*this, cand);
      Vec rc = pc.position(t) - x;
      if (rc.norm() < rn || lambda < 1e-12) {
        a = std::move(cand);
        p = std::move(pc);
        r = std::move(rc);
        rn = r.norm();
        break;
      }
      lambda *= 0.5;
    }
  }
  if (rn <= target) return a;
  throw InversionError("invert_position: no convergence (near blowup or bad seed)");
}

}  // namespace flrw
