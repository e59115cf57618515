#include "flrw/initial_data.hpp"

#include <cmath>
#include <limits>

namespace flrw {

namespace profiles {

VelocityProfile zero(int n) {
  VelocityProfile p;
  p.name = "zero";
  p.value = [n](const Vec&) { return Vec::Zero(n).eval(); };
  p.jacobian = [n](const Vec&) { return Mat::Zero(n, n).eval(); };
  p.hessian = [n](const Vec&) { return zero_tensor3(n); };
  return p;
}

VelocityProfile linear(int n, double slope) {
  VelocityProfile p;
  p.name = "linear";
  p.bounded = (slope == 0.0);
  p.value = [slope](const Vec& a) { return (slope * a).eval(); };
  p.jacobian = [n, slope](const Vec&) { return (slope * Mat::Identity(n, n)).eval(); };
  p.hessian = [n](const Vec&) { return zero_tensor3(n); };
  return p;
}

VelocityProfile arctan(int n, double delta, double amplitude, double width) {
  VelocityProfile p;
  p.name = "arctan";
  p.bounded = (delta == 0.0);
  p.value = [n, delta, amplitude, width](const Vec& a) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = amplitude * (delta * a[i] + std::atan(width * a[i]));
    return v;
  };
  p.jacobian = [n, delta, amplitude, width](const Vec& a) {
    Mat j = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      const double w = width * a[i];
      j(i, i) = amplitude * (delta + width / (1.0 + w * w));
    }
    return j;
  };
  p.hessian = [n, amplitude, width](const Vec& a) {
    Tensor3 h = zero_tensor3(n);
    for (int i = 0; i < n; ++i) {
      const double w = width * a[i];
      const double d = 1.0 + w * w;
      h[i](i, i) = amplitude * (-2.0 * width * width * w / (d * d));
    }
    return h;
  };
  return p;
}

VelocityProfile gaussian(int n, double amplitude) {
  VelocityProfile p;
  p.name = "gaussian";
  p.value = [n, amplitude](const Vec& a) {
    const double g = amplitude * std::exp(-0.5 * a.squaredNorm());
    return (g * Vec::Ones(n)).eval();
  };
  p.jacobian = [n, amplitude](const Vec& a) {
    const double g = amplitude * std::exp(-0.5 * a.squaredNorm());
    Mat j(n, n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) j(i, k) = -a[k] * g;
    return j;
  };
  p.hessian = [n, amplitude](const Vec& a) {
    const double g = amplitude * std::exp(-0.5 * a.squaredNorm());
    Tensor3 h = zero_tensor3(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          h[i](j, k) = (a[j] * a[k] - (j == k ? 1.0 : 0.0)) * g;
    return h;
  };
  return p;
}

VelocityProfile sine(int n, double amplitude) {
  VelocityProfile p;
  p.name = "sine";
  p.value = [n, amplitude](const Vec& a) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = amplitude * std::sin(a[i]);
    return v;
  };
  p.jacobian = [n, amplitude](const Vec& a) {
    Mat j = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) j(i, i) = amplitude * std::cos(a[i]);
    return j;
  };
  p.hessian = [n, amplitude](const Vec& a) {
    Tensor3 h = zero_tensor3(n);
    for (int i = 0; i < n; ++i) h[i](i, i) = -amplitude * std::sin(a[i]);
    return h;
  };
  return p;
}

DensityProfile constant_density(int n, double value) {
  DensityProfile p;
  p.name = "constant";
  p.value = [value](const Vec&) { return value; };
  p.gradient = [n](const Vec&) { return Vec::Zero(n).eval(); };
  return p;
}

DensityProfile gaussian_density(int n, double floor) {
  DensityProfile p;
  p.name = "gaussian";
  p.value = [floor](const Vec& a) { return floor + std::exp(-0.5 * a.squaredNorm()); };
  p.gradient = [n](const Vec& a) {
    const double g = std::exp(-0.5 * a.squaredNorm());
    return (-g * a).eval();
  };
  return p;
}

}  // namespace profiles

InitialData::InitialData(int n, double c, double eps, VelocityProfile v0, DensityProfile rho0,
                         std::optional<double> declared_N0, std::optional<double> declared_Q0,
                         double sample_box, std::optional<double> eps_max_override)
    : n_(n), c_(c), eps_(eps), v0_(std::move(v0)), rho0_(std::move(rho0)) {
  if (n_ < 1 || n_ > 3) throw ConfigError("initial data: dimension must be 1, 2 or 3");
  if (!(c_ > 0.0)) throw ConfigError("initial data: light speed must be positive");
  if (!(eps_ > 0.0)) throw ConfigError("initial data: amplitude must be positive");
  if (!v0_.value || !v0_.jacobian || !v0_.hessian)
    throw ConfigError("initial data: velocity profile needs value/jacobian/hessian");
  if (!rho0_.value || !rho0_.gradient)
    throw ConfigError("initial data: density profile needs value/gradient");

  if (declared_N0) {
    norms_.N0 = *declared_N0;
    norms_.estimated = false;
  } else if (v0_.bounded) {
    estimate_norms(sample_box);
  } else {
    norms_.N0 = std::numeric_limits<double>::infinity();
    norms_.estimated = true;
  }
  norms_.M0 = n_ * std::sqrt(double(n_)) * norms_.N0;
  if (declared_Q0) {
    norms_.Q0 = *declared_Q0;
  } else if (std::isfinite(norms_.N0)) {
    // quick lattice bound for |rho0| + |grad rho0|
    double r0 = 0.0;
    const int pts = 17;
    Vec a(n_);
    std::vector<int> idx(n_, 0);
    for (;;) {
      for (int d = 0; d < n_; ++d)
        a[d] = -sample_box + 2.0 * sample_box * idx[d] / (pts - 1);
      r0 = std::max(r0, std::abs(rho0_.value(a)) + rho0_.gradient(a).cwiseAbs().maxCoeff());
      int d = 0;
      while (d < n_ && ++idx[d] == pts) idx[d++] = 0;
      if (d == n_) break;
    }
    norms_.Q0 = r0 + norms_.N0;
  } else {
    norms_.Q0 = std::numeric_limits<double>::infinity();
  }

  if (std::isfinite(norms_.M0) && norms_.M0 > 0.0) {
    // hard subluminal invariant eps M0 < c; the default working cap is
    // stricter to keep all boost denominators away from zero
    eps_max_ = std::min(eps_max_override.value_or(0.9 * c_ / norms_.M0), c_ / norms_.M0);
    if (!(eps_ * norms_.M0 < c_))
      throw ConfigError("initial data: eps M0 must stay below the light speed");
    if (!(eps_ < eps_max_))
      throw ConfigError("initial data: amplitude too large, eps must stay below " +
                        std::to_string(eps_max_));
  } else {
    eps_max_ = eps_max_override.value_or(std::numeric_limits<double>::infinity());
  }
}

void InitialData::estimate_norms(double box) {
  const int pts = 21;
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  Vec a(n_);
  std::vector<int> idx(n_, 0);
  for (;;) {
    for (int d = 0; d < n_; ++d) a[d] = -box + 2.0 * box * idx[d] / (pts - 1);
    c0 = std::max(c0, v0_.value(a).cwiseAbs().maxCoeff());
    c1 = std::max(c1, v0_.jacobian(a).cwiseAbs().maxCoeff());
    for (const Mat& h : v0_.hessian(a)) c2 = std::max(c2, h.cwiseAbs().maxCoeff());
    int d = 0;
    while (d < n_ && ++idx[d] == pts) idx[d++] = 0;
    if (d == n_) break;
  }
  norms_.N0 = c0 + c1 + c2;
  norms_.estimated = true;
}

double InitialData::rho0(const Vec& alpha) const {
  const double r = rho0_.value(alpha);
  if (r < 0.0) throw ConfigError("initial data: rho0 must be nonnegative");
  return r;
}

InitialData::Transforms InitialData::transforms(const Vec& alpha, bool second_order) const {
  Transforms tr;
  tr.v = v0_.value(alpha);
  tr.dv = v0_.jacobian(alpha);
  tr.w2 = tr.v.squaredNorm();
  tr.P = c_ * c_ - eps_ * eps_ * tr.w2;
  if (!(tr.P > 0.0))
    throw SuperluminalError("initial data: eps |v0(alpha)| >= c at the requested label");
  const double sqrtP = std::sqrt(tr.P);
  const double P32 = tr.P * sqrtP;

  tr.g0 = (eps_ / sqrtP) * tr.v;
  // s_j = sum_k v0^k dv0^k_j ; smooth everywhere, s = w * grad|v0|
  const Vec s = tr.dv.transpose() * tr.v;
  tr.dg0 = (eps_ / sqrtP) * tr.dv +
           (eps_ * eps_ * eps_ / P32) * (tr.v * s.transpose());
  tr.q = eps_ * eps_ * tr.w2 / tr.P;
  tr.dq = (2.0 * eps_ * eps_ * c_ * c_ / (tr.P * tr.P)) * s;

  const double w = std::sqrt(tr.w2);
  if (n_ == 1) {
    // one dimension: the speed transform is signed and coincides with g0
    tr.f0 = tr.g0[0];
    tr.df0 = tr.dg0.row(0).transpose();
  } else {
    tr.f0 = eps_ * w / sqrtP;
    // gradient of |v0| with the 0/0 -> 0 convention at zeros of v0
    Vec dw = Vec::Zero(n_);
    if (w > 0.0) dw = s / w;
    tr.df0 = (c_ * c_ * eps_ / P32) * dw;
  }

  if (second_order) {
    tr.second_order = true;
    tr.d2v = v0_.hessian(alpha);
    // S(l,m) = d_m s_l = (dv^T dv)(l,m) + sum_k v^k d2v^k(l,m)
    Mat S = tr.dv.transpose() * tr.dv;
    for (int k = 0; k < n_; ++k) S += tr.v[k] * tr.d2v[k];
    const double e2 = eps_ * eps_;
    tr.d2q = (2.0 * e2 * c_ * c_ / (tr.P * tr.P)) * S +
             (8.0 * e2 * e2 * c_ * c_ / (tr.P * tr.P * tr.P)) * (s * s.transpose());

    tr.d2g0 = zero_tensor3(n_);
    const double P52 = P32 * tr.P;
    for (int i = 0; i < n_; ++i) {
      tr.d2g0[i] = (eps_ / sqrtP) * tr.d2v[i] +
                   (e2 * eps_ / P32) *
                       (tr.dv.row(i).transpose() * s.transpose() +
                        s * tr.dv.row(i) + tr.v[i] * S) +
                   (3.0 * e2 * e2 * eps_ / P52) * tr.v[i] * (s * s.transpose());
    }

    if (n_ == 1) {
      tr.d2f0 = tr.d2g0[0];
    } else {
      tr.d2f0 = Mat::Zero(n_, n_);
      if (w > 0.0) {
        const Vec dw = s / w;
        const Mat d2w = S / w - (s * s.transpose()) / (w * tr.w2);
        tr.d2f0 = (c_ * c_ * eps_ / P32) * d2w +
                  (3.0 * c_ * c_ * e2 * eps_ / P52) * w * (dw * dw.transpose());
      }
    }
  }
  return tr;
}

double InitialData::eval_f0(const Vec& alpha) const { return transforms(alpha).f0; }

Vec InitialData::eval_g0(const Vec& alpha) const { return transforms(alpha).g0; }

Vec InitialData::deriv_f0(const Vec& alpha) const { return transforms(alpha).df0; }

Mat InitialData::deriv_f0_hessian(const Vec& alpha) const {
  return transforms(alpha, true).d2f0;
}

Mat InitialData::deriv_g0(const Vec& alpha) const { return transforms(alpha).dg0; }

Tensor3 InitialData::deriv_g0_hessian(const Vec& alpha) const {
  return transforms(alpha, true).d2g0;
}

}  // namespace flrw
