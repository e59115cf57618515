#include "flrw/spherical.hpp"

#include "flrw/blowup.hpp"
#include "flrw/root_finding.hpp"

#include <cmath>

namespace flrw {

namespace {
Vec scalar_vec(double x) {
  Vec v(1);
  v[0] = x;
  return v;
}
}  // namespace

RadialFlow::RadialFlow(ScaleFactor scale, InitialData data, int ambient_n)
    : flow_(std::move(scale), std::move(data)), ambient_n_(ambient_n) {
  if (flow_.dim() != 1)
    throw ConfigError("radial flow: needs a one-dimensional (radial) profile");
  if (ambient_n_ < 1 || ambient_n_ > 3)
    throw ConfigError("radial flow: ambient dimension must be 1, 2 or 3");
  // the Cartesian field v^i = v(r) x^i / r is smooth at the origin only when
  // the radial profile vanishes there
  origin_regular_ = std::abs(flow_.data().v0(scalar_vec(0.0))[0]) <= 1e-12;
}

RadialFlow::State RadialFlow::radial_flow(double t, double alpha) const {
  if (alpha < 0.0) throw ConfigError("radial flow: labels are radii, alpha >= 0");
  if (alpha == 0.0 && !origin_regular_)
    throw ConfigError("radial flow: profile does not vanish at the origin");
  auto p = flow_.at(scalar_vec(alpha));
  State s;
  s.t = t;
  s.alpha = alpha;
  s.r = p.position(t)[0];
  s.vr = p.velocity(t)[0];
  return s;
}

RadialFlow::Derivs RadialFlow::radial_derivs(double t, double alpha) const {
  return at(alpha).derivs(t);
}

RadialFlow::Point::Point(const RadialFlow& rf, double alpha)
    : rf_(&rf),
      alpha_(alpha),
      rho0_(rf.flow().data().rho0(scalar_vec(alpha))),
      drho0_(rf.flow().data().drho0(scalar_vec(alpha))[0]),
      p_(rf.flow(), scalar_vec(alpha)) {
  const int n = rf.ambient_dim();
  const double c2 = rf.flow().data().light_speed() * rf.flow().data().light_speed();
  auto integrand = [this, n, c2](double s) {
    const ScaleFactor& sf = rf_->flow().scale();
    const double a_ratio = sf.eval_da(s) * sf.inv_power(s, 1);
    const double inv_a = sf.inv_power(s, 1);
    Derivs d = derivs(s);
    const double v = p_.velocity(s)[0];
    Vec out(2);
    out[0] = a_ratio * (n - v * v / c2) + inv_a * d.v_r;
    // d/dalpha of the divergence term: v_rr * dr/dalpha
    out[1] = a_ratio * (2.0 * v / c2) * d.dv_dalpha - inv_a * d.v_rr * d.dr_dalpha;
    return out;
  };
  time_integrals_ = CumulativeIntegralVec(integrand, Vec::Zero(2), 1e-8);
}

RadialFlow::Derivs RadialFlow::Point::derivs(double t) {
  Derivs d;
  d.dr_dalpha = p_.jacobian(t).det;  // 1x1
  d.d2r_dalpha2 = p_.position_hessian(t)[0](0, 0);
  d.dv_dalpha = p_.dv_dalpha(t)(0, 0);
  d.d2v_dalpha2 = p_.d2v_dalpha2(t)[0](0, 0);
  if (d.dr_dalpha <= 0.0)
    throw BlownUpError("radial derivatives: dr/dalpha <= 0", t, scalar_vec(alpha_),
                       d.dr_dalpha);
  d.v_r = d.dv_dalpha / d.dr_dalpha;
  d.v_rr = (d.d2v_dalpha2 * d.dr_dalpha - d.dv_dalpha * d.d2r_dalpha2) /
           (d.dr_dalpha * d.dr_dalpha * d.dr_dalpha);
  return d;
}

double RadialFlow::Point::rho(double t) {
  const double eps = rf_->flow().data().epsilon();
  return eps * rho0_ * std::exp(-time_integrals_(t)[0]);
}

double RadialFlow::Point::drho_dr(double t) {
  const double eps = rf_->flow().data().epsilon();
  const Vec I = time_integrals_(t);
  const double envelope = std::exp(-I[0]);
  const double dr = p_.jacobian(t).det;
  if (dr <= 0.0)
    throw BlownUpError("radial density gradient: dr/dalpha <= 0", t, scalar_vec(alpha_), dr);
  return (eps * drho0_ * envelope + eps * rho0_ * envelope * I[1]) / dr;
}

double RadialFlow::density(double t, double alpha) const { return at(alpha).rho(t); }

double RadialFlow::density_gradient(double t, double alpha) const {
  return at(alpha).drho_dr(t);
}

double RadialFlow::blowup_time(double alpha) const {
  return scalar_blowup_time_1d(flow_, alpha);
}

RadialFlow::RateFit RadialFlow::blowup_rate_fit(double alpha, const FitOptions& opt) const {
  Vec a = scalar_vec(alpha);
  const double v0p = flow_.data().dv0(a)(0, 0);
  if (v0p >= 0.0)
    throw ConfigError("blowup_rate_fit: needs a label with negative initial slope");
  RateFit fit;
  fit.t2 = blowup_time(alpha);
  if (!std::isfinite(fit.t2))
    throw ConfigError("blowup_rate_fit: no finite blowup time along this label");

  const int decades = std::max(1, int(std::round(std::log10(opt.window_hi / opt.window_lo))));
  const int count = decades * opt.pts_per_decade + 1;
  std::vector<double> log_off, log_vr, log_rho;
  log_off.reserve(count);
  Point point = at(alpha);
  double vr_limit_acc = 0.0;
  int vr_limit_count = 0;
  for (int k = 0; k < count; ++k) {
    const double off =
        opt.window_hi * std::pow(opt.window_lo / opt.window_hi, double(k) / (count - 1));
    const double t = fit.t2 - off;
    Derivs d = point.derivs(t);
    const double rho = point.rho(t);
    log_off.push_back(std::log(off));
    log_vr.push_back(std::log(std::abs(d.v_r)));
    log_rho.push_back(std::log(rho));
    if (off <= opt.window_lo * 10.0) {
      vr_limit_acc += off * d.v_r;
      ++vr_limit_count;
    }
  }
  LinearFit fv = linear_fit(log_off, log_vr);
  LinearFit fr = linear_fit(log_off, log_rho);
  // |v_r| ~ C (t2-t)^p: the log-log slope in the offset is the exponent p
  fit.gradient_exponent = fv.slope;
  fit.density_exponent = fr.slope;
  fit.r2_gradient = fv.r2;
  fit.r2_density = fr.r2;
  fit.vr_limit = vr_limit_acc / std::max(1, vr_limit_count);
  if (fit.r2_gradient < opt.min_r2 || fit.r2_density < opt.min_r2)
    throw DiagnosticsError("blowup_rate_fit: poor fit quality", log_off, log_vr);
  return fit;
}

}  // namespace flrw
