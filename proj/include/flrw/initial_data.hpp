#pragma once

#include "flrw/types.hpp"

#include <functional>
#include <optional>
#include <string>

namespace flrw {

// Velocity profile with analytic first and second derivatives.
struct VelocityProfile {
  std::function<Vec(const Vec&)> value;
  std::function<Mat(const Vec&)> jacobian;
  std::function<Tensor3(const Vec&)> hessian;
  bool bounded = true;  // false: no finite C^2 norm (e.g. linear growth)
  std::string name = "custom";
};

struct DensityProfile {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::string name = "custom";
};

namespace profiles {
VelocityProfile zero(int n);
// v0^i = slope * alpha^i
VelocityProfile linear(int n, double slope);
// v0^i = amplitude * (delta * alpha^i + atan(width * alpha^i))
VelocityProfile arctan(int n, double delta = 0.0, double amplitude = 1.0,
                       double width = 1.0);
// v0^i = amplitude * exp(-|alpha|^2 / 2)
VelocityProfile gaussian(int n, double amplitude = 1.0);
// v0^i = amplitude * sin(alpha^i)
VelocityProfile sine(int n, double amplitude = 1.0);

DensityProfile constant_density(int n, double value = 1.0);
// rho0 = floor + exp(-|alpha|^2 / 2)
DensityProfile gaussian_density(int n, double floor = 0.0);
}  // namespace profiles

// Cauchy data (rho0, v0) with amplitude eps and light speed c, plus the
// boosted profiles f0 (speed transform) and g0 (velocity transform) that all
// closed-form solution formulas consume:
//   g0 = eps v0 / sqrt(c^2 - eps^2 |v0|^2),   f0 = |g0|  (signed g0 itself
//   in one dimension).
// Immutable after construction; evaluation is pure.
class InitialData {
 public:
  InitialData(int n, double c, double eps, VelocityProfile v0, DensityProfile rho0,
              std::optional<double> declared_N0 = std::nullopt,
              std::optional<double> declared_Q0 = std::nullopt,
              double sample_box = 5.0,
              std::optional<double> eps_max_override = std::nullopt);

  int dim() const { return n_; }
  double light_speed() const { return c_; }
  double epsilon() const { return eps_; }

  Vec v0(const Vec& alpha) const { return v0_.value(alpha); }
  Mat dv0(const Vec& alpha) const { return v0_.jacobian(alpha); }
  Tensor3 d2v0(const Vec& alpha) const { return v0_.hessian(alpha); }
  double rho0(const Vec& alpha) const;
  Vec drho0(const Vec& alpha) const { return rho0_.gradient(alpha); }

  double eval_f0(const Vec& alpha) const;
  Vec eval_g0(const Vec& alpha) const;
  Vec deriv_f0(const Vec& alpha) const;           // gradient of f0
  Mat deriv_f0_hessian(const Vec& alpha) const;
  Mat deriv_g0(const Vec& alpha) const;           // (i,j) = d g0^i / d alpha^j
  Tensor3 deriv_g0_hessian(const Vec& alpha) const;

  struct Norms {
    double N0 = 0.0;  // C^2 bound on v0
    double M0 = 0.0;  // n sqrt(n) N0
    double Q0 = 0.0;  // C^1(rho0) + C^2(v0) bound
    bool estimated = false;  // sampled on a box, not rigorous
  };
  const Norms& sup_norms() const { return norms_; }
  double eps_max() const { return eps_max_; }

  // All boosted quantities at one label, including the smooth square-speed
  // transform q = f0^2 and its derivatives (well defined even where v0 = 0).
  struct Transforms {
    Vec v;       // v0(alpha)
    Mat dv;      // dv0
    double w2;   // |v0|^2
    double P;    // c^2 - eps^2 |v0|^2
    double f0;
    Vec g0;
    Vec df0;     // may use the 0/0 -> 0 convention at zeros of v0 (n >= 2)
    Mat dg0;
    double q;    // f0^2
    Vec dq;
    bool second_order = false;
    Tensor3 d2v;
    Mat d2f0;
    Tensor3 d2g0;
    Mat d2q;
  };
  Transforms transforms(const Vec& alpha, bool second_order = false) const;

  const VelocityProfile& velocity_profile() const { return v0_; }
  const DensityProfile& density_profile() const { return rho0_; }

 private:
  void estimate_norms(double box);

  int n_;
  double c_;
  double eps_;
  VelocityProfile v0_;
  DensityProfile rho0_;
  Norms norms_;
  double eps_max_;
};

}  // namespace flrw
