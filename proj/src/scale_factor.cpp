#include "flrw/scale_factor.hpp"

#include "flrw/quadrature.hpp"

#include <cmath>

namespace flrw {

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::H1: return "H1";
    case Regime::H2: return "H2";
    case Regime::H3: return "H3";
    case Regime::H4: return "H4";
  }
  return "?";
}

namespace {
void check_time(double t) {
  if (!(t >= 0.0)) throw std::domain_error("scale factor: time must be >= 0");
}
}  // namespace

ScaleFactor ScaleFactor::power_law(double exponent) {
  if (!(exponent >= 0.0)) throw ConfigError("power-law scale factor needs exponent >= 0");
  ScaleFactor s;
  s.kind_ = Kind::PowerLaw;
  s.l_ = exponent;
  s.classify_structured();
  return s;
}

ScaleFactor ScaleFactor::exponential(double rate) {
  if (!(rate > 0.0)) throw ConfigError("exponential scale factor needs rate > 0");
  ScaleFactor s;
  s.kind_ = Kind::Exponential;
  s.H_ = rate;
  s.classify_structured();
  return s;
}

ScaleFactor ScaleFactor::custom(std::function<double(double)> a,
                                std::function<double(double)> da,
                                std::optional<double> delta0_hint) {
  if (!a) throw ConfigError("custom scale factor needs an evaluator for a(t)");
  if (!da) throw ConfigError("custom scale factor needs an evaluator for da/dt");
  ScaleFactor s;
  s.kind_ = Kind::Custom;
  s.a_fn_ = std::move(a);
  s.da_fn_ = std::move(da);
  s.delta0_hint_ = delta0_hint;
  if (std::abs(s.a_fn_(0.0) - 1.0) > 1e-12)
    throw ConfigError("custom scale factor must satisfy a(0) = 1");
  s.classify_sampled();
  return s;
}

double ScaleFactor::eval_a(double t) const {
  check_time(t);
  switch (kind_) {
    case Kind::PowerLaw: return std::exp(l_ * std::log1p(t));
    case Kind::Exponential: return std::exp(H_ * t);
    case Kind::Custom: return a_fn_(t);
  }
  return 1.0;
}

double ScaleFactor::eval_da(double t) const {
  check_time(t);
  switch (kind_) {
    case Kind::PowerLaw:
      if (l_ == 0.0) return 0.0;
      return l_ * std::exp((l_ - 1.0) * std::log1p(t));
    case Kind::Exponential:
      return H_ * std::exp(H_ * t);
    case Kind::Custom:
      return da_fn_(t);
  }
  return 0.0;
}

double ScaleFactor::inv_power(double t, double k) const {
  check_time(t);
  switch (kind_) {
    case Kind::PowerLaw: return std::exp(-k * l_ * std::log1p(t));
    case Kind::Exponential: return std::exp(-k * H_ * t);
    case Kind::Custom: return std::pow(a_fn_(t), -k);
  }
  return 1.0;
}

double ScaleFactor::integral_inv_power(int k, double t) const {
  if (k != 2 && k != 4 && k != 6)
    throw std::invalid_argument("integral_inv_power: k must be one of {2,4,6}");
  check_time(t);
  switch (kind_) {
    case Kind::PowerLaw: {
      const double p = k * l_;
      if (p == 1.0) return std::log1p(t);
      return std::expm1((1.0 - p) * std::log1p(t)) / (1.0 - p);
    }
    case Kind::Exponential:
      return -std::expm1(-k * H_ * t) / (k * H_);
    case Kind::Custom: {
      auto kernel = [this, k](double s) { return inv_power(s, k); };
      return integrate_adaptive<double>(kernel, 0.0, t, 1e-10).value;
    }
  }
  return 0.0;
}

double ScaleFactor::log_scale(double t) const {
  check_time(t);
  switch (kind_) {
    case Kind::PowerLaw: return l_ * std::log1p(t);
    case Kind::Exponential: return H_ * t;
    case Kind::Custom: return std::log(a_fn_(t));
  }
  return 0.0;
}

void ScaleFactor::classify_structured() {
  regime_ = RegimeInfo{};
  regime_.sampled = false;
  regime_.conclusive = true;
  if (kind_ == Kind::Exponential) {
    regime_.regime = Regime::H1;
    return;
  }
  regime_.l = l_;
  if (l_ == 0.0) {
    regime_.regime = Regime::H4;
  } else if (l_ <= 0.5) {
    regime_.regime = Regime::H3;
  } else if (l_ < 1.0) {
    regime_.regime = Regime::H2;
    regime_.delta0 = 2.0 * l_ - 1.0;
  } else {
    regime_.regime = Regime::H1;
  }
}

void ScaleFactor::classify_sampled() {
  regime_ = RegimeInfo{};
  regime_.sampled = true;

  // Sign samples on a geometric grid; dda by central difference since only
  // its sign matters here.
  std::vector<double> grid;
  grid.push_back(0.0);
  for (int i = 0; i < 24; ++i)
    grid.push_back(1e-3 * std::pow(10.0, 9.0 * i / 23.0));

  bool da_pos = true, dda_nonneg = true, dda_neg = true, constant_one = true;
  for (double t : grid) {
    const double a = a_fn_(t);
    if (!(a > 0.0)) throw ConfigError("custom scale factor must stay positive");
    const double da = da_fn_(t);
    const double h = std::max(1e-6, 1e-6 * t);
    const double tm = std::max(0.0, t - h);
    const double dda = (da_fn_(t + h) - da_fn_(tm)) / (t + h - tm);
    if (!(da > 0.0)) da_pos = false;
    if (dda < -1e-12) dda_nonneg = false;
    if (dda > -1e-12) dda_neg = false;
    if (std::abs(a - 1.0) > 1e-12 || std::abs(da) > 1e-12) constant_one = false;
  }

  if (constant_one) {
    regime_.regime = Regime::H4;
    return;
  }
  if (da_pos && dda_nonneg) {
    regime_.regime = Regime::H1;
    return;
  }
  if (da_pos && dda_neg && delta0_hint_) {
    const double d0 = *delta0_hint_;
    if (!(d0 > 0.0 && d0 < 1.0))
      throw ConfigError("custom scale factor: delta0 hint must lie in (0,1)");
    bool growth_ok = true;
    for (double t : grid)
      if (a_fn_(t) < std::exp(0.5 * (1.0 + d0) * std::log1p(t)) - 1e-9) growth_ok = false;
    if (growth_ok) {
      regime_.regime = Regime::H2;
      regime_.delta0 = d0;
      return;
    }
  }
  // Ambiguous sign pattern: report a guess, flagged inconclusive.
  regime_.regime = (da_pos ? Regime::H2 : Regime::H4);
  regime_.conclusive = false;
}

}  // namespace flrw
