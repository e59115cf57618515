#pragma once

#include "flrw/types.hpp"

#include <functional>
#include <optional>

namespace flrw {

// Expansion-rate regimes of the background.
//   H1: accelerated expansion (da > 0, dda >= 0)
//   H2: decelerated but integrably fast, a(t) >= (1+t)^{(1+delta0)/2}
//   H3: slow power law a(t) = (1+t)^l with 0 < l <= 1/2
//   H4: static background, a == 1
enum class Regime { H1, H2, H3, H4 };

struct RegimeInfo {
  Regime regime = Regime::H4;
  bool sampled = false;     // classified from numeric samples, not structure
  bool conclusive = true;   // false: ambiguous sign pattern, regime is a guess
  double delta0 = 0.0;      // meaningful for H2
  double l = 0.0;           // meaningful for H3/H4 power laws
};

const char* regime_name(Regime r);

// Background scale factor, normalized to a(0) = 1, expanding (da >= 0).
// Immutable after construction; all evaluation is pure.
class ScaleFactor {
 public:
  static ScaleFactor power_law(double exponent);  // a(t) = (1+t)^l, l >= 0
  static ScaleFactor exponential(double rate);    // a(t) = e^{Ht}, H > 0
  static ScaleFactor custom(std::function<double(double)> a,
                            std::function<double(double)> da,
                            std::optional<double> delta0_hint = std::nullopt);

  double eval_a(double t) const;
  double eval_da(double t) const;

  // a(t)^{-k} computed without forming a(t); safe for huge t where a(t)
  // itself would overflow.
  double inv_power(double t, double k) const;

  // integral of a^{-k} over [0, t] for k in {2, 4, 6}; closed form for the
  // structured kinds, adaptive quadrature (rel 1e-10) for custom factors.
  double integral_inv_power(int k, double t) const;

  double log_scale(double t) const;  // ln a(t)

  const RegimeInfo& classify() const { return regime_; }

  bool is_power_law() const { return kind_ == Kind::PowerLaw; }
  bool is_exponential() const { return kind_ == Kind::Exponential; }
  bool is_custom() const { return kind_ == Kind::Custom; }
  double power_exponent() const { return l_; }
  double exp_rate() const { return H_; }

 private:
  enum class Kind { PowerLaw, Exponential, Custom };
  ScaleFactor() = default;
  void classify_structured();
  void classify_sampled();

  Kind kind_ = Kind::PowerLaw;
  double l_ = 0.0;
  double H_ = 0.0;
  std::function<double(double)> a_fn_;
  std::function<double(double)> da_fn_;
  std::optional<double> delta0_hint_;
  RegimeInfo regime_;
};

}  // namespace flrw
