#pragma once

#include "flrw/characteristics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace flrw {

// Life-span analysis: analytic lower bounds and amplitude thresholds for the
// small-data regimes, exact one-dimensional blowup times, and a numeric
// search for the first zero of det(dx/dalpha) with tangency handling.

struct LifespanParams {
  Regime regime = Regime::H4;
  int n = 1;
  double c = 1.0;
  double eps = 0.0;
  double M0 = 0.0;
  double l = 0.0;       // power-law exponent (H3/H4)
  double delta = 0.9;   // free margin constant in (0,1)
  double da0 = 0.0;     // da/dt at t=0 (H1 threshold)
  double delta0 = 0.0;  // growth margin (H2 threshold)
};

LifespanParams make_lifespan_params(const CharacteristicFlow& flow, double delta = 0.9);

// Certified existence horizon: infinity under H1/H2, the closed-form slow
// expansion bound under H3, and its l -> 0 limit under H4.
double lifespan_bound(const LifespanParams& p);

struct EpsilonThreshold {
  std::string name;  // "epsilon1" | "epsilon2" | "epsilon3"
  double value = 0.0;
  double eta = 0.0;  // cubic root entering epsilon1/epsilon2 (0 otherwise)
};

// Amplitude threshold under which the diagonal-dominance certificate applies.
// The cubic for eta is solved by bracketing bisection to 1e-12.
EpsilonThreshold epsilon_threshold(const LifespanParams& p);

// Exact first zero of d x/d alpha along a single one-dimensional label:
// infinity when v0'(alpha) >= 0, the classical reciprocal formula on a static
// background, the closed forms when the boosted speed vanishes at alpha, and
// a bracketed bisection on the slow integral otherwise.
double scalar_blowup_time_1d(const CharacteristicFlow& flow, double alpha);

struct BlowupSearch {
  double t_max = 1e6;
  Vec alpha_lo, alpha_hi;  // defaults to [-5, 5]^n
  int grid = 41;           // points per dimension
  int t_samples = 96;      // base log-spaced time nodes
  double det_tol = 1e-8;
  double t_rel_tol = 1e-8;
  double dip_polish_threshold = 0.25;
  int jobs = 1;
};

struct BlowupReport {
  enum class Verdict { global, blowup, undetermined_horizon };
  Verdict verdict = Verdict::undetermined_horizon;
  std::optional<double> t_blow;
  std::optional<Vec> alpha_star;
  std::vector<std::pair<double, double>> det_trace;  // (t, min_alpha det)
  double analytic_bound = 0.0;
  EpsilonThreshold threshold;
  double min_det_observed = 1.0;
  double det_at_detection = 1.0;
  std::string certificate;  // reason attached to a "global" verdict / horizon note
};

const char* verdict_name(BlowupReport::Verdict v);

// Sweeps min_alpha det over a log-spaced time grid, brackets the first sign
// change (or polishes a tangent dip to the det tolerance), and only certifies
// "global" with an analytic reason; pure numerics yield undetermined-horizon.
BlowupReport find_blowup_time(const CharacteristicFlow& flow, const BlowupSearch& search);

struct LeadingCoefficient {
  double value = 0.0;
  int sign = 0;
};

// Sign of the leading determinant coefficient in the slow time integral; a
// negative value certifies a finite-time zero under slow expansion.
LeadingCoefficient leading_coefficient_sign(const InitialData& data, const Vec& alpha);

struct BlowupCertificate {
  double t_lo = 0.0;  // det positive here
  double t_hi = 0.0;  // det <= tolerance here
  double t_cross = 0.0;
  double leading_coefficient = 0.0;
  bool tangent = false;  // det dips to zero without a sign change
};

// Confirms det starts at 1 and reaches zero before t_max along one label.
// Throws HorizonError (with the projected slow-integral crossing) when the
// leading coefficient is negative but t_max is too small, and ConfigError
// when there is no negative leading coefficient and no dip.
BlowupCertificate blowup_certificate(const CharacteristicFlow& flow, const Vec& alpha,
                                     double t_max, double det_tol = 1e-8);

}  // namespace flrw
