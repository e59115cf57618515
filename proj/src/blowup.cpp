#include "flrw/blowup.hpp"

#include "flrw/linalg.hpp"
#include "flrw/root_finding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace flrw {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kXiCap = 700.0;  // ln(1+t) beyond which times are reported as infinite
}  // namespace

const char* verdict_name(BlowupReport::Verdict v) {
  switch (v) {
    case BlowupReport::Verdict::global: return "global";
    case BlowupReport::Verdict::blowup: return "blowup";
    case BlowupReport::Verdict::undetermined_horizon: return "undetermined-horizon";
  }
  return "?";
}

LifespanParams make_lifespan_params(const CharacteristicFlow& flow, double delta) {
  const RegimeInfo& info = flow.scale().classify();
  LifespanParams p;
  p.regime = info.regime;
  p.n = flow.dim();
  p.c = flow.data().light_speed();
  p.eps = flow.data().epsilon();
  p.M0 = flow.data().sup_norms().M0;
  p.l = info.l;
  p.delta = delta;
  p.da0 = flow.scale().eval_da(0.0);
  p.delta0 = info.delta0;
  return p;
}

double lifespan_bound(const LifespanParams& p) {
  if (p.regime == Regime::H1 || p.regime == Regime::H2) return kInf;
  if (p.M0 == 0.0) return kInf;
  if (!(p.delta > 0.0 && p.delta < 1.0))
    throw std::invalid_argument("lifespan_bound: delta must lie in (0,1)");
  const double c2 = p.c * p.c;
  const double P = p.delta * c2 / (4.0 * p.n * p.M0 * (c2 + p.M0 * p.M0));
  const double l = (p.regime == Regime::H4) ? 0.0 : p.l;
  if (l == 0.5) {
    const double e = P / p.eps;
    return e > kXiCap ? kInf : std::expm1(e);
  }
  const double xi = std::log1p((1.0 - 2.0 * l) * P / p.eps) / (1.0 - 2.0 * l);
  return xi > kXiCap ? kInf : std::expm1(xi);
}

EpsilonThreshold epsilon_threshold(const LifespanParams& p) {
  EpsilonThreshold out;
  const double c2 = p.c * p.c;
  switch (p.regime) {
    case Regime::H1: out.name = "epsilon1"; break;
    case Regime::H2: out.name = "epsilon2"; break;
    default: out.name = "epsilon3"; break;
  }
  if (p.M0 == 0.0) {
    out.value = 1.0;  // zero data: any admissible amplitude
    return out;
  }
  const double cap = p.c * std::sqrt(1.0 - std::pow(p.delta, 0.4)) / p.M0;
  if (p.regime == Regime::H3 || p.regime == Regime::H4) {
    out.value = std::min(cap, 1.0);
    return out;
  }
  double rhs = 0.0;
  if (p.regime == Regime::H1) {
    if (!(p.da0 > 0.0)) throw std::invalid_argument("epsilon_threshold: H1 needs da(0) > 0");
    rhs = (p.da0 / (4.0 * p.n)) * p.delta * c2 / (p.M0 * p.M0 + c2);
  } else {
    if (!(p.delta0 > 0.0))
      throw std::invalid_argument("epsilon_threshold: H2 needs the growth margin delta0");
    rhs = (p.delta0 / (2.0 * p.n)) * c2 / (p.M0 * p.M0 + c2);
  }
  const double M0 = p.M0;
  auto cubic = [&](double eta) { return eta * M0 + eta * eta * eta * M0 * M0 * M0 / c2 - rhs; };
  const double hi = rhs / M0 + 1.0;
  out.eta = bisect(cubic, 0.0, hi, 1e-15, 1e-12, 300);
  out.value = std::min({cap, out.eta, 1.0});
  return out;
}

double scalar_blowup_time_1d(const CharacteristicFlow& flow, double alpha) {
  if (flow.dim() != 1)
    throw std::invalid_argument("scalar_blowup_time_1d: one-dimensional data only");
  Vec a(1);
  a[0] = alpha;
  auto tr = flow.data().transforms(a);
  const double v0p = tr.dv(0, 0);
  if (v0p >= 0.0) return kInf;
  const double c = flow.data().light_speed();
  const double cf0p = c * tr.dg0(0, 0);  // always negative here
  const double target = -1.0 / cf0p;     // F2 value at the determinant zero

  const ScaleFactor& sf = flow.scale();
  if (sf.is_power_law()) {
    const double l = sf.power_exponent();
    if (l == 0.0) {
      // static background: F2(t) = t / (1+q)^{3/2} and the boost identity
      // collapse to the classical reciprocal time
      return -1.0 / (flow.data().epsilon() * v0p);
    }
    if (tr.q == 0.0) {
      if (l == 0.5) return target > kXiCap ? kInf : std::expm1(target);
      const double arg = (1.0 - 2.0 * l) * target;
      if (arg <= -1.0) return kInf;  // integrable expansion outruns the data
      const double xi = std::log1p(arg) / (1.0 - 2.0 * l);
      return xi > kXiCap ? kInf : std::expm1(xi);
    }
  }

  auto point = flow.at(a);
  auto shifted = [&](double xi) { return point.F2(std::expm1(xi)) - target; };
  double xi_lo = 0.0, xi_hi = 1.0;
  while (shifted(xi_hi) < 0.0) {
    xi_lo = xi_hi;
    xi_hi *= 2.0;
    if (xi_hi > kXiCap) return kInf;
  }
  const double xi = bisect(shifted, xi_lo, xi_hi, 1e-13, 1e-11, 300);
  return std::expm1(xi);
}

LeadingCoefficient leading_coefficient_sign(const InitialData& data, const Vec& alpha) {
  auto tr = data.transforms(alpha);
  const double c = data.light_speed();
  const double eps = data.epsilon();
  const Vec s = tr.dv.transpose() * tr.v;
  const Mat K = tr.w2 * tr.dv - tr.v * s.transpose();
  const Mat D = c * c * tr.dv - eps * eps * K;
  const int n = data.dim();
  const double scale = std::pow(c * eps, n) / std::pow(tr.P, 1.5 * n);
  LeadingCoefficient out;
  out.value = scale * det_small(D);
  out.sign = (out.value > 0.0) - (out.value < 0.0);
  return out;
}

// ---------------------------------------------------------------------------
// Determinant search

namespace {

struct GridScan {
  std::vector<Vec> alphas;
  std::vector<std::unique_ptr<CharacteristicFlow::Point>> points;
  double spacing = 0.0;
};

GridScan build_grid(const CharacteristicFlow& flow, const BlowupSearch& s) {
  const int n = flow.dim();
  Vec lo = s.alpha_lo.size() == n ? s.alpha_lo : Vec::Constant(n, -5.0);
  Vec hi = s.alpha_hi.size() == n ? s.alpha_hi : Vec::Constant(n, 5.0);
  const int m = std::max(2, s.grid);
  GridScan g;
  g.spacing = (hi[0] - lo[0]) / (m - 1);
  std::vector<int> idx(n, 0);
  for (;;) {
    Vec a(n);
    for (int d = 0; d < n; ++d) a[d] = lo[d] + (hi[d] - lo[d]) * idx[d] / (m - 1);
    g.alphas.push_back(a);
    int d = 0;
    while (d < n && ++idx[d] == m) idx[d++] = 0;
    if (d == n) break;
  }
  g.points.reserve(g.alphas.size());
  for (const Vec& a : g.alphas)
    g.points.push_back(std::make_unique<CharacteristicFlow::Point>(flow, a));
  return g;
}

// min_alpha det over the grid; deterministic reduction by (value, index).
std::pair<double, int> grid_min_det(GridScan& g, double t, int jobs) {
  const int count = static_cast<int>(g.points.size());
  std::vector<double> dets(count);
  parallel_for(count, jobs, [&](int i) { dets[i] = g.points[i]->jacobian(t).det; });
  int best = 0;
  for (int i = 1; i < count; ++i)
    if (dets[i] < dets[best]) best = i;
  return {dets[best], best};
}

// Golden-section refinement of the det minimizer in alpha, one coordinate at
// a time, starting from the grid arg-min.
Vec coordinate_descent(const CharacteristicFlow& flow, double t, Vec alpha, double h,
                       const Vec& lo, const Vec& hi, int rounds = 3) {
  const int n = flow.dim();
  for (int round = 0; round < rounds; ++round) {
    for (int d = 0; d < n; ++d) {
      const double a_lo = std::max(lo[d], alpha[d] - h);
      const double a_hi = std::min(hi[d], alpha[d] + h);
      auto obj = [&](double s) {
        Vec cand = alpha;
        cand[d] = s;
        return flow.jacobian(t, cand).det;
      };
      alpha[d] = golden_minimize(obj, a_lo, a_hi, 1e-10 * (1.0 + std::abs(alpha[d])));
    }
    h /= 3.0;
  }
  return alpha;
}

}  // namespace

BlowupReport find_blowup_time(const CharacteristicFlow& flow, const BlowupSearch& search) {
  const int n = flow.dim();
  BlowupReport report;
  report.analytic_bound = lifespan_bound(make_lifespan_params(flow));
  report.threshold = epsilon_threshold(make_lifespan_params(flow));

  Vec lo = search.alpha_lo.size() == n ? search.alpha_lo : Vec::Constant(n, -5.0);
  Vec hi = search.alpha_hi.size() == n ? search.alpha_hi : Vec::Constant(n, 5.0);
  GridScan grid = build_grid(flow, search);

  const double xi_max = std::log1p(search.t_max);
  std::vector<double> nodes;
  for (int j = 0; j <= search.t_samples; ++j)
    nodes.push_back(xi_max * j / search.t_samples);

  const int insert_budget = 10 * search.t_samples;
  int inserted = 0;

  double prev_xi = 0.0, prev_m = 1.0;
  report.det_trace.emplace_back(0.0, 1.0);
  double dip_m = 1.0, dip_t = 0.0;
  int dip_idx = 0;
  bool crossed = false;
  double cross_t_lo = 0.0, cross_t_hi = 0.0;
  int cross_idx = 0;

  std::size_t j = 1;
  while (j < nodes.size()) {
    const double xi = nodes[j];
    const double t = std::expm1(xi);
    auto [m, idx] = grid_min_det(grid, t, search.jobs);
    // refine where the minimum moves fast; near a sign change keep the trace
    // steps small enough for reliable bracketing
    const double max_step = (std::min(m, prev_m) < 0.3) ? 0.05 : 0.5;
    if (std::abs(m - prev_m) > max_step && xi - prev_xi > 1e-12) {
      if (inserted >= insert_budget)
        throw ResolutionError("find_blowup_time: det varies too fast for the time grid");
      nodes.insert(nodes.begin() + j, 0.5 * (prev_xi + xi));
      ++inserted;
      continue;
    }
    report.det_trace.emplace_back(t, m);
    report.min_det_observed = std::min(report.min_det_observed, m);
    if (m < dip_m) {
      dip_m = m;
      dip_t = t;
      dip_idx = idx;
    }
    if (m <= 0.0) {
      crossed = true;
      cross_t_lo = std::expm1(prev_xi);
      cross_t_hi = t;
      cross_idx = idx;
      break;
    }
    prev_xi = xi;
    prev_m = m;
    ++j;
  }

  if (crossed) {
    // bracket the zero of the grid minimum in t
    double t_lo = cross_t_lo, t_hi = cross_t_hi;
    for (int it = 0; it < 200 && (t_hi - t_lo) > search.t_rel_tol * t_hi; ++it) {
      const double mid = 0.5 * (t_lo + t_hi);
      (grid_min_det(grid, mid, search.jobs).first > 0.0 ? t_lo : t_hi) = mid;
    }
    // descend in alpha at a time where the grid minimum is nonpositive
    cross_idx = grid_min_det(grid, t_hi, search.jobs).second;
    Vec astar = coordinate_descent(flow, t_hi, grid.alphas[cross_idx], grid.spacing, lo, hi);
    // exact zero along the refined label; det(0) = 1 anchors the bracket
    auto point = flow.at(astar);
    double s_hi = t_hi;
    while (point.jacobian(s_hi).det > 0.0 && s_hi < search.t_max)
      s_hi = std::min(search.t_max, 2.0 * s_hi + 1.0);
    double s_lo = (point.jacobian(cross_t_lo).det > 0.0) ? cross_t_lo : 0.0;
    for (int it = 0; it < 300 && (s_hi - s_lo) > search.t_rel_tol * s_hi; ++it) {
      const double mid = 0.5 * (s_lo + s_hi);
      (point.jacobian(mid).det > 0.0 ? s_lo : s_hi) = mid;
    }
    report.verdict = BlowupReport::Verdict::blowup;
    report.t_blow = 0.5 * (s_lo + s_hi);
    report.alpha_star = astar;
    report.det_at_detection = point.jacobian(*report.t_blow).det;
    report.min_det_observed = std::min(report.min_det_observed, report.det_at_detection);
    return report;
  }

  // no sign change: try to certify, else polish a tangent dip
  const bool zero_data = flow.data().sup_norms().M0 == 0.0;
  const Regime regime = flow.scale().classify().regime;
  const bool small_data =
      (regime == Regime::H1 || regime == Regime::H2) &&
      flow.data().epsilon() <= report.threshold.value;

  if (dip_m <= search.dip_polish_threshold && !zero_data) {
    // deepen the dip by alternating descent in the label and the time
    Vec astar = grid.alphas[dip_idx];
    double t_star = dip_t;
    double best = dip_m;
    for (int round = 0; round < 4; ++round) {
      astar = coordinate_descent(flow, t_star, astar, grid.spacing / (round + 1), lo, hi, 2);
      auto point = flow.at(astar);
      auto obj = [&](double xi) { return point.jacobian(std::expm1(xi)).det; };
      const double xi_star = std::log1p(t_star);
      const double w = xi_max / search.t_samples;
      const double xi_new =
          golden_minimize(obj, std::max(0.0, xi_star - w), std::min(xi_max, xi_star + w), 1e-12);
      t_star = std::expm1(xi_new);
      best = point.jacobian(t_star).det;
    }
    report.min_det_observed = std::min(report.min_det_observed, best);
    if (best <= search.det_tol) {
      // the determinant touches zero without a sign change, possibly along a
      // whole family of labels; the blowup time is the FIRST time the
      // polished minimum reaches the tolerance, located by bisection
      Vec a_cont = astar;
      auto polished_min = [&](double t) {
        auto [m, idx] = grid_min_det(grid, t, search.jobs);
        Vec start = grid.alphas[idx];
        if (flow.jacobian(t, a_cont).det < m) start = a_cont;
        Vec cand = coordinate_descent(flow, t, start, grid.spacing, lo, hi, 2);
        const double val = flow.jacobian(t, cand).det;
        if (val < m) {
          a_cont = cand;
          return val;
        }
        a_cont = grid.alphas[idx];
        return m;
      };
      double t_hi = t_star;
      double t_lo = 0.0;
      for (auto it = report.det_trace.rbegin(); it != report.det_trace.rend(); ++it) {
        if (it->first < t_hi && polished_min(it->first) > 100.0 * search.det_tol) {
          t_lo = it->first;
          break;
        }
      }
      Vec a_best = a_cont;
      for (int it = 0; it < 80 && (t_hi - t_lo) > search.t_rel_tol * t_hi; ++it) {
        const double mid = std::expm1(0.5 * (std::log1p(t_lo) + std::log1p(t_hi)));
        if (polished_min(mid) <= search.det_tol) {
          t_hi = mid;
          a_best = a_cont;
        } else {
          t_lo = mid;
        }
      }
      report.verdict = BlowupReport::Verdict::blowup;
      report.t_blow = t_hi;
      report.alpha_star = a_best;
      report.det_at_detection = flow.jacobian(t_hi, a_best).det;
      return report;
    }
  }

  if (zero_data) {
    report.verdict = BlowupReport::Verdict::global;
    report.certificate = "zero data: flow map is the identity";
  } else if (small_data) {
    report.verdict = BlowupReport::Verdict::global;
    report.certificate = "regime " + std::string(regime_name(regime)) +
                         " with eps <= " + report.threshold.name +
                         ": diagonally dominant flow-map Jacobian";
  } else {
    report.verdict = BlowupReport::Verdict::undetermined_horizon;
    report.certificate =
        "no determinant zero up to the horizon; min sampled det = " +
        std::to_string(report.min_det_observed);
  }
  return report;
}

BlowupCertificate blowup_certificate(const CharacteristicFlow& flow, const Vec& alpha,
                                     double t_max, double det_tol) {
  auto lc = leading_coefficient_sign(flow.data(), alpha);
  auto point = flow.at(alpha);
  BlowupCertificate cert;
  cert.leading_coefficient = lc.value;

  const double xi_max = std::log1p(t_max);
  const int steps = 96;
  double prev_t = 0.0;
  double dip_det = 1.0, dip_prev = 0.0, dip_next = t_max;
  for (int j = 1; j <= steps; ++j) {
    const double t = std::expm1(xi_max * j / steps);
    const double det = point.jacobian(t).det;
    if (det <= 0.0) {
      double lo = prev_t, hi = t;
      for (int it = 0; it < 200 && (hi - lo) > 1e-10 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (point.jacobian(mid).det > 0.0 ? lo : hi) = mid;
      }
      cert.t_lo = prev_t;
      cert.t_hi = t;
      cert.t_cross = 0.5 * (lo + hi);
      cert.tangent = false;
      return cert;
    }
    if (det < dip_det) {
      dip_det = det;
      dip_prev = prev_t;
      dip_next = std::expm1(xi_max * std::min(steps, j + 1) / steps);
    }
    prev_t = t;
  }

  if (dip_det < 0.5) {
    auto obj = [&](double xi) { return point.jacobian(std::expm1(xi)).det; };
    const double xi_new = golden_minimize(obj, std::log1p(dip_prev),
                                          std::log1p(dip_next), 1e-13);
    const double t_star = std::expm1(xi_new);
    const double det = point.jacobian(t_star).det;
    if (det <= det_tol) {
      cert.t_lo = dip_prev;
      cert.t_hi = dip_next;
      cert.t_cross = t_star;
      cert.tangent = true;
      return cert;
    }
  }

  if (lc.value < 0.0) {
    // project where the leading term forces the zero: solve the determinant
    // as a function of the slow integral with the fast integral frozen
    const double f2_now = point.F2(t_max);
    const double f4_now = point.F4(t_max);
    auto tr = flow.data().transforms(alpha);
    const double c = flow.data().light_speed();
    const int n = flow.dim();
    auto det_of_f2 = [&](double F2v) {
      Mat J = Mat::Identity(n, n) + c * F2v * tr.dg0 +
              c * f4_now * (tr.q * tr.dg0 - 0.5 * (tr.g0 * tr.dq.transpose()));
      return det_small(J);
    };
    double hi = std::max(1.0, 2.0 * f2_now);
    while (det_of_f2(hi) > 0.0 && hi < 1e12) hi *= 2.0;
    const double projected =
        det_of_f2(hi) > 0.0 ? hi : bisect(det_of_f2, f2_now, hi, 1e-12, 1e-10);
    throw HorizonError("blowup_certificate: no determinant zero before t_max", f2_now,
                       projected);
  }
  throw ConfigError(
      "blowup_certificate: leading coefficient is nonnegative and the determinant never dips");
}

}  // namespace flrw
