#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flrw/blowup.hpp"
#include "flrw/root_finding.hpp"

#include <cmath>
#include <random>

using namespace flrw;

namespace {

InitialData arctan_data(int n, double eps, double amplitude = -1.0, double delta = 0.0) {
  return InitialData(n, 1.0, eps, profiles::arctan(n, delta, amplitude),
                     profiles::gaussian_density(n), std::nullopt, std::nullopt, 5.0,
                     std::optional<double>(1.0));
}

VelocityProfile saddle_profile() {
  VelocityProfile saddle;
  saddle.name = "saddle";
  saddle.value = [](const Vec& a) {
    Vec v(2);
    v << -std::atan(a[0]), std::atan(a[1]);
    return v;
  };
  saddle.jacobian = [](const Vec& a) {
    Mat j = Mat::Zero(2, 2);
    j(0, 0) = -1.0 / (1.0 + a[0] * a[0]);
    j(1, 1) = 1.0 / (1.0 + a[1] * a[1]);
    return j;
  };
  saddle.hessian = [](const Vec& a) {
    Tensor3 h = zero_tensor3(2);
    h[0](0, 0) = 2.0 * a[0] / ((1.0 + a[0] * a[0]) * (1.0 + a[0] * a[0]));
    h[1](1, 1) = -2.0 * a[1] / ((1.0 + a[1] * a[1]) * (1.0 + a[1] * a[1]));
    return h;
  };
  return saddle;
}

}  // namespace

TEST_CASE("life-span bound: slow power laws and the static limit") {
  LifespanParams p;
  p.regime = Regime::H1;
  CHECK(std::isinf(lifespan_bound(p)));
  p.regime = Regime::H2;
  CHECK(std::isinf(lifespan_bound(p)));

  // slow square-root expansion: exp(delta c^2 / (4 eps n M0 (c^2 + M0^2))) - 1
  p.regime = Regime::H3;
  p.l = 0.5;
  p.n = 1;
  p.c = 1.0;
  p.M0 = 1.0;
  p.eps = 0.1;
  p.delta = 0.9;
  CHECK(lifespan_bound(p) == doctest::Approx(std::expm1(1.125)).epsilon(1e-13));
  CHECK(lifespan_bound(p) == doctest::Approx(2.0803).epsilon(1e-3));

  p.l = 0.25;
  CHECK(lifespan_bound(p) == doctest::Approx(std::pow(1.5625, 2.0) - 1.0).epsilon(1e-12));
  CHECK(lifespan_bound(p) == doctest::Approx(1.4414).epsilon(1e-4));

  // static background: l -> 0 limit of the same bound is P / eps
  p.regime = Regime::H4;
  CHECK(lifespan_bound(p) == doctest::Approx(0.9 / (4.0 * 0.1 * 2.0)).epsilon(1e-12));

  p.M0 = 0.0;
  CHECK(std::isinf(lifespan_bound(p)));
}

TEST_CASE("amplitude thresholds: cubic root and regime caps") {
  LifespanParams p;
  p.regime = Regime::H1;
  p.n = 1;
  p.c = 1.0;
  p.M0 = 1.0;
  p.delta = 0.9;
  p.da0 = 1.0;
  EpsilonThreshold e1 = epsilon_threshold(p);
  CHECK(e1.name == "epsilon1");
  // eta solves eta + eta^3 = (1/4) * 0.9 / 2 = 0.1125
  CHECK(std::abs(e1.eta + std::pow(e1.eta, 3) - 0.1125) < 1e-12);
  CHECK(e1.eta == doctest::Approx(0.1111).epsilon(1e-3));
  const double cap = std::sqrt(1.0 - std::pow(0.9, 0.4));
  CHECK(e1.value == doctest::Approx(std::min({cap, e1.eta, 1.0})).epsilon(1e-12));

  p.regime = Regime::H2;
  p.delta0 = 0.8;
  EpsilonThreshold e2 = epsilon_threshold(p);
  CHECK(e2.name == "epsilon2");
  CHECK(std::abs(e2.eta + std::pow(e2.eta, 3) - 0.8 / 2.0 / 2.0) < 1e-12);

  p.regime = Regime::H3;
  EpsilonThreshold e3 = epsilon_threshold(p);
  CHECK(e3.name == "epsilon3");
  CHECK(e3.value == doctest::Approx(std::min(cap, 1.0)).epsilon(1e-12));

  // vanishing data: threshold degenerates to the unit cap
  p.M0 = 0.0;
  CHECK(epsilon_threshold(p).value == 1.0);

  // monotone: larger data bound, smaller threshold
  double prev = 1e9;
  for (double m0 : {0.5, 1.0, 2.0, 4.0}) {
    LifespanParams q = p;
    q.regime = Regime::H1;
    q.M0 = m0;
    q.da0 = 1.0;
    const double v = epsilon_threshold(q).value;
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
}

TEST_CASE("one-dimensional blowup time: closed forms") {
  // nonnegative slope -> no blowup
  {
    InitialData inc = arctan_data(1, 0.1, +1.0);
    CharacteristicFlow flow(ScaleFactor::power_law(0.5), std::move(inc));
    CHECK(std::isinf(scalar_blowup_time_1d(flow, 0.7)));
  }
  // slow square-root expansion, label with vanishing boost: exp(10) - 1
  {
    InitialData dec = arctan_data(1, 0.1, -1.0);
    CharacteristicFlow flow(ScaleFactor::power_law(0.5), std::move(dec));
    CHECK(scalar_blowup_time_1d(flow, 0.0) ==
          doctest::Approx(std::expm1(10.0)).epsilon(1e-10));
  }
  // static background with linear data: classical 1/(eps |v0'|) at every label
  {
    InitialData lin(1, 1.0, 0.1, profiles::linear(1, -1.0), profiles::constant_density(1));
    CharacteristicFlow flow(ScaleFactor::power_law(0.0), std::move(lin));
    for (double alpha : {0.0, 0.5, 2.0})
      CHECK(scalar_blowup_time_1d(flow, alpha) == doctest::Approx(10.0).epsilon(1e-12));
  }
}

TEST_CASE("one-dimensional blowup time against brute-force determinant search") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> L(0.05, 0.5), E(0.02, 0.15), A(-2.0, 2.0);
  for (int trial = 0; trial < 12; ++trial) {
    const double l = (trial == 0) ? 0.5 : L(rng);
    const double eps = E(rng);
    const double alpha = A(rng);
    InitialData data = arctan_data(1, eps, -1.0);
    CharacteristicFlow flow(ScaleFactor::power_law(l), std::move(data));
    const double t_fast = scalar_blowup_time_1d(flow, alpha);

    // independent route: bracket the sign change of the full Jacobian
    Vec av(1);
    av[0] = alpha;
    auto point = flow.at(av);
    auto det_at = [&](double xi) { return point.jacobian(std::expm1(xi)).det; };
    double xi_lo = 0.0, xi_hi = 1.0;
    while (det_at(xi_hi) > 0.0) {
      xi_lo = xi_hi;
      xi_hi *= 2.0;
      REQUIRE(xi_hi < 700.0);
    }
    const double xi = bisect(det_at, xi_lo, xi_hi, 1e-13, 1e-11, 300);
    const double t_brute = std::expm1(xi);
    CHECK(std::abs(t_fast - t_brute) <= 1e-6 * t_brute);
  }
}

TEST_CASE("leading coefficient of the slow-integral determinant polynomial") {
  // expanding profile: positive definite initial jacobian
  {
    InitialData inc(2, 1.0, 0.1, profiles::linear(2, 1.0), profiles::constant_density(2));
    Vec a(2);
    a << 0.3, -0.4;
    CHECK(leading_coefficient_sign(inc, a).sign == 1);
  }
  // saddle data: negative determinant of the initial jacobian
  {
    InitialData data(2, 1.0, 0.1, saddle_profile(), profiles::gaussian_density(2));
    CHECK(leading_coefficient_sign(data, Vec::Zero(2)).sign == -1);

    // small-amplitude limit of the scaled coefficient recovers det(dv0) = -1
    for (double eps : {0.05, 0.02, 0.01}) {
      InitialData d2(2, 1.0, eps, saddle_profile(), profiles::gaussian_density(2));
      auto lc = leading_coefficient_sign(d2, Vec::Zero(2));
      const double scaled = lc.value / (eps * eps);
      CHECK(scaled == doctest::Approx(-1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("blowup certificate: transversal crossing, tangency, and failures") {
  // saddle data: negative leading coefficient, transversal crossing where
  // the slow integral reaches 1/eps
  {
    InitialData data(2, 1.0, 0.1, saddle_profile(), profiles::gaussian_density(2));
    CharacteristicFlow flow(ScaleFactor::power_law(0.5), std::move(data));
    auto cert = blowup_certificate(flow, Vec::Zero(2), 1e6);
    CHECK_FALSE(cert.tangent);
    CHECK(cert.leading_coefficient < 0.0);
    CHECK(cert.t_cross == doctest::Approx(std::expm1(10.0)).epsilon(1e-6));

    // horizon too small: projected crossing of the slow integral reported
    InitialData data2(2, 1.0, 0.1, saddle_profile(), profiles::gaussian_density(2));
    CharacteristicFlow flow2(ScaleFactor::power_law(0.5), std::move(data2));
    try {
      blowup_certificate(flow2, Vec::Zero(2), 100.0);
      FAIL("expected HorizonError");
    } catch (const HorizonError& e) {
      CHECK(e.f2_at_tmax < 10.0);
      CHECK(e.projected_f2 == doctest::Approx(10.0).epsilon(1e-6));
    }
  }
  // symmetric decreasing data: tangent dip to zero, still certified
  {
    InitialData data = arctan_data(2, 0.1, -1.0);
    CharacteristicFlow flow(ScaleFactor::power_law(0.5), std::move(data));
    auto cert = blowup_certificate(flow, Vec::Zero(2), 1e6);
    CHECK(cert.tangent);
    CHECK(cert.t_cross == doctest::Approx(std::expm1(10.0)).epsilon(1e-3));
  }
  // increasing data: no dip, no negative coefficient
  {
    InitialData data = arctan_data(2, 0.1, +1.0);
    CharacteristicFlow flow(ScaleFactor::power_law(0.5), std::move(data));
    CHECK_THROWS_AS(blowup_certificate(flow, Vec::Zero(2), 1e4), ConfigError);
  }
  // one dimension: certificate time equals the scalar formula
  {
    InitialData data = arctan_data(1, 0.08, -1.0);
    CharacteristicFlow flow(ScaleFactor::power_law(0.3), std::move(data));
    Vec a(1);
    a[0] = 0.4;
    auto cert = blowup_certificate(flow, a, 1e9);
    CHECK(cert.t_cross ==
          doctest::Approx(scalar_blowup_time_1d(flow, 0.4)).epsilon(1e-6));
  }
}

TEST_CASE("symmetric decreasing data: tangent zero at the origin label, earlier "
          "transversal zeros at far labels") {
  // The closed form (1 - eps ln(1+t))^2 describes the origin label only. At
  // labels with one large and one vanishing component the Lorentz weighting
  // strengthens the contraction and the determinant crosses zero slightly
  // earlier. Pinned here so search boxes are chosen deliberately.
  InitialData data = arctan_data(2, 0.1, -1.0);
  CharacteristicFlow flow(ScaleFactor::power_law(0.5), std::move(data));
  const double t_origin = std::expm1(10.0);
  Vec corner(2);
  corner << 0.0, 5.0;
  CHECK(flow.jacobian(0.95 * t_origin, corner).det < 0.0);
  Vec near_origin(2);
  near_origin << 0.0, 0.25;
  CHECK(flow.jacobian(0.98 * t_origin, near_origin).det > 0.0);

  // neighborhood search reproduces the closed-form time within 1%
  BlowupSearch s;
  s.t_max = 1e6;
  s.grid = 21;
  s.t_samples = 64;
  s.alpha_lo = Vec::Constant(2, -0.5);
  s.alpha_hi = Vec::Constant(2, 0.5);
  BlowupReport rep = find_blowup_time(flow, s);
  CHECK(rep.verdict == BlowupReport::Verdict::blowup);
  REQUIRE(rep.t_blow.has_value());
  CHECK(std::abs(*rep.t_blow - t_origin) <= 0.01 * t_origin);
}

TEST_CASE("determinant search: zero data is certified global") {
  InitialData zero(2, 1.0, 0.3, profiles::zero(2), profiles::constant_density(2));
  CharacteristicFlow flow(ScaleFactor::power_law(0.5), std::move(zero));
  BlowupSearch s;
  s.t_max = 1e4;
  s.grid = 5;
  s.t_samples = 24;
  BlowupReport rep = find_blowup_time(flow, s);
  CHECK(rep.verdict == BlowupReport::Verdict::global);
  CHECK(rep.min_det_observed == doctest::Approx(1.0));
  CHECK_FALSE(rep.t_blow.has_value());
}

TEST_CASE("determinant search: transversal blowup in one dimension") {
  InitialData data = arctan_data(1, 0.1, -1.0);
  CharacteristicFlow flow(ScaleFactor::power_law(0.25), std::move(data));
  BlowupSearch s;
  s.t_max = 1e5;
  s.grid = 41;
  BlowupReport rep = find_blowup_time(flow, s);
  CHECK(rep.verdict == BlowupReport::Verdict::blowup);
  REQUIRE(rep.t_blow.has_value());
  // minimizing label 0: (1 + t)^{1/2} = 1 + (1 - 2l)/eps at l = 1/4
  const double expected = std::pow(1.0 + 0.5 / 0.1, 2.0) - 1.0;
  CHECK(*rep.t_blow == doctest::Approx(expected).epsilon(1e-6));
  CHECK(std::abs((*rep.alpha_star)[0]) < 0.05);
  CHECK(std::abs(rep.det_at_detection) <= 1e-6);
  CHECK(*rep.t_blow >= rep.analytic_bound);
  // determinant positive on the sampled trace before the detection
  for (const auto& [t, d] : rep.det_trace)
    if (t < *rep.t_blow) CHECK(d > 0.0);
}

TEST_CASE("determinant search: small data in fast regimes is certified global") {
  InitialData data = arctan_data(2, 1e-5, -1.0);
  CharacteristicFlow flow(ScaleFactor::exponential(1.0), std::move(data));
  BlowupSearch s;
  s.t_max = 1e6;
  s.grid = 9;
  s.t_samples = 48;
  BlowupReport rep = find_blowup_time(flow, s);
  CHECK(rep.verdict == BlowupReport::Verdict::global);
  CHECK(rep.min_det_observed > 0.99);
  CHECK(rep.certificate.find("epsilon1") != std::string::npos);
}

TEST_CASE("determinant search: identical reports for any worker count") {
  auto run_with = [&](int jobs) {
    InitialData data = arctan_data(2, 0.1, -1.0);
    CharacteristicFlow flow(ScaleFactor::power_law(0.5), std::move(data));
    BlowupSearch s;
    s.t_max = 1e6;
    s.grid = 11;
    s.t_samples = 48;
    s.alpha_lo = Vec::Constant(2, -0.25);
    s.alpha_hi = Vec::Constant(2, 0.25);
    s.jobs = jobs;
    return find_blowup_time(flow, s);
  };
  BlowupReport serial = run_with(1);
  BlowupReport threaded = run_with(3);
  REQUIRE(serial.verdict == threaded.verdict);
  REQUIRE(serial.t_blow.has_value());
  CHECK(*serial.t_blow == *threaded.t_blow);  // bitwise reproducible
  CHECK(serial.min_det_observed == threaded.min_det_observed);
  REQUIRE(serial.det_trace.size() == threaded.det_trace.size());
  for (std::size_t i = 0; i < serial.det_trace.size(); ++i)
    CHECK(serial.det_trace[i].second == threaded.det_trace[i].second);
}

TEST_CASE("determinant search: beyond-threshold fast-regime data stays undetermined") {
  InitialData data = arctan_data(2, 0.05, -1.0);
  CharacteristicFlow flow(ScaleFactor::exponential(1.0), std::move(data));
  BlowupSearch s;
  s.t_max = 1e4;
  s.grid = 9;
  s.t_samples = 48;
  BlowupReport rep = find_blowup_time(flow, s);
  // amplitude above the certified threshold but the determinant never dips:
  // numerics alone cannot certify global existence
  CHECK(rep.verdict == BlowupReport::Verdict::undetermined_horizon);
  CHECK(rep.min_det_observed > 0.5);
}
