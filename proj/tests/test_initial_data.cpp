#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flrw/initial_data.hpp"

#include <cmath>
#include <random>

using namespace flrw;

namespace {

Vec vec1(double x) {
  Vec v(1);
  v[0] = x;
  return v;
}

InitialData arctan_data(int n, double eps, double c = 1.0, double delta = 0.0,
                        double amplitude = 1.0) {
  return InitialData(n, c, eps, profiles::arctan(n, delta, amplitude),
                     profiles::gaussian_density(n));
}

// central differences of a vector map
Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& a, double h = 1e-5) {
  const int n = a.size();
  Mat out(f(a).size(), n);
  for (int j = 0; j < n; ++j) {
    Vec ap = a, am = a;
    ap[j] += h;
    am[j] -= h;
    out.col(j) = (f(ap) - f(am)) / (2.0 * h);
  }
  return out;
}

double fd_second(const std::function<double(const Vec&)>& f, const Vec& a, int j, int k,
                 double h = 3e-4) {
  if (j == k) {
    Vec ap = a, am = a;
    ap[j] += h;
    am[j] -= h;
    return (f(ap) - 2.0 * f(a) + f(am)) / (h * h);
  }
  Vec pp = a, pm = a, mp = a, mm = a;
  pp[j] += h; pp[k] += h;
  pm[j] += h; pm[k] -= h;
  mp[j] -= h; mp[k] += h;
  mm[j] -= h; mm[k] -= h;
  return (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
}

}  // namespace

TEST_CASE("boost transforms: anchor values") {
  // zero data
  InitialData zero(2, 1.0, 0.1, profiles::zero(2), profiles::constant_density(2));
  Vec a = Vec::Zero(2);
  CHECK(zero.eval_f0(a) == 0.0);
  CHECK(zero.eval_g0(a).norm() == 0.0);
  CHECK(zero.deriv_g0(a).norm() == 0.0);

  // |v0| = 1 at amplitude 0.1: f0 = 0.1 / sqrt(0.99)
  InitialData lin(1, 1.0, 0.1, profiles::linear(1, 1.0), profiles::constant_density(1));
  CHECK(lin.eval_f0(vec1(1.0)) == doctest::Approx(0.1 / std::sqrt(0.99)).epsilon(1e-12));

  // superluminal point evaluation errors out
  CHECK_THROWS_AS(InitialData(1, 1.0, 1.0, profiles::linear(1, 1.0),
                              profiles::constant_density(1))
                      .eval_f0(vec1(1.0)),
                  SuperluminalError);

  // 2-d: g0 keeps the direction of v0
  InitialData two(2, 1.0, 0.1, profiles::linear(2, 1.0), profiles::constant_density(2));
  Vec e1(2);
  e1 << 1.0, 0.0;
  Vec g = two.eval_g0(e1);
  CHECK(g[0] == doctest::Approx(0.1 / std::sqrt(0.99)).epsilon(1e-12));
  CHECK(g[1] == 0.0);
}

TEST_CASE("one dimension: signed transform, f0' at a zero of v0") {
  InitialData lin(1, 1.0, 0.1, profiles::linear(1, 1.0), profiles::constant_density(1));
  // d f0 / d alpha = c^2 eps v0' / (c^2 - eps^2 v0^2)^{3/2} -> 0.1 at alpha = 0
  CHECK(lin.deriv_f0(vec1(0.0))[0] == doctest::Approx(0.1).epsilon(1e-13));
  CHECK(lin.deriv_g0(vec1(0.0))(0, 0) == doctest::Approx(0.1).epsilon(1e-13));
  // signed transform coincides with g0
  for (double x : {-0.7, 0.0, 0.4, 1.3})
    CHECK(lin.eval_f0(vec1(x)) == doctest::Approx(lin.eval_g0(vec1(x))[0]).epsilon(1e-14));
}

TEST_CASE("|g0| = f0 and the sup bound on f0") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-4.0, 4.0);
  const double eps_by_dim[4] = {0.0, 0.1, 0.05, 0.03};
  for (int n : {1, 2, 3}) {
    const double eps = eps_by_dim[n];
    InitialData data = arctan_data(n, eps);
    const auto& norms = data.sup_norms();
    const double cap =
        eps * norms.M0 / std::sqrt(1.0 - eps * eps * norms.M0 * norms.M0);
    for (int i = 0; i < 60; ++i) {
      Vec a(n);
      for (int d = 0; d < n; ++d) a[d] = U(rng);
      const double f0 = data.eval_f0(a);
      CHECK(std::abs(data.eval_g0(a).norm() - std::abs(f0)) <= 1e-12 * (1.0 + std::abs(f0)));
      CHECK(std::abs(f0) <= cap);
    }
  }
}

TEST_CASE("first derivatives match finite differences") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0.2, 1.8);
  std::vector<VelocityProfile> profs2 = {profiles::arctan(2, 0.3), profiles::sine(2, 0.8),
                                         profiles::gaussian(2, 0.7)};
  for (const auto& prof : profs2) {
    InitialData data(2, 1.0, 0.12, prof, profiles::gaussian_density(2));
    for (int i = 0; i < 30; ++i) {
      Vec a(2);
      a << U(rng), U(rng);
      Mat fd = fd_jacobian([&](const Vec& x) { return data.eval_g0(x); }, a);
      Mat an = data.deriv_g0(a);
      CHECK((fd - an).cwiseAbs().maxCoeff() <= 1e-5 * (1.0 + an.cwiseAbs().maxCoeff()));

      Vec fdf = fd_jacobian([&](const Vec& x) { return vec1(data.eval_f0(x)); }, a).row(0);
      Vec anf = data.deriv_f0(a);
      CHECK((fdf - anf).cwiseAbs().maxCoeff() <= 1e-5 * (1.0 + anf.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("second derivatives match finite differences to 1e-6 relative") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> U(0.3, 1.5);
  InitialData data(2, 1.0, 0.12, profiles::arctan(2, 0.3), profiles::gaussian_density(2));
  for (int trial = 0; trial < 15; ++trial) {
    Vec a(2);
    a << U(rng), U(rng);
    Tensor3 an = data.deriv_g0_hessian(a);
    Mat anf = data.deriv_f0_hessian(a);
    double scale = 1.0;
    for (const Mat& m : an) scale = std::max(scale, m.cwiseAbs().maxCoeff());
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          const double fd = fd_second(
              [&](const Vec& x) { return data.eval_g0(x)[i]; }, a, j, k);
          CHECK(std::abs(fd - an[i](j, k)) <= 1e-6 * scale + 1e-7);
        }
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        const double fd = fd_second([&](const Vec& x) { return data.eval_f0(x); }, a, j, k);
        CHECK(std::abs(fd - anf(j, k)) <= 1e-6 * (1.0 + std::abs(anf(j, k))) + 1e-7);
      }
  }
}

TEST_CASE("constant data has vanishing transform derivatives") {
  // a profile with zero jacobian everywhere behaves like constant data
  VelocityProfile constant;
  constant.name = "constant";
  constant.value = [](const Vec& a) { return (0.3 * Vec::Ones(a.size())).eval(); };
  constant.jacobian = [](const Vec& a) { return Mat::Zero(a.size(), a.size()).eval(); };
  constant.hessian = [](const Vec& a) { return zero_tensor3(a.size()); };
  InitialData data(2, 1.0, 0.1, constant, profiles::constant_density(2));
  Vec a(2);
  a << 0.4, -1.2;
  CHECK(data.deriv_g0(a).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  CHECK(data.deriv_f0(a).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("declared and estimated norms") {
  InitialData zero(1, 1.0, 0.5, profiles::zero(1), profiles::constant_density(1));
  CHECK(zero.sup_norms().N0 == 0.0);
  CHECK(zero.sup_norms().Q0 == doctest::Approx(1.0));

  // arctan in one dimension: C^2 norm is pi/2 + 1 + 3 sqrt(3) / 8
  const double n0 = M_PI / 2 + 1.0 + 3.0 * std::sqrt(3.0) / 8.0;
  InitialData declared(1, 1.0, 0.1, profiles::arctan(1), profiles::gaussian_density(1), n0);
  CHECK_FALSE(declared.sup_norms().estimated);
  CHECK(declared.sup_norms().M0 == doctest::Approx(n0));

  InitialData estimated(1, 1.0, 0.1, profiles::arctan(1), profiles::gaussian_density(1));
  CHECK(estimated.sup_norms().estimated);
  CHECK(estimated.sup_norms().N0 <= n0 + 1e-9);  // sampling never exceeds the bound
  CHECK(estimated.sup_norms().N0 > 0.9 * n0);
}

TEST_CASE("amplitude guard: eps must stay below eps_max") {
  const double n0 = M_PI / 2 + 1.0 + 3.0 * std::sqrt(3.0) / 8.0;
  CHECK_THROWS_AS(InitialData(1, 1.0, 0.5, profiles::arctan(1),
                              profiles::gaussian_density(1), n0),
                  ConfigError);
  InitialData ok(1, 1.0, 0.2, profiles::arctan(1), profiles::gaussian_density(1), n0);
  CHECK(ok.eps_max() == doctest::Approx(0.9 / n0));
}
