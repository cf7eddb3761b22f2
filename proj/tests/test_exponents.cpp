#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "l1geom/exponents.hpp"
#include "l1geom/specfun.hpp"
#include "l1geom/thresholds.hpp"
#include "oracles.hpp"

using namespace l1geom;
using exponents::NetExponentParams;
using exponents::RobustnessMode;

namespace {

NetExponentParams params(double rho, double delta, double c, RobustnessMode mode) {
  NetExponentParams p;
  p.rho = rho;
  p.delta = delta;
  p.c_factor = c;
  p.mode = mode;
  return p;
}

}  // namespace

TEST_CASE("parameter validation rejects out-of-range configurations") {
  CHECK_THROWS_AS(params(0.0, 0.5, 1.0, RobustnessMode::strong).validate(), std::domain_error);
  CHECK_THROWS_AS(params(1.5, 0.5, 1.0, RobustnessMode::strong).validate(), std::domain_error);
  CHECK_THROWS_AS(params(0.5, 0.0, 1.0, RobustnessMode::strong).validate(), std::domain_error);
  CHECK_THROWS_AS(params(0.5, 1.5, 1.0, RobustnessMode::strong).validate(), std::domain_error);
  CHECK_THROWS_AS(params(0.5, 0.5, 0.5, RobustnessMode::strong).validate(), std::domain_error);
  CHECK_NOTHROW(params(0.5, 0.5, 1.0, RobustnessMode::weak).validate());
}

TEST_CASE("mode names round-trip") {
  for (auto mode : {RobustnessMode::weak, RobustnessMode::sectional, RobustnessMode::strong}) {
    CHECK(exponents::mode_from_string(exponents::to_string(mode)) == mode);
  }
  CHECK_THROWS_AS((void)exponents::mode_from_string("bogus"), std::invalid_argument);
}

TEST_CASE("weight transforms reduce to the plain ratio at C = 1") {
  const auto p = params(0.3, 0.5, 1.0, RobustnessMode::strong);
  for (double nu = 0.5; nu <= 1.0; nu += 0.1) {
    CHECK(exponents::nu_prime_of(nu, p) == doctest::Approx(nu).epsilon(1e-14));
    CHECK(exponents::gamma_prime_of(nu, p) == doctest::Approx(p.zeta() / nu).epsilon(1e-14));
  }
}

TEST_CASE("weight transforms satisfy their defining algebra for general C") {
  const auto p = params(0.2, 0.6, 2.5, RobustnessMode::strong);
  const double c2 = 2.5 * 2.5;
  for (double nu = 0.6; nu <= 1.0; nu += 0.08) {
    const double zeta = p.zeta();
    CHECK(exponents::nu_prime_of(nu, p) ==
          doctest::Approx((c2 - 1.0) * zeta + nu).epsilon(1e-14));
    const double gp = exponents::gamma_prime_of(nu, p);
    CHECK(gp == doctest::Approx(zeta / ((c2 - 1.0) / c2 * zeta + nu / c2)).epsilon(1e-14));
    CHECK(gp > 0.0);
    CHECK(gp <= 1.0 + 1e-14);
  }
}

TEST_CASE("outward saddle point satisfies its defining equation") {
  const auto p = params(0.15, 0.4, 2.0, RobustnessMode::strong);
  for (double nu = 0.45; nu < 1.0; nu += 0.1) {
    const double np = exponents::nu_prime_of(nu, p);
    const double x = exponents::solve_x_nu(nu, np);
    REQUIRE(x > 0.0);
    // residual of 2 x G(x)/g(x) = (1 - nu)/nu' with independent erf/density
    const double g_cdf = oracle::erf_reference(x);
    const double g_pdf = 2.0 / std::sqrt(3.14159265358979323846) * std::exp(-x * x);
    CHECK(2.0 * x * g_cdf / g_pdf == doctest::Approx((1.0 - nu) / np).epsilon(1e-9));
  }
  CHECK(exponents::solve_x_nu(1.0, 1.0) == 0.0);
}

TEST_CASE("outward exponent vanishes at the top and is positive inside") {
  const auto p = params(0.1, 0.3, 1.0, RobustnessMode::strong);
  CHECK(exponents::psi_ext(1.0, p) == doctest::Approx(0.0).epsilon(1e-12));
  // decreasing toward nu = 1 on the right shoulder; positive everywhere inside
  // (the left side bends back down, psi_ext ~ nu log(1/nu) for small nu)
  double prev = 0.0;
  for (double nu = 1.0; nu >= 0.6; nu -= 0.05) {
    const double v = exponents::psi_ext(nu, p);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  for (double nu = 0.3; nu < 1.0; nu += 0.05) CHECK(exponents::psi_ext(nu, p) > 0.0);
  CHECK(exponents::psi_ext_curvature(0.5, p) > 0.0);
}

TEST_CASE("section minimizer satisfies the stationarity identity in closed form") {
  /* At the minimizer of xi(y) = ((1-g)/g) y^2/2 + lambda*(y):
   *   xi_min = -y^2 (1-g)/(2g) - log(2/pi)/2 + log(y/g),
   * a consequence of the dual relation phi/Phi = y - s. */
  for (double gp : {0.05, 0.2, 0.5, 0.8, 0.95}) {
    const auto xm = exponents::minimize_xi(gp);
    REQUIRE(xm.y_min > 0.0);
    REQUIRE(xm.y_min < specfun::kHalfNormalMean);
    const double closed = -0.5 * xm.y_min * xm.y_min * (1.0 - gp) / gp -
                          0.5 * std::log(2.0 / 3.14159265358979323846) +
                          std::log(xm.y_min / gp);
    CHECK(xm.xi_min == doctest::Approx(closed).epsilon(1e-10));
    // the dual point reproduces the tilt equation lambda'(s) = y
    CHECK(specfun::cumulant_half_normal_derivative(xm.s_dual) ==
          doctest::Approx(xm.y_min).epsilon(1e-8));
  }
  const auto degenerate = exponents::minimize_xi(1.0);
  CHECK(degenerate.y_min == doctest::Approx(specfun::kHalfNormalMean).epsilon(1e-12));
  CHECK(degenerate.xi_min == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("section exponent interpolates between its endpoint laws") {
  const auto p = params(0.1, 0.5, 1.0, RobustnessMode::strong);
  // at nu = zeta the section has no mass and the exponent vanishes
  CHECK(exponents::psi_int(p.zeta(), p) == doctest::Approx(0.0).epsilon(1e-12));
  // positive and increasing in nu beyond that
  double prev = 0.0;
  for (double nu = p.zeta() + 0.05; nu <= 1.0; nu += 0.05) {
    const double v = exponents::psi_int(nu, p);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
}

TEST_CASE("combinatorial exponents match exact binomial counts at finite n") {
  const long n = 4000;
  const long k = 80;    // zeta = 0.02
  const long l = 800;   // nu = 0.2
  const double zeta = static_cast<double>(k) / n;
  const double nu = static_cast<double>(l) / n;
  const double log2 = std::log(2.0);

  const double weak_count = (oracle::log_binomial(n - k, l - k) + (l - k) * log2) / n;
  const double sectional_count = weak_count + static_cast<double>(k) / n * log2;
  const double strong_count = sectional_count + oracle::log_binomial(n, k) / n;

  for (double c : {1.0, 2.0}) {
    // parameters realizing the wanted zeta with delta = 0.5
    const auto pw = params(zeta / 0.5, 0.5, c, RobustnessMode::weak);
    const auto ps = params(zeta / 0.5, 0.5, c, RobustnessMode::sectional);
    const auto pst = params(zeta / 0.5, 0.5, c, RobustnessMode::strong);
    CHECK(exponents::combinatorial_exponent(nu, pw) ==
          doctest::Approx(weak_count).epsilon(0.01));
    CHECK(exponents::combinatorial_exponent(nu, ps) ==
          doctest::Approx(sectional_count).epsilon(0.01));
    CHECK(exponents::combinatorial_exponent(nu, pst) ==
          doctest::Approx(strong_count).epsilon(0.01));
    // the full-form growth exponent equals the strong-mode count
    CHECK(exponents::psi_com(nu, pst) == doctest::Approx(strong_count).epsilon(0.01));
  }
}

TEST_CASE("net exponent is the advertised combination") {
  for (auto mode : {RobustnessMode::weak, RobustnessMode::sectional, RobustnessMode::strong}) {
    const auto p = params(0.1, 0.5, 2.0, mode);
    for (double nu = 0.55; nu < 1.0; nu += 0.1) {
      const double recon = exponents::combinatorial_exponent(nu, p) - exponents::psi_int(nu, p) -
                           exponents::psi_ext(nu, p);
      CHECK(exponents::psi_net(nu, p) == doctest::Approx(recon).epsilon(1e-13));
    }
  }
}

TEST_CASE("net exponent ordering follows the nested failure events") {
  // weak <= sectional <= strong pointwise: each mode adds counting mass
  const auto pw = params(0.15, 0.5, 2.0, RobustnessMode::weak);
  const auto ps = params(0.15, 0.5, 2.0, RobustnessMode::sectional);
  const auto pst = params(0.15, 0.5, 2.0, RobustnessMode::strong);
  for (double nu = 0.5; nu < 1.0; nu += 0.04) {
    const double w = exponents::psi_net(nu, pw);
    const double s = exponents::psi_net(nu, ps);
    const double st = exponents::psi_net(nu, pst);
    CHECK(w <= s + 1e-13);
    CHECK(s <= st + 1e-13);
  }
}

TEST_CASE("per-support maximum saturates at zero beyond the critical point") {
  /* The face weights sum to one over the whole boundary, so the supremum of
   * the per-support net exponent is exactly zero once its unconstrained peak
   * enters the feasible window: the transition is negative -> zero, never
   * negative -> positive.  This pins all three exponent pieces at once. */
  for (double rho : {0.95, 0.97, 0.999}) {
    const auto m = thresholds::max_net_exponent(rho, 0.99, 1.0, RobustnessMode::weak);
    CHECK(std::fabs(m.value) < 1e-12);
    CHECK(m.nu_star > 0.99);
    CHECK(m.nu_star < 1.0);
  }
  // below the critical point the maximum is strictly negative
  const auto below = thresholds::max_net_exponent(0.7, 0.99, 1.0, RobustnessMode::weak);
  CHECK(below.value < -1e-6);
}

TEST_CASE("breakdown series covers the window deterministically for any worker count") {
  const auto p = params(0.1, 0.5, 2.0, RobustnessMode::strong);
  const auto one = exponents::exponent_breakdown_series(p, 33, 1);
  const auto three = exponents::exponent_breakdown_series(p, 33, 3);
  REQUIRE(one.size() == 33);
  REQUIRE(three.size() == 33);
  CHECK(one.front().nu == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(one.back().nu == doctest::Approx(1.0 - 1e-6).epsilon(1e-12));
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].nu == three[i].nu);
    CHECK(one[i].psi_net == three[i].psi_net);
    CHECK(one[i].psi_com == three[i].psi_com);
    CHECK(one[i].psi_int == three[i].psi_int);
    CHECK(one[i].psi_ext == three[i].psi_ext);
    CHECK(one[i].gamma_prime == three[i].gamma_prime);
    // stored fields are internally consistent
    CHECK(one[i].psi_net ==
          doctest::Approx(one[i].psi_com - one[i].psi_int - one[i].psi_ext).epsilon(1e-13));
  }
}
