#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "l1geom/thresholds.hpp"

using namespace l1geom;
using exponents::RobustnessMode;
using thresholds::BracketStatus;

TEST_CASE("critical sparsity anchors at delta = 0.5555") {
  SUBCASE("C = 1") {
    const auto r = thresholds::critical_rho(0.5555, 1.0, RobustnessMode::strong);
    CHECK(r.zeta == doctest::Approx(0.052756).epsilon(2e-4));
    CHECK(r.zeta > 0.048);
    CHECK(r.zeta < 0.058);
    CHECK(r.status == BracketStatus::bracketed);
    CHECK(r.cert_below < -1e-10);
    CHECK(r.cert_above >= -1e-10);
  }
  SUBCASE("C = 2") {
    const auto r = thresholds::critical_rho(0.5555, 2.0, RobustnessMode::strong);
    CHECK(r.zeta == doctest::Approx(0.0265307).epsilon(2e-4));
    CHECK(r.zeta > 0.024);
    CHECK(r.zeta < 0.029);
    CHECK(r.status == BracketStatus::bracketed);
  }
}

TEST_CASE("robustness modes order the critical point as nested conditions") {
  const auto weak = thresholds::critical_rho(0.99, 1.0, RobustnessMode::weak);
  const auto sectional = thresholds::critical_rho(0.99, 1.0, RobustnessMode::sectional);
  const auto strong = thresholds::critical_rho(0.99, 1.0, RobustnessMode::strong);
  CHECK(weak.rho_star == doctest::Approx(0.883698).epsilon(5e-4));
  CHECK(sectional.rho_star == doctest::Approx(0.340065).epsilon(5e-4));
  CHECK(strong.rho_star == doctest::Approx(0.163582).epsilon(5e-4));
  CHECK(weak.rho_star >= sectional.rho_star);
  CHECK(sectional.rho_star >= strong.rho_star);
}

TEST_CASE("weak mode at wide aspect exceeds one half") {
  const auto r = thresholds::critical_rho(0.99, 2.0, RobustnessMode::weak);
  CHECK(r.rho_star > 0.5);
}

TEST_CASE("strong-mode cap and cross-factor lower bound over the grid") {
  for (double delta : {0.3, 0.5555, 0.8}) {
    std::vector<double> baseline;
    double prev_zeta = 1e9;
    for (double c : {1.0, 2.0, 5.0, 10.0}) {
      const auto r = thresholds::critical_rho(delta, c, RobustnessMode::strong);
      CHECK(r.rho_star <= 1.0 / (c + 1.0) + 1e-4);
      if (c == 1.0) baseline.push_back(r.rho_star);
      CHECK(r.rho_star >= baseline.front() / (c * c) - 1e-4);
      CHECK(r.zeta <= prev_zeta + 1e-12);  // nonincreasing in C
      prev_zeta = r.zeta;
      CHECK(r.zeta == doctest::Approx(r.rho_star * delta).epsilon(1e-12));
      CHECK(r.nu_argmax >= delta - 1e-12);
      CHECK(r.nu_argmax <= 1.0);
    }
  }
}

TEST_CASE("net-exponent maximum changes sign across the critical point") {
  const auto r = thresholds::critical_rho(0.5, 2.0, RobustnessMode::strong);
  const auto below = thresholds::max_net_exponent(r.rho_star - 5.0 * r.tol, 0.5, 2.0,
                                                  RobustnessMode::strong);
  const auto above = thresholds::max_net_exponent(r.rho_star + 5.0 * r.tol, 0.5, 2.0,
                                                  RobustnessMode::strong);
  CHECK(below.value < -1e-10);
  CHECK(above.value > -1e-10);
  CHECK(below.nu_star >= 0.5);
  CHECK(below.nu_star <= 1.0);
}

TEST_CASE("grid refinement is stable") {
  const auto coarse = thresholds::max_net_exponent(0.1, 0.5, 2.0, RobustnessMode::strong, 256);
  const auto fine = thresholds::max_net_exponent(0.1, 0.5, 2.0, RobustnessMode::strong, 1024);
  CHECK(coarse.value == doctest::Approx(fine.value).epsilon(1e-7));
}

TEST_CASE("identical threshold queries give identical results") {
  const auto a = thresholds::critical_rho(0.4, 1.5, RobustnessMode::strong);
  const auto b = thresholds::critical_rho(0.4, 1.5, RobustnessMode::strong);
  CHECK(a.rho_star == b.rho_star);
  CHECK(a.nu_argmax == b.nu_argmax);
  CHECK(a.cert_below == b.cert_below);
  CHECK(a.cert_above == b.cert_above);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("curve sweeps preserve order and worker invariance") {
  const std::vector<double> c_grid{1.0, 1.5, 2.0, 3.0};
  const auto serial = thresholds::threshold_curve(0.5, c_grid, RobustnessMode::strong, 1);
  const auto parallel = thresholds::threshold_curve(0.5, c_grid, RobustnessMode::strong, 3);
  REQUIRE(serial.size() == c_grid.size());
  REQUIRE(parallel.size() == c_grid.size());
  for (std::size_t i = 0; i < c_grid.size(); ++i) {
    CHECK(serial[i].c_factor == c_grid[i]);
    CHECK(serial[i].rho_star == parallel[i].rho_star);
    CHECK(serial[i].nu_argmax == parallel[i].nu_argmax);
    if (i > 0) CHECK(serial[i].zeta <= serial[i - 1].zeta + 1e-12);
  }
}

TEST_CASE("aspect sweeps run at fixed C") {
  const std::vector<double> deltas{0.3, 0.5, 0.7};
  const auto rows = thresholds::threshold_vs_delta(2.0, deltas, RobustnessMode::strong, 2);
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].delta == deltas[i]);
    CHECK(rows[i].c_factor == 2.0);
    CHECK(rows[i].rho_star > 0.0);
    CHECK(rows[i].rho_star <= 1.0 / 3.0 + 1e-4);
  }
}

TEST_CASE("parameter validation propagates") {
  CHECK_THROWS_AS((void)thresholds::critical_rho(0.0, 1.0, RobustnessMode::strong),
                  std::domain_error);
  CHECK_THROWS_AS((void)thresholds::critical_rho(0.5, 0.5, RobustnessMode::strong),
                  std::domain_error);
}
