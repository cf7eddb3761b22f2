#include <cmath>
#include <vector>

#include "doctest.h"
#include "l1geom/specfun.hpp"
#include "oracles.hpp"

using namespace l1geom;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("gauss_cdf matches the independent erf evaluation across the domain") {
  // Phi(x) = erfc(-x/sqrt2)/2; the reference erf comes from series + fraction.
  for (double x = -36.0; x <= 8.0; x += 0.37) {
    const double ref = x <= 0.0
                           ? 0.5 * oracle::erfcx_reference(-x * 0.70710678118654752440) *
                                 std::exp(-0.5 * x * x)
                           : 0.5 * (1.0 + oracle::erf_reference(x * 0.70710678118654752440));
    CHECK(specfun::gauss_cdf(x) == doctest::Approx(ref).epsilon(1e-11));
  }
  CHECK(specfun::gauss_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("gauss_cdf stays positive, monotone, and complementary in the deep tail") {
  double prev = 0.0;
  for (double x = -37.0; x <= 37.0; x += 0.5) {
    const double v = specfun::gauss_cdf(x);
    CHECK(v > 0.0);
    CHECK(v >= prev);
    CHECK(specfun::gauss_cdf(-x) == doctest::Approx(1.0 - v).epsilon(1e-12));
    prev = v;
  }
}

TEST_CASE("gauss_pdf is the standard normal density") {
  CHECK(specfun::gauss_pdf(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * kPi)).epsilon(1e-15));
  for (double x : {-3.0, -1.0, 0.5, 2.0, 7.0}) {
    CHECK(specfun::gauss_pdf(x) ==
          doctest::Approx(std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi)).epsilon(1e-14));
    CHECK(specfun::gauss_pdf(x) == doctest::Approx(specfun::gauss_pdf(-x)).epsilon(1e-15));
  }
}

TEST_CASE("half_normal_cdf equals erf and integrates its own density") {
  for (double x = 0.0; x <= 6.0; x += 0.23) {
    CHECK(specfun::half_normal_cdf(x) == doctest::Approx(oracle::erf_reference(x)).epsilon(1e-12));
  }
  // derivative check: centred difference of the cdf against the density
  for (double x : {0.2, 0.7, 1.3, 2.4}) {
    const double h = 1e-6;
    const double numeric =
        (specfun::half_normal_cdf(x + h) - specfun::half_normal_cdf(x - h)) / (2.0 * h);
    CHECK(numeric == doctest::Approx(specfun::half_normal_pdf(x)).epsilon(1e-7));
  }
  CHECK(specfun::half_normal_pdf(0.0) == doctest::Approx(2.0 / std::sqrt(kPi)).epsilon(1e-15));
}

TEST_CASE("binary_entropy endpoints, symmetry, and maximum") {
  CHECK(specfun::binary_entropy(0.0) == 0.0);
  CHECK(specfun::binary_entropy(1.0) == 0.0);
  CHECK(specfun::binary_entropy(0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  for (double p : {0.01, 0.11, 0.3, 0.49}) {
    const double direct = -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
    CHECK(specfun::binary_entropy(p) == doctest::Approx(direct).epsilon(1e-14));
    CHECK(specfun::binary_entropy(p) ==
          doctest::Approx(specfun::binary_entropy(1.0 - p)).epsilon(1e-14));
    CHECK(specfun::binary_entropy(p) < std::log(2.0));
  }
}

TEST_CASE("erfcx agrees with the continued-fraction reference without underflow") {
  for (double z = 0.0; z <= 30.0; z += 0.61) {
    CHECK(specfun::erfcx(z) == doctest::Approx(oracle::erfcx_reference(z)).epsilon(1e-11));
  }
  // asymptotic shape: z erfcx(z) sqrt(pi) -> 1
  CHECK(200.0 * specfun::erfcx(200.0) * std::sqrt(kPi) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("mills_factor interpolates between its limits and matches the direct ratio") {
  // m(s) = Phi(s) |s| / phi(s), computable directly in the moderate range
  for (double s = -8.0; s <= -0.1; s += 0.21) {
    const double direct = specfun::gauss_cdf(s) * std::fabs(s) / specfun::gauss_pdf(s);
    CHECK(specfun::mills_factor(s) == doctest::Approx(direct).epsilon(1e-11));
  }
  CHECK(specfun::mills_factor(-1e-8) < 1e-7);
  CHECK(specfun::mills_factor(-40.0) ==
        doctest::Approx(1.0 - 1.0 / 1600.0 + 3.0 / (1600.0 * 1600.0)).epsilon(1e-8));
  double prev = 1.0;
  for (double s = -40.0; s <= -0.05; s += 0.5) {
    const double v = specfun::mills_factor(s);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    CHECK(v <= prev + 1e-15);  // decreasing toward s -> 0-
    prev = v;
  }
}

TEST_CASE("half-normal cumulant matches brute-force quadrature over nine decades") {
  for (double s : {-0.1, -0.5, -2.0, -5.0, -20.0, -100.0, -1000.0}) {
    const double ref = oracle::half_normal_cumulant_quadrature(s);
    CHECK(specfun::cumulant_half_normal(s) == doctest::Approx(ref).epsilon(1e-9));
  }
  // far tail: lambda(s) = log(sqrt(2/pi)/|s|) + O(s^-2)
  const double far = specfun::cumulant_half_normal(-1e6);
  CHECK(far == doctest::Approx(std::log(std::sqrt(2.0 / kPi) / 1e6)).epsilon(1e-9));
  CHECK(specfun::cumulant_half_normal(0.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("cumulant derivatives agree with centred differences of the cumulant") {
  for (double s : {-0.3, -1.5, -4.0, -12.0, -50.0, -400.0}) {
    const double h = std::max(1e-6, 1e-7 * std::fabs(s));
    const double d1 =
        (specfun::cumulant_half_normal(s + h) - specfun::cumulant_half_normal(s - h)) / (2.0 * h);
    CHECK(specfun::cumulant_half_normal_derivative(s) == doctest::Approx(d1).epsilon(1e-6));
    const double d2 = (specfun::cumulant_half_normal_derivative(s + h) -
                       specfun::cumulant_half_normal_derivative(s - h)) /
                      (2.0 * h);
    CHECK(specfun::cumulant_half_normal_second_derivative(s) == doctest::Approx(d2).epsilon(1e-5));
  }
  // derivative is the tilted mean: positive, decreasing, limits sqrt(2/pi) and 0
  CHECK(specfun::cumulant_half_normal_derivative(0.0) ==
        doctest::Approx(specfun::kHalfNormalMean).epsilon(1e-12));
  double prev = specfun::kHalfNormalMean;
  for (double s = -0.5; s >= -64.0; s *= 2.0) {
    const double v = specfun::cumulant_half_normal_derivative(s);
    CHECK(v > 0.0);
    CHECK(v < prev);
    prev = v;
  }
  // deep-tail mean ~ 1/|s|
  CHECK(specfun::cumulant_half_normal_derivative(-1e5) * 1e5 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("rate_function satisfies exact Legendre duality at every probe") {
  for (double y = 0.02; y < specfun::kHalfNormalMean; y += 0.05) {
    const auto s = specfun::rate_function(y);
    CHECK(s.y == y);
    // duality identity: lambda*(y) = s y - lambda(s) at the dual point
    const double recon = s.s * y - specfun::cumulant_half_normal(s.s);
    CHECK(s.lambda_star == doctest::Approx(recon).epsilon(1e-10));
    // stationarity: lambda'(s) = y
    CHECK(specfun::cumulant_half_normal_derivative(s.s) == doctest::Approx(y).epsilon(1e-8));
    CHECK(s.lambda_star >= 0.0);
    CHECK(s.s < 0.0);
    CHECK(s.m_of_s > 0.0);
    CHECK(s.m_of_s < 1.0);
  }
}

TEST_CASE("rate_function values match an independent golden-section transform") {
  for (double y : {0.05, 0.1, 0.3, 0.5, 0.7, 0.78}) {
    const double ref = oracle::rate_function_reference(y);
    CHECK(specfun::rate_function(y).lambda_star == doctest::Approx(ref).epsilon(1e-7));
  }
}

TEST_CASE("rate_function is convex, decreasing, and vanishes at the mean") {
  std::vector<double> ys, vals;
  for (double y = 0.01; y <= 0.79; y += 0.013) {
    ys.push_back(y);
    vals.push_back(specfun::rate_function(y).lambda_star);
  }
  for (std::size_t i = 1; i < vals.size(); ++i) CHECK(vals[i] <= vals[i - 1] + 1e-12);
  for (std::size_t i = 1; i + 1 < vals.size(); ++i) {
    CHECK(vals[i] <= 0.5 * (vals[i - 1] + vals[i + 1]) + 1e-10);
  }
  CHECK(specfun::rate_function(specfun::kHalfNormalMean - 1e-9).lambda_star < 1e-8);
  // blow-up toward zero mean
  CHECK(specfun::rate_function(1e-4).lambda_star > specfun::rate_function(1e-3).lambda_star);
  CHECK(specfun::rate_function(1e-3).lambda_star > specfun::rate_function(1e-2).lambda_star);
}

TEST_CASE("rate_function survives extreme small-mean queries") {
  // these probe the deep-tail dual branch used by the exponent minimizer
  for (double y : {1e-3, 1e-4, 5e-5}) {
    const auto s = specfun::rate_function(y);
    CHECK(std::isfinite(s.lambda_star));
    CHECK(specfun::cumulant_half_normal_derivative(s.s) == doctest::Approx(y).epsilon(1e-7));
    CHECK(s.s < -1.0 / y * 0.5);  // dual point scales like -1/y
  }
}
