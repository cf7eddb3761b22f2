#include "l1geom/specfun.hpp"

#include <cmath>
#include <stdexcept>

namespace l1geom::specfun {

namespace {
constexpr double kSqrtPi = 1.7724538509055160272981674833411;
constexpr double kSqrt2 = 1.4142135623730950488016887242097;
constexpr double kLogSqrtTwoPi = 0.91893853320467274178032973640562;  // log sqrt(2 pi)
constexpr double kLogSqrtPiOverTwo = 0.22579135264472743236309761494744;  // log sqrt(pi/2)

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw std::domain_error(what);
}
}  // namespace

double gauss_cdf(double x) {
  require_finite(x, "gauss_cdf: argument must be finite");
  return 0.5 * std::erfc(-x / kSqrt2);
}

double gauss_pdf(double x) {
  return std::exp(-0.5 * x * x - kLogSqrtTwoPi);
}

double half_normal_cdf(double x) {
  require_finite(x, "half_normal_cdf: argument must be finite");
  if (x < 0.0) throw std::domain_error("half_normal_cdf: argument must be nonnegative");
  return std::erf(x);
}

double half_normal_pdf(double x) {
  if (x < 0.0) throw std::domain_error("half_normal_pdf: argument must be nonnegative");
  return (2.0 / kSqrtPi) * std::exp(-x * x);
}

double binary_entropy(double p) {
  require_finite(p, "binary_entropy: argument must be finite");
  if (p < 0.0 || p > 1.0) throw std::domain_error("binary_entropy: argument outside [0,1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
}

double erfcx(double z) {
  if (z < 0.0) throw std::domain_error("erfcx: argument must be nonnegative");
  if (z <= 5.0) return std::exp(z * z) * std::erfc(z);
  /* Laplace continued fraction for sqrt(pi) e^{z^2} erfc(z):
   *   1/(z + (1/2)/(z + 1/(z + (3/2)/(z + 2/(z + ...)))))
   * converges very fast for z > 5. */
  double f = 0.0;
  for (int k = 24; k >= 1; --k) f = (0.5 * k) / (z + f);
  return 1.0 / (kSqrtPi * (z + f));
}

double mills_factor(double s) {
  if (!(s < 0.0)) throw std::domain_error("mills_factor: argument must be negative");
  const double z = -s;
  // |s| Phi(s)/phi(s) = z * erfcx(z/sqrt2) * sqrt(pi/2)
  return z * erfcx(z / kSqrt2) * (kSqrtPi / kSqrt2);
}

double cumulant_half_normal(double s) {
  require_finite(s, "cumulant_half_normal: argument must be finite");
  if (s > 0.0) throw std::domain_error("cumulant_half_normal: argument must be <= 0");
  if (s == 0.0) return 0.0;
  if (s > -10.0) return 0.5 * s * s + std::log(2.0 * gauss_cdf(s));
  // deep tail: lambda(s) = -log|s| - log sqrt(pi/2) + log m(s)
  return -std::log(-s) - kLogSqrtPiOverTwo + std::log(mills_factor(s));
}

double cumulant_half_normal_derivative(double s) {
  require_finite(s, "cumulant_half_normal_derivative: argument must be finite");
  if (s > 0.0) throw std::domain_error("cumulant_half_normal_derivative: argument must be <= 0");
  if (s == 0.0) return kHalfNormalMean;
  if (s > -1.0) return s + gauss_pdf(s) / gauss_cdf(s);
  if (s > -30.0) {
    const double m = mills_factor(s);
    return -s * (1.0 - m) / m;
  }
  /* s + phi/Phi cancels catastrophically for large |s|; use the tail series
   * lambda'(-z) = (1 - 2/z^2 + 10/z^4 - 74/z^6 + 706/z^8)/z instead. */
  const double z = -s, t = 1.0 / (z * z);
  return (1.0 + t * (-2.0 + t * (10.0 + t * (-74.0 + t * 706.0)))) / z;
}

double cumulant_half_normal_second_derivative(double s) {
  if (s > 0.0) throw std::domain_error("cumulant_half_normal_second_derivative: argument must be <= 0");
  if (s <= -30.0) {  // tail series; the direct form is pure cancellation here
    const double z = -s, t = 1.0 / (z * z);
    return t * (1.0 + t * (-6.0 + t * (50.0 - t * 518.0)));
  }
  double r;  // phi(s)/Phi(s)
  if (s == 0.0) {
    r = kHalfNormalMean;
  } else if (s > -1.0) {
    r = gauss_pdf(s) / gauss_cdf(s);
  } else {
    r = -s / mills_factor(s);
  }
  return 1.0 - s * r - r * r;
}

RateFunctionSample rate_function(double y) {
  require_finite(y, "rate_function: argument must be finite");
  if (y <= 0.0 || y >= kHalfNormalMean)
    throw std::domain_error("rate_function: argument must lie strictly inside (0, sqrt(2/pi))");

  // lambda' is increasing with lambda'(-z) ~ 1/z, so -4/y is safely left of the
  // root; the right end sits near 0 where lambda' approaches the mean
  double lo = -std::max(16.0, 4.0 / y), hi = -1e-12;
  // initial guess: near the mean use the local quadratic, deep tail use y ~ 1/|s|
  double s = (y > 0.6) ? (y - kHalfNormalMean) / 0.36338 : -1.0 / y;
  if (s <= lo) s = 0.5 * lo;
  if (s >= hi) s = 2.0 * hi;

  double fs = cumulant_half_normal_derivative(s) - y;
  for (int iter = 0; iter < 200; ++iter) {
    if (std::fabs(fs) < 1e-12) break;
    if (fs > 0.0) hi = s; else lo = s;
    const double dfs = cumulant_half_normal_second_derivative(s);
    double step = dfs > 0.0 ? s - fs / dfs : 0.5 * (lo + hi);
    if (!(step > lo && step < hi)) step = 0.5 * (lo + hi);
    s = step;
    fs = cumulant_half_normal_derivative(s) - y;
  }
  if (std::fabs(fs) > 1e-10)
    throw std::runtime_error("rate_function: dual solve failed to converge");

  RateFunctionSample out;
  out.y = y;
  out.s = s;
  out.lambda_star = s * y - cumulant_half_normal(s);
  out.m_of_s = mills_factor(s);
  return out;
}

}  // namespace l1geom::specfun
