#pragma once

namespace l1geom::specfun {

// mean of the standard half-normal |Z|, Z ~ N(0,1): sqrt(2/pi)
inline constexpr double kHalfNormalMean = 0.7978845608028653558798921198687;

// Standard normal CDF, evaluated through the scaled complement so the deep
// left tail (x down to about -37) keeps full absolute accuracy without
// underflowing to zero.
double gauss_cdf(double x);

// Standard normal density.
double gauss_pdf(double x);

// CDF of |Z| with Z ~ N(0, 1/2), i.e. erf(x).  Domain x >= 0.
double half_normal_cdf(double x);

// Density of the same law: (2/sqrt(pi)) exp(-x^2), x >= 0.
double half_normal_pdf(double x);

// Shannon entropy of a Bernoulli(p) in nats; exactly 0 at p = 0 and p = 1.
double binary_entropy(double p);

// Scaled complementary error function exp(z^2) erfc(z) for z >= 0.
double erfcx(double z);

// Tail factor m(s) defined by Phi(s) = m(s) * phi(s) / |s| for s < 0.
// Monotone from 0 (s -> 0-) to 1 (s -> -inf).
double mills_factor(double s);

// Cumulant generating function of the standard half-normal:
//   lambda(s) = s^2/2 + log(2 Phi(s)),   s <= 0,
// evaluated through mills_factor for s <= -10 to avoid cancellation.
double cumulant_half_normal(double s);

// d/ds of the cumulant: y(s) = s + phi(s)/Phi(s), computed in scaled form
// y(s) = |s| (1 - m(s))/m(s) for s <= -1.
double cumulant_half_normal_derivative(double s);

// second derivative of the cumulant (used in Newton safeguards)
double cumulant_half_normal_second_derivative(double s);

struct RateFunctionSample {
  double y;            // the queried mean value
  double s;            // dual point: the maximizer of s*y - lambda(s)
  double lambda_star;  // Legendre transform value at y
  double m_of_s;       // tail factor at the dual point
};

// Legendre transform of the half-normal cumulant at y in (0, sqrt(2/pi)).
// Solved by a safeguarded Newton iteration on lambda'(s) = y over the
// bracket [-1e4, -1e-12]; duality residual below 1e-10.
RateFunctionSample rate_function(double y);

}  // namespace l1geom::specfun
