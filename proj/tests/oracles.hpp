#pragma once

#include <cstdint>
#include <vector>

#include "l1geom/linalg.hpp"

/* Reference implementations used only by the test suites.  Each one computes
 * its quantity by a different method than the library (series / continued
 * fractions / brute-force quadrature / exhaustive enumeration / direct
 * simulation), so agreement is evidence rather than tautology. */
namespace oracle {

// erf(x): Maclaurin series below 2.5, Lentz continued fraction above.
double erf_reference(double x);

// exp(x^2) erfc(x) for x >= 0, via the same continued fraction (no underflow).
double erfcx_reference(double x);

// log E[exp(s|Z|)], Z ~ N(0,1), s <= 0, by composite Simpson quadrature.
double half_normal_cumulant_quadrature(double s);

// sup_{s<=0} (s y - lambda(s)) with the quadrature cumulant, golden section.
double rate_function_reference(double y);

// log C(n, k) as an explicit sum of logs.
double log_binomial(long n, long k);

/* Exact minimum of c.x over {x >= 0, Ax = b} by enumerating every basis
 * (use only for small m, n).  feasible = false when no vertex satisfies
 * the constraints; unbounded instances are the caller's responsibility. */
struct VertexLpResult {
  bool feasible = false;
  double value = 0.0;
  std::vector<double> point;
};
VertexLpResult vertex_lp_min(const l1geom::Matrix& a, const std::vector<double>& b,
                             const std::vector<double>& c);

/* Outward-cone fraction (1/sqrt(pi)) Int_0^inf e^{-x^2} erf(x/c0)^(n-l) dx by
 * direct simulation: (1/2) P(max_i |Y_i| <= X / c0) with X, Y_i independent
 * N(0, 1/2) magnitudes.  Returns the estimate; *stderr_out gets the binomial
 * standard error. */
double external_angle_simulation(int n, int k, int l, double c_factor, long samples,
                                 std::uint64_t seed, double* stderr_out);

/* P(X_2 + ... + X_{m+1} <= c X_1) with X_1 ~ N(0, 1/(2k)) and the rest
 * |N(0, 1/2)|, for m = 2, by two-dimensional composite Simpson quadrature. */
double two_halfnormal_vs_gaussian_quadrature(int k, double c_factor);

/* Best sampled value of  max sum_{i in K} signs_i w_i  over w in span(Z) with
 * ||w_Kbar||_1 <= 1: a feasible lower bound that converges to the maximum for
 * small basis dimension. */
double subspace_max_sampling(const l1geom::Matrix& z, const std::vector<std::size_t>& support,
                             const std::vector<int>& signs, long samples, std::uint64_t seed);

}  // namespace oracle
