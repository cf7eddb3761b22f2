#pragma once

#include <cstdint>
#include <vector>

namespace l1geom::polytope_geometry {

/* Face pair inside the weighted cross-polytope
 *   { y : ||y_K||_1 + ||y_Kbar||_1 / C <= 1 },
 * F the (k-1)-face on the support, G an (l-1)-face containing it.
 * l = n + 1 denotes the polytope itself in place of G. */
struct FaceSpec {
  int n;
  int k;
  int l;
  double c_factor;

  void validate() const;
  double alpha_prime() const { return 1.0 / (1.0 + c_factor * c_factor * k); }
  double theta() const { return c_factor * c_factor * k; }
  int m_prime() const { return l - k; }
};

enum class AngleMethod { closed_form, quadrature, mc_density, mc_subspace };

struct AngleEstimate {
  double value = 0.0;
  double stderr_est = 0.0;  // 0 for deterministic methods
  AngleMethod method = AngleMethod::closed_form;
  long samples_or_nodes = 0;
};

/* Outward-normal cone fraction of G inside the polytope: adaptive quadrature
 * of (1/sqrt(pi)) Int_0^inf exp(-x^2) G(x/c0)^(n-l) dx with
 * c0 = C sqrt(k + (l-k)/C^2); exact 1/2 when l = n, exactly 1 when l = n+1. */
AngleEstimate external_angle(const FaceSpec& spec);

/* Fraction of the sphere in G's span covered by the cone of G over F:
 * closed forms for l-k <= 2, otherwise a tilted-importance-sampling
 * Monte-Carlo evaluation of sqrt((a'(m'-1)+1)/(1-a')) 2^-m' E[exp(-W^2)]
 * with W a sum of m' half-normals of scale 1/sqrt(2 theta). */
AngleEstimate internal_angle(const FaceSpec& spec, long samples = 1'000'000,
                             std::uint64_t seed = 20240901);

// same estimator with the closed-form shortcut disabled (m' >= 1)
AngleEstimate internal_angle_mc(const FaceSpec& spec, long samples, std::uint64_t seed);

/* Cone fraction of the whole polytope over F:
 * P(X_2 + ... + X_{n-k+1} <= C k X_1), X_p half-normal of scale 1/sqrt2,
 * X_1 normal with variance 1/(2k).  Closed form arctan(C sqrt k)/pi when
 * n-k = 1, else plain Monte-Carlo. */
AngleEstimate internal_angle_full(int n, int k, double c_factor, long samples = 1'000'000,
                                  std::uint64_t seed = 20240902);

/* Failure odds of one outward face under a uniformly random (n-m)-subspace:
 * twice the sum over face dimensions l-1 = m+1+2s of
 * #faces(l) * beta(F,G_l) * gamma(G_l, P), including the terminal
 * dimension-n term 2 beta(F,P) when the parity reaches it. */
AngleEstimate complementary_grassmann_angle(int n, int m, int k, double c_factor,
                                            long mc_samples = 1'000'000,
                                            std::uint64_t seed = 20240903);

/* Direct simulation of the same quantity: sample an (n-m)-dimensional null
 * space basis, solve max 1.w_K s.t. ||w_Kbar||_1 <= 1 over the subspace, and
 * count trials exceeding 1/C (strictly, by 1e-9).  Per-trial generator
 * streams keyed by (seed, trial) keep the estimate reproducible for any
 * worker count.  Aborts if more than 0.1% of the trial LPs fail. */
AngleEstimate grassmann_angle_monte_carlo(int n, int m, int k, double c_factor, long trials,
                                          std::uint64_t seed, int jobs = 1);

}  // namespace l1geom::polytope_geometry
