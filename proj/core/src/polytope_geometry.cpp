#include "l1geom/polytope_geometry.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "l1geom/exponents.hpp"
#include "l1geom/linalg.hpp"
#include "l1geom/lp_core.hpp"
#include "l1geom/parallel.hpp"
#include "l1geom/rng.hpp"
#include "l1geom/specfun.hpp"

namespace l1geom::polytope_geometry {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kSqrtPi = 1.7724538509055160272981674833411;
constexpr double kLog2 = 0.69314718055994530941723212145818;

double binomial(int n, int r) {
  if (r < 0 || r > n) return 0.0;
  r = std::min(r, n - r);
  double v = 1.0;
  for (int i = 1; i <= r; ++i) v = v * (n - r + i) / i;
  return v;
}

/* N(mu,1) truncated to [0, inf) with mu <= 0: shift to a standard normal
 * conditioned on [a, inf), a = -mu.  Plain rejection for small a, Robert's
 * translated-exponential proposal otherwise. */
double truncated_normal_nonneg(CounterRng& rng, double mu) {
  const double a = -mu;
  if (a < 0.5) {
    for (;;) {
      const double z = rng.gaussian();
      if (z >= a) return z - a;
    }
  }
  const double alpha = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    const double z = a - std::log(rng.uniform()) / alpha;
    const double d = z - alpha;
    if (std::log(rng.uniform()) <= -0.5 * d * d) return z - a;
  }
}

struct SimpsonState {
  std::function<double(double)> f;
  long evals = 0;
  double eval(double x) {
    ++evals;
    return f(x);
  }
};

double adaptive_simpson(SimpsonState& st, double a, double fa, double m, double fm, double b,
                        double fb, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = st.eval(lm), frm = st.eval(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(st, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(st, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

double integrate(SimpsonState& st, double a, double b, double rel_tol) {
  const double m = 0.5 * (a + b);
  const double fa = st.eval(a), fm = st.eval(m), fb = st.eval(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double tol = rel_tol * std::max(std::fabs(whole), 1e-8);
  return adaptive_simpson(st, a, fa, m, fm, b, fb, whole, tol, 48);
}

}  // namespace

void FaceSpec::validate() const {
  if (k < 1) throw std::domain_error("FaceSpec: k must be >= 1");
  if (l < k) throw std::domain_error("FaceSpec: l must be >= k");
  if (l > n + 1) throw std::domain_error("FaceSpec: l must be <= n + 1");
  if (n < 1) throw std::domain_error("FaceSpec: n must be >= 1");
  if (!(c_factor >= 1.0)) throw std::domain_error("FaceSpec: c_factor must be >= 1");
}

AngleEstimate external_angle(const FaceSpec& spec) {
  spec.validate();
  if (spec.l == spec.n + 1) return {1.0, 0.0, AngleMethod::closed_form, 0};  // G is the polytope
  if (spec.l == spec.n) return {0.5, 0.0, AngleMethod::closed_form, 0};

  const int tail = spec.n - spec.l;  // number of squeezed coordinates
  const double c0 =
      spec.c_factor * std::sqrt(spec.k + (spec.l - spec.k) / (spec.c_factor * spec.c_factor));

  const auto big_f = [&](double x) {
    if (x <= 0.0) return std::numeric_limits<double>::infinity();
    return x * x - tail * std::log(specfun::half_normal_cdf(x / c0));
  };

  // unique interior minimum of the convex exponent
  double hi = 1.0;
  const auto slope = [&](double x) {
    const double u = x / c0;
    return 2.0 * x - tail / c0 * specfun::half_normal_pdf(u) / specfun::half_normal_cdf(u);
  };
  while (slope(hi) < 0.0) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (slope(mid) < 0.0) lo = mid; else hi = mid;
    if (hi - lo < 1e-12 * (1.0 + hi)) break;
  }
  const double xpeak = 0.5 * (lo + hi);
  const double fref = big_f(xpeak);

  // integration window: out to where the scaled integrand underflows
  double xmax = xpeak + 1.0;
  while (big_f(xmax) - fref <= 745.0) xmax = xpeak + 1.5 * (xmax - xpeak);

  SimpsonState st;
  st.f = [&](double x) {
    const double v = big_f(x) - fref;
    return v > 745.0 ? 0.0 : std::exp(-v);
  };
  const double i_left = xpeak > 1e-14 ? integrate(st, 0.0, xpeak, 1e-11) : 0.0;
  const double i_right = integrate(st, xpeak, xmax, 1e-11);

  AngleEstimate out;
  out.method = AngleMethod::quadrature;
  out.samples_or_nodes = st.evals;
  out.value = std::exp(-fref + std::log(i_left + i_right) - std::log(kSqrtPi));
  out.stderr_est = 0.0;
  return out;
}

AngleEstimate internal_angle(const FaceSpec& spec, long samples, std::uint64_t seed) {
  spec.validate();
  const int mp = spec.m_prime();
  if (mp == 0) return {1.0, 0.0, AngleMethod::closed_form, 0};
  if (mp == 1) return {0.5, 0.0, AngleMethod::closed_form, 0};
  if (mp == 2)
    return {std::acos(spec.alpha_prime()) / (2.0 * kPi), 0.0, AngleMethod::closed_form, 0};
  return internal_angle_mc(spec, samples, seed);
}

AngleEstimate internal_angle_mc(const FaceSpec& spec, long samples, std::uint64_t seed) {
  spec.validate();
  const int mp = spec.m_prime();
  if (mp < 1) throw std::domain_error("internal_angle_mc: needs l > k");
  if (samples < 100) throw std::invalid_argument("internal_angle_mc: too few samples");

  const double theta = spec.theta();
  const double ap = spec.alpha_prime();
  const double gamma_prime = theta / (mp + theta);
  const double sigma = 1.0 / std::sqrt(2.0 * theta);

  const auto xim = exponents::minimize_xi(gamma_prime);
  const double s_tilt = xim.s_dual;  // <= 0
  const double lam = specfun::cumulant_half_normal(s_tilt);

  /* importance sampling: each standard half-normal coordinate is tilted by
   * s_tilt (a truncated normal); the scaled weight
   *   exp(-W^2 - s_tilt * sumY + m' lambda(s_tilt) + m' xi_min)
   * is O(1) and maximal at the concentration point, so the average has
   * bounded relative variance. */
  double mean = 0.0, msq = 0.0;
  for (long j = 0; j < samples; ++j) {
    CounterRng rng(seed, static_cast<std::uint64_t>(j));
    double sum_y = 0.0;
    for (int i = 0; i < mp; ++i) sum_y += truncated_normal_nonneg(rng, s_tilt);
    const double w = sigma * sum_y;
    const double logv = -w * w - s_tilt * sum_y + mp * (lam + xim.xi_min);
    const double v = std::exp(logv);
    const double d = v - mean;
    mean += d / static_cast<double>(j + 1);
    msq += d * (v - mean);
  }
  const double variance = msq / (static_cast<double>(samples) - 1.0);
  const double se_mean = std::sqrt(variance / static_cast<double>(samples));

  const double log_prefactor = 0.5 * std::log((ap * (mp - 1) + 1.0) / (1.0 - ap));
  const double log_beta = log_prefactor - mp * (kLog2 + xim.xi_min) + std::log(mean);

  AngleEstimate out;
  out.method = AngleMethod::mc_density;
  out.samples_or_nodes = samples;
  out.value = std::exp(log_beta);
  out.stderr_est = mean > 0.0 ? out.value * (se_mean / mean) : 0.0;
  return out;
}

AngleEstimate internal_angle_full(int n, int k, double c_factor, long samples,
                                  std::uint64_t seed) {
  if (k < 1 || k >= n) throw std::domain_error("internal_angle_full: need 1 <= k < n");
  if (!(c_factor >= 1.0)) throw std::domain_error("internal_angle_full: c_factor must be >= 1");
  const int tail = n - k;
  if (tail == 1) {
    return {std::atan(c_factor * std::sqrt(static_cast<double>(k))) / kPi, 0.0,
            AngleMethod::closed_form, 0};
  }
  if (samples < 100) throw std::invalid_argument("internal_angle_full: too few samples");

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const double x1_scale = 1.0 / std::sqrt(2.0 * static_cast<double>(k));
  long hits = 0;
  for (long j = 0; j < samples; ++j) {
    CounterRng rng(seed, static_cast<std::uint64_t>(j));
    const double x1 = rng.gaussian() * x1_scale;
    double s = 0.0;
    for (int i = 0; i < tail; ++i) s += std::fabs(rng.gaussian()) * inv_sqrt2;
    if (s <= c_factor * k * x1) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  AngleEstimate out;
  out.method = AngleMethod::mc_density;
  out.samples_or_nodes = samples;
  out.value = p;
  out.stderr_est = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  return out;
}

AngleEstimate complementary_grassmann_angle(int n, int m, int k, double c_factor,
                                            long mc_samples, std::uint64_t seed) {
  if (!(1 <= k && k <= m && m < n)) throw std::domain_error("complementary_grassmann_angle: need 1 <= k <= m < n");
  if (!(c_factor >= 1.0))
    throw std::domain_error("complementary_grassmann_angle: c_factor must be >= 1");

  double total = 0.0;
  double var = 0.0;
  long samples_used = 0;
  bool stochastic = false;

  for (int l = m + 2; l <= n; l += 2) {
    const FaceSpec face{n, k, l, c_factor};
    const AngleEstimate beta = internal_angle(face, mc_samples, seed + static_cast<std::uint64_t>(l));
    const AngleEstimate gamma = external_angle(face);
    const double faces = binomial(n - k, l - k) * std::pow(2.0, l - k);
    total += 2.0 * faces * beta.value * gamma.value;
    const double se = 2.0 * faces * beta.stderr_est * gamma.value;
    var += se * se;
    samples_used += beta.samples_or_nodes + gamma.samples_or_nodes;
    if (beta.stderr_est > 0.0) stochastic = true;
  }

  if ((n + 1 - (m + 2)) % 2 == 0) {  // the sum's parity reaches dimension n: the polytope itself
    const AngleEstimate beta =
        internal_angle_full(n, k, c_factor, mc_samples, seed + static_cast<std::uint64_t>(n + 1));
    total += 2.0 * beta.value;
    var += 4.0 * beta.stderr_est * beta.stderr_est;
    samples_used += beta.samples_or_nodes;
    if (beta.stderr_est > 0.0) stochastic = true;
  }

  AngleEstimate out;
  out.method = stochastic ? AngleMethod::mc_density : AngleMethod::quadrature;
  out.samples_or_nodes = samples_used;
  out.value = std::min(1.0, std::max(0.0, total));
  out.stderr_est = std::sqrt(var);
  return out;
}

AngleEstimate grassmann_angle_monte_carlo(int n, int m, int k, double c_factor, long trials,
                                          std::uint64_t seed, int jobs) {
  if (!(0 <= k && k <= m && m < n))
    throw std::domain_error("grassmann_angle_monte_carlo: need 0 <= k <= m < n");
  if (!(c_factor >= 1.0))
    throw std::domain_error("grassmann_angle_monte_carlo: c_factor must be >= 1");
  if (trials < 100) throw std::invalid_argument("grassmann_angle_monte_carlo: need trials >= 100");

  AngleEstimate out;
  out.method = AngleMethod::mc_subspace;
  out.samples_or_nodes = trials;
  if (k == 0) return out;  // the empty face never fails

  const int d = n - m;
  const double threshold = 1.0 / c_factor + 1e-9;
  std::vector<std::size_t> support(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) support[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
  std::vector<int> signs(static_cast<std::size_t>(k), 1);

  std::atomic<long> hits{0};
  std::atomic<long> failures{0};
  parallel_for_index(static_cast<std::size_t>(trials), jobs, [&](std::size_t t) {
    CounterRng rng(seed, t);
    Matrix z(static_cast<std::size_t>(n), static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < z.rows(); ++i)
      for (std::size_t j = 0; j < z.cols(); ++j) z(i, j) = rng.gaussian();
    try {
      const auto res = lp_core::max_l1_on_subspace(z, support, signs);
      if (res.unbounded || res.value > threshold) hits.fetch_add(1, std::memory_order_relaxed);
    } catch (const std::exception&) {
      failures.fetch_add(1, std::memory_order_relaxed);
    }
  });

  const long bad = failures.load();
  if (bad * 1000 > trials)
    throw std::runtime_error("grassmann_angle_monte_carlo: trial LP failure rate above 0.1%");
  const long good = trials - bad;
  const double p = static_cast<double>(hits.load()) / static_cast<double>(good);
  out.value = p;
  out.stderr_est = std::sqrt(p * (1.0 - p) / static_cast<double>(good));
  out.samples_or_nodes = good;
  return out;
}

}  // namespace l1geom::polytope_geometry
