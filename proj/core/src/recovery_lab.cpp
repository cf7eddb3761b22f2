#include "l1geom/recovery_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "l1geom/lp_core.hpp"
#include "l1geom/parallel.hpp"
#include "l1geom/rng.hpp"

namespace l1geom::recovery_lab {

namespace {

constexpr double kSlack = 1e-9;
constexpr std::uint64_t kSeedStride = 0x9e3779b97f4a7c15ull;

std::vector<std::size_t> complement_of(const std::vector<std::size_t>& support, std::size_t n) {
  std::vector<bool> in_support(n, false);
  for (std::size_t i : support) in_support[i] = true;
  std::vector<std::size_t> out;
  out.reserve(n - support.size());
  for (std::size_t i = 0; i < n; ++i)
    if (!in_support[i]) out.push_back(i);
  return out;
}

double tail_bound(double c_factor, double delta_l1) {
  if (c_factor > 1.0) return 2.0 * (c_factor + 1.0) * delta_l1 / (c_factor - 1.0);
  return delta_l1 == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

/* Worst signed maximum over the support; the subspace is symmetric under
 * w -> -w, so the leading sign can be pinned positive. */
double worst_support_ratio(const Matrix& z, const std::vector<std::size_t>& support) {
  const int k = static_cast<int>(support.size());
  std::vector<int> signs(support.size(), 1);
  const long patterns = k >= 1 ? (1L << (k - 1)) : 1L;
  double worst = 0.0;
  for (long mask = 0; mask < patterns; ++mask) {
    for (int b = 1; b < k; ++b) signs[static_cast<std::size_t>(b)] = (mask >> (b - 1)) & 1 ? -1 : 1;
    const auto res = lp_core::max_l1_on_subspace(z, support, signs);
    if (res.unbounded) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, res.value);
  }
  return worst;
}

}  // namespace

MeasurementEnsemble sample_ensemble(int m, int n, std::uint64_t seed) {
  if (!(0 < m && m < n)) throw std::invalid_argument("sample_ensemble: need 0 < m < n");
  MeasurementEnsemble out;
  out.m = m;
  out.n = n;
  out.seed = seed;
  out.entries = Matrix(static_cast<std::size_t>(m), static_cast<std::size_t>(n));
  CounterRng rng(seed, 0);
  for (std::size_t i = 0; i < out.entries.rows(); ++i)
    for (std::size_t j = 0; j < out.entries.cols(); ++j) out.entries(i, j) = rng.gaussian();
  return out;
}

NullSpaceBasis null_space_basis(const MeasurementEnsemble& ensemble) {
  NullSpaceBasis out;
  out.source = BasisSource::from_matrix;
  out.basis = null_space_basis_qr(ensemble.entries);
  const Matrix& a = ensemble.entries;
  const Matrix& z = out.basis;
  double residual = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < z.cols(); ++j) {
      double acc = 0.0;
      for (std::size_t t = 0; t < a.cols(); ++t) acc += a(i, t) * z(t, j);
      residual = std::max(residual, std::fabs(acc));
    }
  if (residual >= 1e-8 * a.max_abs())
    throw std::runtime_error("null_space_basis: residual check failed");
  return out;
}

NullSpaceBasis direct_gaussian_basis(int n, int m, std::uint64_t seed) {
  if (!(0 < m && m < n)) throw std::invalid_argument("direct_gaussian_basis: need 0 < m < n");
  NullSpaceBasis out;
  out.source = BasisSource::direct_gaussian;
  out.basis = Matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(n - m));
  CounterRng rng(seed, 0);
  for (std::size_t i = 0; i < out.basis.rows(); ++i)
    for (std::size_t j = 0; j < out.basis.cols(); ++j) out.basis(i, j) = rng.gaussian();
  return out;
}

ApproxSparseSignal generate_signal(int n, int k, double head_magnitude, double tail_l1,
                                   std::uint64_t seed) {
  if (!(0 <= k && k < n)) throw std::invalid_argument("generate_signal: need 0 <= k < n");
  if (!(head_magnitude > 0.0)) throw std::invalid_argument("generate_signal: head_magnitude <= 0");
  if (!(tail_l1 >= 0.0)) throw std::invalid_argument("generate_signal: tail_l1 < 0");

  CounterRng rng(seed, 0);
  std::vector<std::size_t> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (int i = 0; i < k; ++i) {
    const std::size_t j = static_cast<std::size_t>(i) +
                          static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(perm[static_cast<std::size_t>(i)], perm[j]);
  }

  ApproxSparseSignal out;
  out.support.assign(perm.begin(), perm.begin() + k);
  std::sort(out.support.begin(), out.support.end());
  out.values.assign(static_cast<std::size_t>(n), 0.0);
  for (std::size_t i : out.support)
    out.values[i] = rng.uniform() < 0.5 ? -head_magnitude : head_magnitude;

  if (tail_l1 > 0.0) {
    const auto tail = complement_of(out.support, static_cast<std::size_t>(n));
    std::vector<double> magnitudes(tail.size());
    double total = 0.0;
    for (double& u : magnitudes) {
      u = rng.uniform();
      total += u;
    }
    const double scale = tail_l1 / total;
    int sign = 1;
    for (std::size_t j = 0; j < tail.size(); ++j) {
      out.values[tail[j]] = sign * magnitudes[j] * scale;
      sign = -sign;
    }
  }

  double recomputed = 0.0;
  for (std::size_t j = 0; j < out.values.size(); ++j) recomputed += std::fabs(out.values[j]);
  for (std::size_t i : out.support) recomputed -= std::fabs(out.values[i]);
  out.tail_l1 = std::max(0.0, recomputed);
  return out;
}

std::vector<double> decode_l1(const MeasurementEnsemble& ensemble, const std::vector<double>& y) {
  if (static_cast<int>(y.size()) != ensemble.m)
    throw std::invalid_argument("decode_l1: measurement length mismatch");
  const auto split = lp_core::l1_min_as_lp(ensemble.entries, y);
  const auto sol = lp_core::solve_lp(split.problem);
  if (sol.status != lp_core::LpStatus::optimal)
    throw std::runtime_error("decode_l1: decoding LP did not reach an optimum");
  auto x_hat = lp_core::recover_signal(split, sol.point);
  const auto ax = ensemble.entries.multiply(x_hat);
  double residual = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) residual = std::max(residual, std::fabs(ax[i] - y[i]));
  if (residual >= 1e-7 * (1.0 + linf_norm(y)))
    throw std::runtime_error("decode_l1: returned point fails the feasibility re-check");
  return x_hat;
}

BalancednessCertificate certify_balancedness(const NullSpaceBasis& z, int k, double c_factor) {
  const int n = static_cast<int>(z.basis.rows());
  if (!(1 <= k && k < n)) throw std::invalid_argument("certify_balancedness: need 1 <= k < n");
  if (!(c_factor >= 1.0)) throw std::invalid_argument("certify_balancedness: c_factor must be >= 1");

  BalancednessCertificate cert;
  cert.k = k;
  cert.c_factor = c_factor;

  std::vector<std::size_t> support(static_cast<std::size_t>(k));
  std::iota(support.begin(), support.end(), std::size_t{0});
  for (;;) {
    const double ratio = worst_support_ratio(z.basis, support);
    if (ratio > cert.worst_ratio) {
      cert.worst_ratio = ratio;
      cert.worst_support = support;
    }
    if (std::isinf(cert.worst_ratio)) break;

    // next lexicographic k-combination of {0, ..., n-1}
    int pos = k - 1;
    while (pos >= 0 &&
           support[static_cast<std::size_t>(pos)] == static_cast<std::size_t>(n - k + pos))
      --pos;
    if (pos < 0) break;
    ++support[static_cast<std::size_t>(pos)];
    for (int t = pos + 1; t < k; ++t)
      support[static_cast<std::size_t>(t)] = support[static_cast<std::size_t>(t - 1)] + 1;
  }

  cert.holds = c_factor * cert.worst_ratio <= 1.0 + kSlack;
  return cert;
}

WeakConditionReport check_weak_condition(const NullSpaceBasis& z, const ApproxSparseSignal& x,
                                         double c_factor) {
  if (x.support.empty()) throw std::invalid_argument("check_weak_condition: empty support");
  if (!(c_factor >= 1.0))
    throw std::invalid_argument("check_weak_condition: c_factor must be >= 1");
  const std::size_t n = z.basis.rows();
  const std::size_t d = z.basis.cols();
  if (x.values.size() != n) throw std::invalid_argument("check_weak_condition: size mismatch");

  std::vector<bool> in_support(n, false);
  for (std::size_t i : x.support) in_support[i] = true;

  /* minimize  sum_{i in K} (a+_i + a-_i) + (1/C) sum_{j notin K} (a+_j + a-_j)
   * subject to (Z c)_i - a+_i + a-_i = -x_i   (i in K;  a+ - a- = x_i + (Zc)_i)
   *            (Z c)_j - a+_j + a-_j = 0      (j notin K)
   * with c free (split), a+/- >= 0. */
  lp_core::LpProblem lp;
  const std::size_t vars = 2 * d + 2 * n;
  lp.objective.assign(vars, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double cost = in_support[i] ? 1.0 : 1.0 / c_factor;
    lp.objective[2 * d + 2 * i] = cost;
    lp.objective[2 * d + 2 * i + 1] = cost;
  }
  lp.eq_matrix = Matrix(n, vars);
  lp.eq_rhs.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      lp.eq_matrix(i, 2 * j) = z.basis(i, j);
      lp.eq_matrix(i, 2 * j + 1) = -z.basis(i, j);
    }
    lp.eq_matrix(i, 2 * d + 2 * i) = -1.0;
    lp.eq_matrix(i, 2 * d + 2 * i + 1) = 1.0;
    if (in_support[i]) lp.eq_rhs[i] = -x.values[i];
  }

  const auto sol = lp_core::solve_lp(lp);
  if (sol.status != lp_core::LpStatus::optimal)
    throw std::runtime_error("check_weak_condition: LP did not reach an optimum");

  double head_l1 = 0.0;
  for (std::size_t i : x.support) head_l1 += std::fabs(x.values[i]);

  WeakConditionReport report;
  report.margin = sol.objective_value - head_l1;
  report.holds = report.margin >= -kSlack;
  return report;
}

std::pair<std::uint64_t, std::uint64_t> trial_seeds(std::uint64_t seed, long trial) {
  const std::uint64_t t = static_cast<std::uint64_t>(trial);
  return {seed + kSeedStride * (2 * t + 1), seed + kSeedStride * (2 * t + 2)};
}

std::vector<RecoveryReport> recovery_experiment(double delta, double rho, double c_factor, int n,
                                                long trials, double tail_l1, std::uint64_t seed,
                                                int jobs, bool compute_kappa) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("recovery_experiment: delta");
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("recovery_experiment: rho");
  if (!(c_factor >= 1.0)) throw std::invalid_argument("recovery_experiment: c_factor");
  if (trials < 1) throw std::invalid_argument("recovery_experiment: trials");
  if (!(tail_l1 >= 0.0)) throw std::invalid_argument("recovery_experiment: tail_l1");
  const int m = static_cast<int>(std::lround(delta * n));
  const int k = static_cast<int>(std::lround(rho * delta * n));
  if (!(1 <= k && k <= m && m < n))
    throw std::invalid_argument("recovery_experiment: rounded sizes out of range");

  std::vector<RecoveryReport> reports(static_cast<std::size_t>(trials));
  parallel_for_index(static_cast<std::size_t>(trials), jobs, [&](std::size_t t) {
    const auto [ensemble_seed, signal_seed] = trial_seeds(seed, static_cast<long>(t));
    const auto ensemble = sample_ensemble(m, n, ensemble_seed);
    const auto signal = generate_signal(n, k, 1.0, tail_l1, signal_seed);
    const auto y = ensemble.entries.multiply(signal.values);
    const auto x_hat = decode_l1(ensemble, y);

    RecoveryReport& rep = reports[t];
    rep.c_factor = c_factor;
    rep.bound = tail_bound(c_factor, signal.tail_l1);
    for (std::size_t i = 0; i < signal.values.size(); ++i)
      rep.err_l1 += std::fabs(signal.values[i] - x_hat[i]);
    rep.err_tail_l1 = rep.err_l1;
    for (std::size_t i : signal.support) rep.err_tail_l1 -= std::fabs(signal.values[i] - x_hat[i]);
    rep.err_tail_l1 = std::max(0.0, rep.err_tail_l1);
    rep.satisfied = rep.err_l1 <= rep.bound + kSlack;
    if (compute_kappa) {
      const auto basis = null_space_basis(ensemble);
      rep.kappa = worst_support_ratio(basis.basis, signal.support);
    }
  });
  return reports;
}

double smallest_singular_value(const Matrix& a) {
  const std::size_t m = a.rows();
  Matrix gram(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      const double g = dot(a.row(i), a.row(j));
      gram(i, j) = g;
      gram(j, i) = g;
    }
  const auto eig = jacobi_eigen(gram);
  const double lambda_min = eig.values.front();
  if (lambda_min < 1e-20) throw std::runtime_error("smallest_singular_value: ill-conditioned matrix");

  // eigen residual re-check: ||G v - lambda v||_inf small on the Gram scale
  std::vector<double> v(m);
  for (std::size_t i = 0; i < m; ++i) v[i] = eig.vectors(i, 0);
  double residual = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double gv = dot(gram.row(i), v);
    residual = std::max(residual, std::fabs(gv - lambda_min * v[i]));
  }
  if (residual >= 1e-6 * std::max(1.0, gram.max_abs()))
    throw std::runtime_error("smallest_singular_value: eigen residual check failed");
  return std::sqrt(lambda_min);
}

std::vector<NoisyReport> noisy_experiment(double delta, double rho, double c_factor, int n,
                                          double epsilon, long trials, std::uint64_t seed,
                                          int jobs, double tail_l1, bool epsilon_relative) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("noisy_experiment: epsilon < 0");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("noisy_experiment: delta");
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("noisy_experiment: rho");
  if (!(c_factor >= 1.0)) throw std::invalid_argument("noisy_experiment: c_factor");
  if (trials < 1) throw std::invalid_argument("noisy_experiment: trials");
  const int m = static_cast<int>(std::lround(delta * n));
  const int k = static_cast<int>(std::lround(rho * delta * n));
  if (!(1 <= k && k <= m && m < n))
    throw std::invalid_argument("noisy_experiment: rounded sizes out of range");

  std::vector<NoisyReport> reports(static_cast<std::size_t>(trials));
  parallel_for_index(static_cast<std::size_t>(trials), jobs, [&](std::size_t t) {
    const auto [ensemble_seed, signal_seed] = trial_seeds(seed, static_cast<long>(t));
    const auto ensemble = sample_ensemble(m, n, ensemble_seed);
    const auto signal = generate_signal(n, k, 1.0, tail_l1, signal_seed);
    auto y = ensemble.entries.multiply(signal.values);

    const double eps_t = epsilon * (epsilon_relative ? l2_norm(y) : 1.0);
    if (eps_t > 0.0) {
      CounterRng rng(ensemble_seed, 1);  // stream 0 produced the matrix
      std::vector<double> noise(y.size());
      for (double& g : noise) g = rng.gaussian();
      const double scale = eps_t / l2_norm(noise);
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += noise[i] * scale;
    }

    const auto x_hat = decode_l1(ensemble, y);
    const double sigma_min = smallest_singular_value(ensemble.entries);
    if (sigma_min < 1e-10) throw std::runtime_error("noisy_experiment: ill-conditioned ensemble");

    NoisyReport& rep = reports[t];
    rep.epsilon = eps_t;
    rep.sigma_min = sigma_min;
    for (std::size_t i = 0; i < signal.values.size(); ++i)
      rep.err_l1 += std::fabs(signal.values[i] - x_hat[i]);
    rep.bound = tail_bound(c_factor, signal.tail_l1);
    if (eps_t > 0.0) {
      if (c_factor > 1.0)
        rep.bound += (3.0 * c_factor + 1.0) * std::sqrt(static_cast<double>(n)) * eps_t /
                     ((c_factor - 1.0) * sigma_min);
      else
        rep.bound = std::numeric_limits<double>::infinity();
    }
    rep.satisfied = rep.err_l1 <= rep.bound + kSlack;
  });
  return reports;
}

}  // namespace l1geom::recovery_lab
