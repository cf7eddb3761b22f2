#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "l1geom/linalg.hpp"

namespace l1geom::recovery_lab {

/* Random wide measurement matrix; regeneration from (m, n, seed) is
 * bitwise identical. */
struct MeasurementEnsemble {
  int m = 0;
  int n = 0;
  std::uint64_t seed = 0;
  Matrix entries;  // m x n, i.i.d. standard normal
};

enum class BasisSource { from_matrix, direct_gaussian };

/* Columns span the null space of the generating matrix (or are drawn
 * directly as a Gaussian matrix, which spans a uniformly random
 * (n-m)-dimensional subspace). */
struct NullSpaceBasis {
  Matrix basis;  // n x (n - m)
  BasisSource source = BasisSource::from_matrix;
};

/* Signal with k dominant entries on `support` and l1 mass `tail_l1`
 * spread over the complement. */
struct ApproxSparseSignal {
  std::vector<double> values;
  std::vector<std::size_t> support;  // sorted, size k
  double tail_l1 = 0.0;
};

struct RecoveryReport {
  double err_l1 = 0.0;       // ||x - x_hat||_1
  double err_tail_l1 = 0.0;  // ||(x - x_hat)_Kbar||_1
  double bound = 0.0;        // 2 (C+1) Delta / (C-1)
  double c_factor = 1.0;
  bool satisfied = false;  // err_l1 <= bound + 1e-9
  // max ||w_K||_1 / ||w_Kbar||_1 over the null space at the trial's support
  // (NaN unless requested; costs 2^k subspace maximizations)
  double kappa = std::numeric_limits<double>::quiet_NaN();
};

struct BalancednessCertificate {
  int k = 0;
  double c_factor = 1.0;
  double worst_ratio = 0.0;  // max over |K| = k of max_w ||w_K||_1 / ||w_Kbar||_1
  std::vector<std::size_t> worst_support;
  bool holds = false;  // C * worst_ratio <= 1 + 1e-9
};

struct WeakConditionReport {
  bool holds = false;
  double margin = 0.0;  // min_w [ ||x_K + w_K||_1 + ||w_Kbar||_1 / C ] - ||x_K||_1
};

struct NoisyReport {
  double epsilon = 0.0;    // l2 norm of the additive noise
  double sigma_min = 0.0;  // smallest singular value of the ensemble
  double err_l1 = 0.0;
  double bound = 0.0;  // 2 (C+1) Delta / (C-1) + (3C+1) sqrt(n) eps / ((C-1) sigma_min)
  bool satisfied = false;
};

MeasurementEnsemble sample_ensemble(int m, int n, std::uint64_t seed);

// Null basis of ensemble.entries via orthogonal elimination; throws if the
// residual ||A Z||_inf exceeds 1e-8 ||A||_inf.
NullSpaceBasis null_space_basis(const MeasurementEnsemble& ensemble);

// Gaussian n x (n - m) matrix taken directly as the basis.
NullSpaceBasis direct_gaussian_basis(int n, int m, std::uint64_t seed);

// Random size-k support; head entries +/- head_magnitude; tail of uniform
// magnitudes rescaled to l1 mass exactly tail_l1, alternating signs.
ApproxSparseSignal generate_signal(int n, int k, double head_magnitude, double tail_l1,
                                   std::uint64_t seed);

// Minimum-l1 solution of entries * x = y; feasibility of the returned point
// is re-verified against the inputs.
std::vector<double> decode_l1(const MeasurementEnsemble& ensemble, const std::vector<double>& y);

// Exact worst-case balancedness ratio over all size-k supports and sign
// patterns (C(n,k) * 2^k subspace maximizations; keep n small).
BalancednessCertificate certify_balancedness(const NullSpaceBasis& z, int k, double c_factor);

// Signal-specific recovery condition: min over null vectors w of
// ||x_K + w_K||_1 + ||w_Kbar||_1 / C  >=  ||x_K||_1 (up to 1e-9).
WeakConditionReport check_weak_condition(const NullSpaceBasis& z, const ApproxSparseSignal& x,
                                         double c_factor);

// Seeds for trial t's ensemble / signal draws, derived from the run seed.
std::pair<std::uint64_t, std::uint64_t> trial_seeds(std::uint64_t seed, long trial);

// Per-trial: sample ensemble + signal (m = round(delta n), k = round(rho delta n),
// unit head magnitude), decode y = Ax, and compare the l1 error against the
// tail bound.  C = 1 compares against 0 (exactness) when tail_l1 = 0.
std::vector<RecoveryReport> recovery_experiment(double delta, double rho, double c_factor, int n,
                                                long trials, double tail_l1, std::uint64_t seed,
                                                int jobs = 1, bool compute_kappa = false);

// Same, with noise of l2 norm epsilon (uniform on the sphere) added to the
// measurements; epsilon_relative scales it by ||Ax||_2 per trial.  The decoder
// is noise-blind; the bound gains (3C+1) sqrt(n) eps / ((C-1) sigma_min).
std::vector<NoisyReport> noisy_experiment(double delta, double rho, double c_factor, int n,
                                          double epsilon, long trials, std::uint64_t seed,
                                          int jobs = 1, double tail_l1 = 0.0,
                                          bool epsilon_relative = false);

// Smallest singular value via the eigen-decomposition of the m x m Gram
// matrix; throws if the eigen residual or conditioning checks fail.
double smallest_singular_value(const Matrix& a);

}  // namespace l1geom::recovery_lab
