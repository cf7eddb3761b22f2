#include "l1geom/lp_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace l1geom::lp_core {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kReducedCostTol = 1e-9;

struct Tableau {
  // rows x (ncols + 1); last column is the rhs
  std::size_t rows, ncols;
  std::vector<double> t;
  std::vector<double> original;    // pristine copy of the initial tableau
  std::vector<std::size_t> basis;  // basis[i] = column basic in row i

  double& at(std::size_t i, std::size_t j) { return t[i * (ncols + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return t[i * (ncols + 1) + j]; }
  double& rhs(std::size_t i) { return t[i * (ncols + 1) + ncols]; }
  double rhs(std::size_t i) const { return t[i * (ncols + 1) + ncols]; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    const double inv = 1.0 / p;
    double* prow = t.data() + pr * (ncols + 1);
    for (std::size_t j = 0; j <= ncols; ++j) prow[j] *= inv;
    prow[pc] = 1.0;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == pr) continue;
      double* r = t.data() + i * (ncols + 1);
      const double f = r[pc];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= ncols; ++j) r[j] -= f * prow[j];
      r[pc] = 0.0;
    }
    basis[pr] = pc;
  }

  /* Recompute the canonical tableau for the current basis from the pristine
   * data (Gauss-Jordan with partial pivoting on the basis matrix).  Long
   * degenerate pivot chains on tiny elements accumulate roundoff; rebuilding
   * restores the tableau to working precision without moving the vertex. */
  void rebuild() {
    const std::size_t width = ncols + 1;
    std::vector<double> aug(rows * (rows + width));
    const std::size_t aw = rows + width;
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < rows; ++j) aug[i * aw + j] = original[i * width + basis[j]];
      for (std::size_t j = 0; j < width; ++j) aug[i * aw + rows + j] = original[i * width + j];
    }
    std::vector<std::size_t> prow(rows);
    std::vector<bool> used(rows, false);
    for (std::size_t j = 0; j < rows; ++j) {
      std::size_t best = rows;
      double best_mag = 1e-12;
      for (std::size_t i = 0; i < rows; ++i) {
        if (used[i]) continue;
        const double mag = std::fabs(aug[i * aw + j]);
        if (mag > best_mag) {
          best_mag = mag;
          best = i;
        }
      }
      if (best == rows) throw std::runtime_error("solve_lp: basis matrix is numerically singular");
      used[best] = true;
      prow[j] = best;
      double* br = aug.data() + best * aw;
      const double inv = 1.0 / br[j];
      for (std::size_t c = j; c < aw; ++c) br[c] *= inv;
      for (std::size_t i = 0; i < rows; ++i) {
        if (i == best) continue;
        double* r = aug.data() + i * aw;
        const double f = r[j];
        if (f == 0.0) continue;
        for (std::size_t c = j; c < aw; ++c) r[c] -= f * br[c];
        r[j] = 0.0;
      }
    }
    for (std::size_t j = 0; j < rows; ++j) {
      const double* src = aug.data() + prow[j] * aw + rows;
      double* dst = t.data() + j * width;
      for (std::size_t c = 0; c < width; ++c) dst[c] = src[c];
    }
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t r = 0; r < rows; ++r) at(r, basis[i]) = (r == i) ? 1.0 : 0.0;
    }
  }
};

// reduced costs for objective c over allowed columns, given the canonical tableau
std::vector<double> reduced_costs(const Tableau& tab, const std::vector<double>& c) {
  std::vector<double> rc(c);
  for (std::size_t i = 0; i < tab.rows; ++i) {
    const double cb = c[tab.basis[i]];
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j < tab.ncols; ++j) rc[j] -= cb * tab.at(i, j);
  }
  for (std::size_t i = 0; i < tab.rows; ++i) rc[tab.basis[i]] = 0.0;
  return rc;
}

/* One simplex phase with Bland's rule: entering column is the lowest-index
 * eligible one, leaving row breaks ratio ties by lowest basis index.
 * Returns true when optimal, false when unbounded.  An unbounded verdict is
 * only trusted on a freshly rebuilt tableau: roundoff can shrink every entry
 * of the entering column below the pivot tolerance, and the rebuild separates
 * that artifact from a genuine recession direction. */
bool run_phase(Tableau& tab, const std::vector<double>& c, const std::vector<bool>& allowed,
               int& iterations, int iteration_cap) {
  int pivots_since_rebuild = 0;
  bool can_rebuild = true;
  while (true) {
    if (pivots_since_rebuild >= 500) {
      tab.rebuild();
      pivots_since_rebuild = 0;
      can_rebuild = true;
    }
    std::vector<double> rc = reduced_costs(tab, c);
    std::size_t enter = tab.ncols;
    for (std::size_t j = 0; j < tab.ncols; ++j) {
      if (!allowed[j]) continue;
      if (rc[j] < -kReducedCostTol) {
        enter = j;
        break;
      }
    }
    if (enter == tab.ncols) return true;  // optimal

    /* Entries tiny relative to the column are roundoff residue of true zeros;
     * pivoting on one swaps a dependent column into the basis and destroys it. */
    double col_max = 0.0;
    for (std::size_t i = 0; i < tab.rows; ++i)
      col_max = std::max(col_max, std::fabs(tab.at(i, enter)));
    const double eligible = std::max(kPivotTol, 1e-7 * col_max);

    std::size_t leave = tab.rows;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tab.rows; ++i) {
      const double a = tab.at(i, enter);
      if (a > eligible) {
        const double ratio = std::max(0.0, tab.rhs(i)) / a;
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 && (leave == tab.rows || tab.basis[i] < tab.basis[leave]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave == tab.rows) {
      if (!can_rebuild) return false;  // unbounded direction, confirmed on clean data
      tab.rebuild();
      pivots_since_rebuild = 0;
      can_rebuild = false;
      continue;
    }

    tab.pivot(leave, enter);
    can_rebuild = true;
    ++pivots_since_rebuild;
    if (++iterations > iteration_cap)
      throw std::runtime_error("solve_lp: iteration cap exceeded");
  }
}

}  // namespace

LpSolution solve_lp(const LpProblem& problem) {
  const std::size_t m = problem.eq_matrix.rows();
  const std::size_t n = problem.eq_matrix.cols();
  if (problem.objective.size() != n)
    throw std::invalid_argument("solve_lp: objective size mismatch");
  if (problem.eq_rhs.size() != m) throw std::invalid_argument("solve_lp: rhs size mismatch");
  if (!problem.var_lower_bounds.empty() && problem.var_lower_bounds.size() != n)
    throw std::invalid_argument("solve_lp: lower bound size mismatch");
  for (double v : problem.objective)
    if (!std::isfinite(v)) throw std::invalid_argument("solve_lp: non-finite objective");
  for (double v : problem.eq_rhs)
    if (!std::isfinite(v)) throw std::invalid_argument("solve_lp: non-finite rhs");
  for (double v : problem.eq_matrix.data())
    if (!std::isfinite(v)) throw std::invalid_argument("solve_lp: non-finite matrix entry");

  // shift x = z + lb so z >= 0
  std::vector<double> b(problem.eq_rhs);
  double objective_offset = 0.0;
  if (!problem.var_lower_bounds.empty()) {
    const auto shift = problem.eq_matrix.multiply(problem.var_lower_bounds);
    for (std::size_t i = 0; i < m; ++i) b[i] -= shift[i];
    for (std::size_t j = 0; j < n; ++j)
      objective_offset += problem.objective[j] * problem.var_lower_bounds[j];
  }

  Tableau tab;
  tab.rows = m;
  tab.ncols = n + m;  // originals + one artificial per row
  tab.t.assign(m * (tab.ncols + 1), 0.0);
  tab.basis.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = b[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) tab.at(i, j) = sign * problem.eq_matrix(i, j);
    tab.at(i, n + i) = 1.0;
    tab.rhs(i) = sign * b[i];
    tab.basis[i] = n + i;
  }
  tab.original = tab.t;

  const int iteration_cap = static_cast<int>(50 * (n + m));
  int iterations = 0;

  // phase 1: minimize the artificial sum
  std::vector<double> phase1_cost(tab.ncols, 0.0);
  for (std::size_t j = n; j < tab.ncols; ++j) phase1_cost[j] = 1.0;
  std::vector<bool> all_allowed(tab.ncols, true);
  if (!run_phase(tab, phase1_cost, all_allowed, iterations, iteration_cap))
    throw std::runtime_error("solve_lp: phase 1 reported an unbounded direction");

  double artificial_sum = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    if (tab.basis[i] >= n) artificial_sum += tab.rhs(i);
  const double feas_tol = 1e-8 * (1.0 + linf_norm(problem.eq_rhs));
  LpSolution out;
  out.iterations = iterations;
  if (artificial_sum > feas_tol) {
    out.status = LpStatus::infeasible;
    return out;
  }

  // drive leftover artificials out of the basis; fully dependent rows are inert
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis[i] < n) continue;
    std::size_t pc = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::fabs(tab.at(i, j)) > kPivotTol) {
        pc = j;
        break;
      }
    }
    if (pc < n) tab.pivot(i, pc);
    // else: redundant constraint; the artificial stays basic at value ~0
  }

  // phase 2: original objective, artificial columns barred
  std::vector<double> phase2_cost(tab.ncols, 0.0);
  for (std::size_t j = 0; j < n; ++j) phase2_cost[j] = problem.objective[j];
  std::vector<bool> allowed(tab.ncols, false);
  for (std::size_t j = 0; j < n; ++j) allowed[j] = true;
  const bool optimal = run_phase(tab, phase2_cost, allowed, iterations, iteration_cap);
  out.iterations = iterations;
  if (!optimal) {
    out.status = LpStatus::unbounded;
    return out;
  }

  std::vector<double> z(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (tab.basis[i] < n) z[tab.basis[i]] = tab.rhs(i);

  out.status = LpStatus::optimal;
  out.point.resize(n);
  for (std::size_t j = 0; j < n; ++j)
    out.point[j] = z[j] + (problem.var_lower_bounds.empty() ? 0.0 : problem.var_lower_bounds[j]);

  out.objective_value = objective_offset;
  for (std::size_t j = 0; j < n; ++j) out.objective_value += problem.objective[j] * z[j];

  const auto ax = problem.eq_matrix.multiply(out.point);
  double res = 0.0;
  for (std::size_t i = 0; i < m; ++i) res = std::max(res, std::fabs(ax[i] - problem.eq_rhs[i]));
  out.feasibility_residual = res;

  const auto rc = reduced_costs(tab, phase2_cost);
  double rc_min = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (allowed[j]) rc_min = std::min(rc_min, rc[j]);
  }
  out.reduced_cost_min = rc_min;
  return out;
}

SplitLp l1_min_as_lp(const Matrix& a, std::span<const double> y) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (y.size() != m) throw std::invalid_argument("l1_min_as_lp: rhs size mismatch");
  SplitLp out;
  out.signal_dim = n;
  out.problem.objective.assign(2 * n, 1.0);
  out.problem.eq_matrix = Matrix(m, 2 * n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out.problem.eq_matrix(i, j) = a(i, j);
      out.problem.eq_matrix(i, n + j) = -a(i, j);
    }
  }
  out.problem.eq_rhs.assign(y.begin(), y.end());
  return out;
}

std::vector<double> recover_signal(const SplitLp& lp, std::span<const double> lp_point) {
  if (lp_point.size() != 2 * lp.signal_dim)
    throw std::invalid_argument("recover_signal: point size mismatch");
  std::vector<double> x(lp.signal_dim);
  for (std::size_t j = 0; j < lp.signal_dim; ++j) x[j] = lp_point[j] - lp_point[lp.signal_dim + j];
  return x;
}

SubspaceMax max_l1_on_subspace(const Matrix& z, std::span<const std::size_t> support,
                               std::span<const int> signs) {
  const std::size_t n = z.rows();
  const std::size_t d = z.cols();
  if (signs.size() != support.size())
    throw std::invalid_argument("max_l1_on_subspace: signs/support size mismatch");
  std::vector<bool> in_support(n, false);
  for (std::size_t idx : support) {
    if (idx >= n) throw std::invalid_argument("max_l1_on_subspace: support index out of range");
    in_support[idx] = true;
  }
  for (int s : signs)
    if (s != 1 && s != -1) throw std::invalid_argument("max_l1_on_subspace: signs must be +-1");

  std::vector<std::size_t> complement;
  complement.reserve(n - support.size());
  for (std::size_t i = 0; i < n; ++i)
    if (!in_support[i]) complement.push_back(i);
  const std::size_t nc = complement.size();

  /* variables: c+ (d), c- (d), p (nc), q (nc), slack t (1)
   * rows:  (Z c)_j - p_j + q_j = 0 for complement rows j
   *        sum(p + q) + t = 1
   * objective: maximize sum_i signs_i (Z c)_{support_i}  ->  minimize the negation */
  const std::size_t nvars = 2 * d + 2 * nc + 1;
  LpProblem lp;
  lp.objective.assign(nvars, 0.0);
  lp.eq_matrix = Matrix(nc + 1, nvars);
  lp.eq_rhs.assign(nc + 1, 0.0);

  for (std::size_t r = 0; r < nc; ++r) {
    const std::size_t row = complement[r];
    for (std::size_t c = 0; c < d; ++c) {
      lp.eq_matrix(r, c) = z(row, c);
      lp.eq_matrix(r, d + c) = -z(row, c);
    }
    lp.eq_matrix(r, 2 * d + r) = -1.0;       // p_r
    lp.eq_matrix(r, 2 * d + nc + r) = 1.0;   // q_r
  }
  for (std::size_t r = 0; r < 2 * nc; ++r) lp.eq_matrix(nc, 2 * d + r) = 1.0;
  lp.eq_matrix(nc, 2 * d + 2 * nc) = 1.0;  // slack
  lp.eq_rhs[nc] = 1.0;

  for (std::size_t i = 0; i < support.size(); ++i) {
    const double s = static_cast<double>(signs[i]);
    for (std::size_t c = 0; c < d; ++c) {
      lp.objective[c] -= s * z(support[i], c);
      lp.objective[d + c] += s * z(support[i], c);
    }
  }

  const LpSolution sol = solve_lp(lp);
  SubspaceMax out;
  if (sol.status == LpStatus::unbounded) {
    out.unbounded = true;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  if (sol.status != LpStatus::optimal)
    throw std::runtime_error("max_l1_on_subspace: unexpected infeasibility");
  out.value = -sol.objective_value;
  std::vector<double> coeff(d);
  for (std::size_t c = 0; c < d; ++c) coeff[c] = sol.point[c] - sol.point[d + c];
  out.witness = z.multiply(coeff);
  return out;
}

}  // namespace l1geom::lp_core
