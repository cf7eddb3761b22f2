#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "l1geom/linalg.hpp"

namespace l1geom::lp_core {

enum class LpStatus { optimal, infeasible, unbounded };

/* Equality-form linear program: minimize objective . x subject to
 * eq_matrix x = eq_rhs and x >= var_lower_bounds (componentwise; an empty
 * bound vector means all zeros). */
struct LpProblem {
  std::vector<double> objective;
  Matrix eq_matrix;
  std::vector<double> eq_rhs;
  std::vector<double> var_lower_bounds;  // empty = zeros
};

struct LpSolution {
  LpStatus status = LpStatus::optimal;
  std::vector<double> point;          // meaningful for optimal
  double objective_value = 0.0;       // meaningful for optimal
  double feasibility_residual = 0.0;  // ||Ax - b||_inf at the returned point
  double reduced_cost_min = 0.0;      // min reduced cost over nonbasic columns
  int iterations = 0;
};

/* Two-phase dense primal simplex.  Bland's pivoting rule is always active
 * (the l1 decoding problems are heavily degenerate), so the iteration count
 * is finite; a cap of 50*(vars+constraints) guards against blowups and
 * raises std::runtime_error if hit.  The optimality certificate (feasibility
 * residual and reduced costs) is re-derived from the final tableau before
 * returning. */
LpSolution solve_lp(const LpProblem& problem);

/* min ||x||_1 s.t. Ax = y via the split construction
 * min 1.(u+v) s.t. A(u-v) = y, u,v >= 0; signal_dim recovers x = u - v. */
struct SplitLp {
  LpProblem problem;
  std::size_t signal_dim;
};
SplitLp l1_min_as_lp(const Matrix& a, std::span<const double> y);
std::vector<double> recover_signal(const SplitLp& lp, std::span<const double> lp_point);

/* max sum_{i in support} signs_i w_i over w in span(Z) with ||w restricted to
 * the complement||_1 <= 1.  `unbounded` is reported when the subspace holds a
 * vector supported entirely on `support` (a distinguished outcome, not an
 * error).  The witness w attains the value when bounded. */
struct SubspaceMax {
  double value = 0.0;
  bool unbounded = false;
  std::vector<double> witness;
};
SubspaceMax max_l1_on_subspace(const Matrix& z, std::span<const std::size_t> support,
                               std::span<const int> signs);

}  // namespace l1geom::lp_core
