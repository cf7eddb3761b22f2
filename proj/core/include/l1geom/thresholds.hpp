#pragma once

#include <span>
#include <vector>

#include "l1geom/exponents.hpp"

namespace l1geom::thresholds {

using exponents::RobustnessMode;

struct NetMaximum {
  double nu_star;  // argmax over [delta, 1 - 1e-6]
  double value;    // max of the net exponent
};

/* Maximum of the net exponent over nu: dense inclusive grid (default 512
 * points) followed by golden-section refinement around the three best
 * brackets.  Deterministic. */
NetMaximum max_net_exponent(double rho, double delta, double c_factor, RobustnessMode mode,
                            int grid_size = 512);

enum class BracketStatus {
  bracketed,        // sign change certified at rho_star +- 2 tol
  degenerate_zero,  // net exponent already positive at the lower bracket
  capped_upper      // net exponent still negative at the upper bracket
};

struct ThresholdResult {
  double delta;
  double c_factor;
  RobustnessMode mode;
  double rho_star;    // critical sparsity fraction k/m
  double zeta;        // rho_star * delta = k/n
  double nu_argmax;   // argmax of the net exponent at rho_star
  double tol;         // bisection tolerance on rho
  int iterations;
  BracketStatus status;
  // certificate: net-exponent maximum evaluated at rho_star -+ 2 tol.  For a
  // bracketed result cert_below < -1e-10 <= cert_above; in weak mode the
  // maximum saturates at exactly zero above the threshold (angle-sum
  // identity), so cert_above is ~0 there rather than strictly positive.
  double cert_below = 0.0;
  double cert_above = 0.0;
};

/* Largest rho with a negative net-exponent maximum, by bisection on
 * (1e-8, hi) at tolerance tol, where hi = min(1 - 1e-8, 1/(C+1)) in strong
 * mode (the support-mass cap applies there) and 1 - 1e-8 otherwise.
 * The returned bracket status certifies the sign change. */
ThresholdResult critical_rho(double delta, double c_factor, RobustnessMode mode,
                             double tol = 1e-5);

// thresholds across a C grid at fixed delta (optionally parallel; order-stable)
std::vector<ThresholdResult> threshold_curve(double delta, std::span<const double> c_grid,
                                             RobustnessMode mode, int jobs = 1);

// thresholds across a delta grid at fixed C
std::vector<ThresholdResult> threshold_vs_delta(double c_factor, std::span<const double> deltas,
                                                RobustnessMode mode, int jobs = 1);

}  // namespace l1geom::thresholds
