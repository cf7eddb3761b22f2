#pragma once

#include <string>
#include <vector>

namespace l1geom::exponents {

enum class RobustnessMode { weak, sectional, strong };

std::string to_string(RobustnessMode mode);
RobustnessMode mode_from_string(const std::string& name);

/* Asymptotic configuration: sparsity fraction rho = k/m, aspect delta = m/n,
 * and the balancedness factor C >= 1.  The scaled support size is
 * zeta = rho * delta = k/n. */
struct NetExponentParams {
  double rho;
  double delta;
  double c_factor;
  RobustnessMode mode = RobustnessMode::strong;

  void validate() const;  // throws std::domain_error on bad ranges
  double zeta() const { return rho * delta; }
};

// weighted aspect nu' = (C^2 - 1) rho delta + nu
double nu_prime_of(double nu, const NetExponentParams& p);

// skew weight gamma' = rho delta / ((C^2-1)/C^2 rho delta + nu / C^2)
double gamma_prime_of(double nu, const NetExponentParams& p);

/* Saddle point of the outward-cone integrand: the unique positive root of
 * 2 x G(x)/g(x) = (1 - nu)/nu', solved in log form.  nu = 1 returns 0. */
double solve_x_nu(double nu, double nu_prime);

// decay exponent of the outward cone weight: nu' x^2 - (1-nu) log G(x) at the saddle
double psi_ext(double nu, const NetExponentParams& p);

// curvature of the cone integrand at the saddle (for quadrature diagnostics)
double psi_ext_curvature(double nu, const NetExponentParams& p);

/* Minimizer of xi(y) = ((1-gamma')/gamma') y^2/2 + lambda*(y) over
 * (0, sqrt(2/pi)); gamma' = 1 degenerates to (sqrt(2/pi), 0). */
struct XiMinimum {
  double y_min;
  double xi_min;
  double s_dual;  // rate-function dual at y_min
};
XiMinimum minimize_xi(double gamma_prime);

// decay exponent of the cross-section weight: (xi_min + log 2)(nu - rho delta)
double psi_int(double nu, const NetExponentParams& p);

// combinatorial growth exponent: nu log 2 + H(rho delta) + H((nu - rho delta)/(1 - rho delta)) (1 - rho delta)
double psi_com(double nu, const NetExponentParams& p);

// mode-dependent combinatorial term entering psi_net
double combinatorial_exponent(double nu, const NetExponentParams& p);

// net exponent: combinatorial_exponent - psi_int - psi_ext (negative = vanishing failure odds)
double psi_net(double nu, const NetExponentParams& p);

struct ExponentBreakdown {
  double nu;
  double nu_prime;
  double gamma_prime;
  double x_nu;
  double y_gamma;
  double psi_com;  // mode-dependent combinatorial term (full form in strong mode)
  double psi_int;
  double psi_ext;
  double psi_net;
};

/* Breakdown rows over an inclusive uniform nu-grid on [delta, 1 - 1e-6].
 * grid_size >= 2.  Deterministic for any worker count. */
std::vector<ExponentBreakdown> exponent_breakdown_series(const NetExponentParams& p,
                                                         int grid_size, int jobs = 1);

}  // namespace l1geom::exponents
