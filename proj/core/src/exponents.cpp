#include "l1geom/exponents.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "l1geom/parallel.hpp"
#include "l1geom/specfun.hpp"

namespace l1geom::exponents {

namespace {
constexpr double kLog2 = 0.69314718055994530941723212145818;
constexpr double kNuCeiling = 1.0 - 1e-6;

double golden_min(double lo, double hi, const std::function<double(double)>& f, double tol) {
  const double gr = 0.61803398874989484820458683436564;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}
}  // namespace

std::string to_string(RobustnessMode mode) {
  switch (mode) {
    case RobustnessMode::weak: return "weak";
    case RobustnessMode::sectional: return "sectional";
    case RobustnessMode::strong: return "strong";
  }
  throw std::invalid_argument("to_string: bad mode");
}

RobustnessMode mode_from_string(const std::string& name) {
  if (name == "weak") return RobustnessMode::weak;
  if (name == "sectional") return RobustnessMode::sectional;
  if (name == "strong") return RobustnessMode::strong;
  throw std::invalid_argument("mode_from_string: unknown mode '" + name + "'");
}

void NetExponentParams::validate() const {
  if (!(std::isfinite(rho) && std::isfinite(delta) && std::isfinite(c_factor)))
    throw std::domain_error("NetExponentParams: non-finite value");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::domain_error("NetExponentParams: delta must lie in (0,1)");
  if (!(rho > 0.0 && rho < 1.0))
    throw std::domain_error("NetExponentParams: rho must lie in (0,1)");
  if (!(c_factor >= 1.0)) throw std::domain_error("NetExponentParams: c_factor must be >= 1");
}

double nu_prime_of(double nu, const NetExponentParams& p) {
  return (p.c_factor * p.c_factor - 1.0) * p.zeta() + nu;
}

double gamma_prime_of(double nu, const NetExponentParams& p) {
  const double c2 = p.c_factor * p.c_factor;
  const double zeta = p.zeta();
  return zeta / ((c2 - 1.0) / c2 * zeta + nu / c2);
}

double solve_x_nu(double nu, double nu_prime) {
  if (!(nu > 0.0 && nu <= 1.0)) throw std::domain_error("solve_x_nu: nu outside (0,1]");
  if (!(nu_prime > 0.0)) throw std::domain_error("solve_x_nu: nu_prime must be positive");
  if (nu == 1.0) return 0.0;

  /* Solve log(2x) + log G(x) - log g(x) = log((1-nu)/nu') =: t.
   * The left side F(x) is strictly increasing from -inf to +inf. */
  const double target = std::log((1.0 - nu) / nu_prime);
  const auto value = [](double x) {
    return std::log(2.0 * x) + std::log(specfun::half_normal_cdf(x)) -
           std::log(2.0 / 1.7724538509055160273) + x * x;
  };
  const auto slope = [](double x) {
    return 1.0 / x + specfun::half_normal_pdf(x) / specfun::half_normal_cdf(x) + 2.0 * x;
  };

  // bracket the root
  double lo = 1e-8, hi = 1.0;
  while (value(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 64.0) throw std::runtime_error("solve_x_nu: bracket expansion failed");
  }
  while (value(lo) > target) {
    hi = lo;
    lo *= 0.5;
    if (lo < 1e-300) throw std::runtime_error("solve_x_nu: bracket shrink failed");
  }

  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 100; ++iter) {
    const double f = value(x) - target;
    if (f > 0.0) hi = x; else lo = x;
    const double d = slope(x);
    double next = x - f / d;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) < 1e-14 * (1.0 + x) && std::fabs(f) < 1e-12) {
      x = next;
      break;
    }
    x = next;
  }

  // final residual check in the original (non-log) form, relative to 1 + RHS
  const double rhs = (1.0 - nu) / nu_prime;
  const double lhs = 2.0 * x * specfun::half_normal_cdf(x) / specfun::half_normal_pdf(x);
  if (std::fabs(lhs - rhs) > 1e-9 * (1.0 + rhs))
    throw std::runtime_error("solve_x_nu: residual too large");
  return x;
}

double psi_ext(double nu, const NetExponentParams& p) {
  p.validate();
  if (!(nu >= p.delta && nu <= 1.0)) throw std::domain_error("psi_ext: nu outside [delta, 1]");
  if (nu == 1.0) return 0.0;
  const double np = nu_prime_of(nu, p);
  const double x = solve_x_nu(nu, np);
  return np * x * x - (1.0 - nu) * std::log(specfun::half_normal_cdf(x));
}

double psi_ext_curvature(double nu, const NetExponentParams& p) {
  const double np = nu_prime_of(nu, p);
  const double x = solve_x_nu(nu, np);
  return 2.0 * np + 4.0 * x * x * np + 4.0 * x * x * np * np / (1.0 - nu);
}

XiMinimum minimize_xi(double gamma_prime) {
  if (!(gamma_prime > 0.0 && gamma_prime <= 1.0))
    throw std::domain_error("minimize_xi: gamma_prime outside (0,1]");
  if (gamma_prime == 1.0) return {specfun::kHalfNormalMean, 0.0, 0.0};

  const double q = (1.0 - gamma_prime) / gamma_prime;
  const auto xi = [&](double y) {
    return 0.5 * q * y * y + specfun::rate_function(y).lambda_star;
  };

  const double upper = specfun::kHalfNormalMean * (1.0 - 1e-12);
  const double lower = 1e-12;
  // golden-section bracket, then Newton polish on the stationarity equation
  double y = golden_min(lower, upper, xi, 1e-4);
  for (int iter = 0; iter < 60; ++iter) {
    const auto rf = specfun::rate_function(y);
    const double grad = q * y + rf.s;  // xi'(y); (lambda*)'(y) = s(y)
    // xi''(y) = q + 1/lambda''(s(y))
    const double lam2 = specfun::cumulant_half_normal_second_derivative(rf.s);
    const double hess = q + 1.0 / lam2;
    double next = y - grad / hess;
    if (!(next > lower && next < upper)) next = 0.5 * (y + (grad > 0 ? lower : upper));
    if (std::fabs(next - y) < 1e-14 * (1.0 + y)) {
      y = next;
      break;
    }
    y = next;
    if (std::fabs(grad) < 1e-13) break;
  }

  XiMinimum out;
  out.y_min = y;
  const auto rf = specfun::rate_function(y);
  out.s_dual = rf.s;
  out.xi_min = 0.5 * q * y * y + rf.lambda_star;
  return out;
}

double psi_int(double nu, const NetExponentParams& p) {
  p.validate();
  const double zeta = p.zeta();
  if (!(nu >= zeta)) throw std::domain_error("psi_int: nu below rho*delta");
  if (nu == zeta) return 0.0;
  const double gp = gamma_prime_of(nu, p);
  const auto xim = minimize_xi(std::min(gp, 1.0));
  return (xim.xi_min + kLog2) * (nu - zeta);
}

double psi_com(double nu, const NetExponentParams& p) {
  p.validate();
  const double zeta = p.zeta();
  if (!(nu >= zeta && nu <= 1.0)) throw std::domain_error("psi_com: nu outside [rho*delta, 1]");
  return nu * kLog2 + specfun::binary_entropy(zeta) +
         specfun::binary_entropy((nu - zeta) / (1.0 - zeta)) * (1.0 - zeta);
}

double combinatorial_exponent(double nu, const NetExponentParams& p) {
  const double zeta = p.zeta();
  const double faces =
      specfun::binary_entropy((nu - zeta) / (1.0 - zeta)) * (1.0 - zeta) + (nu - zeta) * kLog2;
  switch (p.mode) {
    case RobustnessMode::weak: return faces;
    case RobustnessMode::sectional: return faces + zeta * kLog2;
    case RobustnessMode::strong: return faces + zeta * kLog2 + specfun::binary_entropy(zeta);
  }
  throw std::invalid_argument("combinatorial_exponent: bad mode");
}

double psi_net(double nu, const NetExponentParams& p) {
  p.validate();
  if (!(nu >= p.delta && nu <= 1.0)) throw std::domain_error("psi_net: nu outside [delta, 1]");
  return combinatorial_exponent(nu, p) - psi_int(nu, p) - psi_ext(nu, p);
}

std::vector<ExponentBreakdown> exponent_breakdown_series(const NetExponentParams& p,
                                                         int grid_size, int jobs) {
  p.validate();
  if (grid_size < 2) throw std::invalid_argument("exponent_breakdown_series: grid_size < 2");
  const double lo = p.delta;
  const double hi = kNuCeiling;
  if (!(lo < hi)) throw std::domain_error("exponent_breakdown_series: delta too close to 1");

  std::vector<ExponentBreakdown> rows(grid_size);
  parallel_for_index(static_cast<std::size_t>(grid_size), jobs, [&](std::size_t i) {
    const double t = static_cast<double>(i) / (grid_size - 1);
    const double nu = lo + (hi - lo) * t;
    ExponentBreakdown row;
    row.nu = nu;
    row.nu_prime = nu_prime_of(nu, p);
    row.gamma_prime = gamma_prime_of(nu, p);
    row.x_nu = solve_x_nu(nu, row.nu_prime);
    row.y_gamma = minimize_xi(std::min(row.gamma_prime, 1.0)).y_min;
    row.psi_com = combinatorial_exponent(nu, p);
    row.psi_int = psi_int(nu, p);
    row.psi_ext = psi_ext(nu, p);
    row.psi_net = row.psi_com - row.psi_int - row.psi_ext;
    rows[i] = row;
  });
  return rows;
}

}  // namespace l1geom::exponents
