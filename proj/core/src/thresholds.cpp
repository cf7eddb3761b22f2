#include "l1geom/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "l1geom/parallel.hpp"

namespace l1geom::thresholds {

namespace {

constexpr double kNuCeiling = 1.0 - 1e-6;
constexpr double kRhoFloor = 1e-8;
constexpr double kRhoCeiling = 1.0 - 1e-8;
/* Above the critical rho the per-support (weak) maximum saturates at exactly
 * zero -- the face/angle factors obey a sum identity whose exponent peaks at
 * zero once the peak enters [delta, 1] -- so "nonnegative" must be decided
 * against a band wider than the evaluation roundoff, not against 0.0. */
constexpr double kZeroBand = 1e-10;

double golden_max(double lo, double hi, const std::function<double(double)>& f, double tol) {
  const double gr = 0.61803398874989484820458683436564;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 > f2) {
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

NetMaximum max_net_exponent(double rho, double delta, double c_factor, RobustnessMode mode,
                            int grid_size) {
  if (grid_size < 8) throw std::invalid_argument("max_net_exponent: grid_size too small");
  exponents::NetExponentParams p{rho, delta, c_factor, mode};
  p.validate();
  const double lo = delta;
  const double hi = kNuCeiling;
  if (!(lo < hi)) throw std::domain_error("max_net_exponent: delta too close to 1");

  const auto f = [&](double nu) { return exponents::psi_net(nu, p); };

  std::vector<double> nu(grid_size), val(grid_size);
  for (int i = 0; i < grid_size; ++i) {
    nu[i] = lo + (hi - lo) * static_cast<double>(i) / (grid_size - 1);
    val[i] = f(nu[i]);
  }

  // indices of the three best grid values
  std::vector<int> order(grid_size);
  for (int i = 0; i < grid_size; ++i) order[i] = i;
  std::partial_sort(order.begin(), order.begin() + 3, order.end(),
                    [&](int a, int b) { return val[a] > val[b]; });

  NetMaximum best{nu[order[0]], val[order[0]]};
  for (int r = 0; r < 3; ++r) {
    const int i = order[r];
    const double a = nu[std::max(0, i - 1)];
    const double b = nu[std::min(grid_size - 1, i + 1)];
    const double star = golden_max(a, b, f, 1e-10 * (1.0 + b - a) + 1e-12);
    const double fv = f(star);
    if (fv > best.value) best = {star, fv};
  }
  return best;
}

ThresholdResult critical_rho(double delta, double c_factor, RobustnessMode mode, double tol) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("critical_rho: delta outside (0,1)");
  if (!(c_factor >= 1.0)) throw std::domain_error("critical_rho: c_factor must be >= 1");
  if (!(tol > 0.0 && tol < 0.1)) throw std::invalid_argument("critical_rho: bad tolerance");

  double hi = kRhoCeiling;
  if (mode == RobustnessMode::strong) hi = std::min(hi, 1.0 / (c_factor + 1.0));
  double lo = kRhoFloor;

  ThresholdResult out;
  out.delta = delta;
  out.c_factor = c_factor;
  out.mode = mode;
  out.tol = tol;
  out.iterations = 0;

  const auto max_at = [&](double rho) { return max_net_exponent(rho, delta, c_factor, mode); };

  const NetMaximum at_lo = max_at(lo);
  if (at_lo.value >= -kZeroBand) {
    out.status = BracketStatus::degenerate_zero;
    out.rho_star = 0.0;
    out.zeta = 0.0;
    out.nu_argmax = at_lo.nu_star;
    return out;
  }
  NetMaximum at_best = at_lo;
  double rho_best = lo;

  const NetMaximum at_hi = max_at(hi);
  ++out.iterations;
  if (at_hi.value < -kZeroBand) {
    out.status = BracketStatus::capped_upper;
    out.rho_star = hi;
    out.zeta = hi * delta;
    out.nu_argmax = at_hi.nu_star;
    return out;
  }

  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const NetMaximum at_mid = max_at(mid);
    ++out.iterations;
    if (at_mid.value < -kZeroBand) {
      lo = mid;
      at_best = at_mid;
      rho_best = mid;
    } else {
      hi = mid;
    }
  }

  out.status = BracketStatus::bracketed;
  out.rho_star = lo;
  out.zeta = lo * delta;
  out.nu_argmax = at_best.nu_star;
  (void)rho_best;

  const double below = std::max(kRhoFloor, out.rho_star - 2.0 * tol);
  const double above = std::min(kRhoCeiling, out.rho_star + 2.0 * tol);
  out.cert_below = max_at(below).value;
  out.cert_above = max_at(above).value;
  return out;
}

std::vector<ThresholdResult> threshold_curve(double delta, std::span<const double> c_grid,
                                             RobustnessMode mode, int jobs) {
  std::vector<ThresholdResult> out(c_grid.size());
  parallel_for_index(c_grid.size(), jobs,
                     [&](std::size_t i) { out[i] = critical_rho(delta, c_grid[i], mode); });
  return out;
}

std::vector<ThresholdResult> threshold_vs_delta(double c_factor, std::span<const double> deltas,
                                                RobustnessMode mode, int jobs) {
  std::vector<ThresholdResult> out(deltas.size());
  parallel_for_index(deltas.size(), jobs,
                     [&](std::size_t i) { out[i] = critical_rho(deltas[i], c_factor, mode); });
  return out;
}

}  // namespace l1geom::thresholds
