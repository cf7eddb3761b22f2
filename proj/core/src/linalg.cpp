#include "l1geom/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace l1geom {

std::vector<double> Matrix::multiply(std::span<const double> x) const {
  if (x.size() != cols_) throw std::invalid_argument("matrix multiply: size mismatch");
  std::vector<double> y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* r = data_.data() + i * cols_;
    double acc = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) acc += r[j] * x[j];
    y[i] = acc;
  }
  return y;
}

std::vector<double> Matrix::multiply_transposed(std::span<const double> x) const {
  if (x.size() != rows_) throw std::invalid_argument("matrix multiply_transposed: size mismatch");
  std::vector<double> y(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* r = data_.data() + i * cols_;
    const double xi = x[i];
    for (std::size_t j = 0; j < cols_; ++j) y[j] += r[j] * xi;
  }
  return y;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::fabs(v));
  return m;
}

double l1_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::fabs(x);
  return s;
}

double linf_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::fabs(x));
  return s;
}

double l2_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Matrix null_space_basis_qr(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m >= n) throw std::invalid_argument("null_space_basis_qr: need rows < cols");

  // Householder QR of A^T (n x m); reflector vectors kept on the side.
  Matrix r = a.transposed();
  std::vector<double> betas(m, 0.0);
  std::vector<std::vector<double>> reflectors_;
  reflectors_.reserve(m);
  const double scale = std::max(a.max_abs(), 1.0);
  for (std::size_t j = 0; j < m; ++j) {
    double norm = 0.0;
    for (std::size_t i = j; i < n; ++i) norm += r(i, j) * r(i, j);
    norm = std::sqrt(norm);
    if (norm <= 1e-12 * scale) throw std::runtime_error("null_space_basis_qr: rank-deficient matrix");
    const double alpha = r(j, j) >= 0.0 ? -norm : norm;
    double vnorm2 = 0.0;
    std::vector<double> v(n - j, 0.0);
    v[0] = r(j, j) - alpha;
    for (std::size_t i = j + 1; i < n; ++i) v[i - j] = r(i, j);
    for (double x : v) vnorm2 += x * x;
    if (vnorm2 == 0.0) {
      betas[j] = 0.0;
      reflectors_.emplace_back();
      continue;
    }
    const double beta = 2.0 / vnorm2;
    betas[j] = beta;
    // apply reflector to the remaining columns of R
    for (std::size_t c = j; c < m; ++c) {
      double proj = 0.0;
      for (std::size_t i = j; i < n; ++i) proj += v[i - j] * r(i, c);
      proj *= beta;
      for (std::size_t i = j; i < n; ++i) r(i, c) -= proj * v[i - j];
    }
    // stash v for accumulating Q later
    for (std::size_t i = j; i < n; ++i) r(i, j) = (i == j) ? alpha : v[i - j];
    // keep v[0] separately in row j? store full v in a side list instead:
    reflectors_.push_back(std::move(v));
  }

  // Build the trailing n-m columns of Q by applying the reflectors (in reverse)
  // to the unit vectors e_m .. e_{n-1}.
  Matrix z(n, n - m);
  for (std::size_t c = 0; c < n - m; ++c) {
    std::vector<double> q(n, 0.0);
    q[m + c] = 1.0;
    for (std::size_t j = m; j-- > 0;) {
      if (betas[j] == 0.0) continue;
      const auto& v = reflectors_[j];
      double proj = 0.0;
      for (std::size_t i = j; i < n; ++i) proj += v[i - j] * q[i];
      proj *= betas[j];
      for (std::size_t i = j; i < n; ++i) q[i] -= proj * v[i - j];
    }
    for (std::size_t i = 0; i < n; ++i) z(i, c) = q[i];
  }
  reflectors_.clear();
  return z;
}

SymmetricEigen jacobi_eigen(const Matrix& sym, double off_diag_tol) {
  if (sym.rows() != sym.cols()) throw std::invalid_argument("jacobi_eigen: matrix not square");
  const std::size_t n = sym.rows();
  Matrix a = sym;
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::fabs(a(i, j)));
  if (scale == 0.0) scale = 1.0;

  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off = std::max(off, std::fabs(a(i, j)));
    if (off <= off_diag_tol * scale) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::fabs(apq) <= 1e-300) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const double apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj - s * aqj;
          a(q, j) = s * apj + c * aqj;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }

  SymmetricEigen out;
  out.values.resize(n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });
  out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = diag[order[j]];
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

}  // namespace l1geom
