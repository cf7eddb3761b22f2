#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace l1geom {

// Dense row-major matrix; just enough linear algebra for the lab.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  std::vector<double> multiply(std::span<const double> x) const;            // A x
  std::vector<double> multiply_transposed(std::span<const double> x) const; // A^T x
  Matrix transposed() const;
  double max_abs() const;  // entrywise max |a_ij|

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double l1_norm(std::span<const double> v);
double linf_norm(std::span<const double> v);
double l2_norm(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);

/* Orthonormal basis of the null space of A (rows m < cols n), as the trailing
 * n-m columns of the full Q factor of a Householder QR of A^T.  Throws
 * std::runtime_error if A is numerically rank-deficient. */
Matrix null_space_basis_qr(const Matrix& a);

/* Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
 * Returns eigenvalues ascending; eigenvectors[i] is the column for value i. */
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;  // column j corresponds to values[j]
};
SymmetricEigen jacobi_eigen(const Matrix& sym, double off_diag_tol = 1e-12);

}  // namespace l1geom
