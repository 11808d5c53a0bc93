#pragma once

#include <cstddef>
#include <vector>

namespace posethdx {

// Dense row-major matrix of doubles. All level spaces in this project are
// small (a few hundred rows at most), so everything is kept dense and exact
// operations are preferred over clever ones.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {}

  static Matrix identity(int n);
  static Matrix diagonal(const std::vector<double>& d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

  Matrix transposed() const;
  Matrix operator*(const Matrix& rhs) const;
  Matrix operator+(const Matrix& rhs) const;
  Matrix operator-(const Matrix& rhs) const;
  Matrix scaled(double s) const;

  std::vector<double> apply(const std::vector<double>& v) const;

  double max_abs() const;
  double max_abs_diff(const Matrix& rhs) const;
  double frobenius_inner(const Matrix& rhs) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

struct EigenSystem {
  std::vector<double> values;  // sorted descending
  Matrix vectors;              // column i is the eigenvector for values[i]
};

// Cyclic Jacobi on a symmetric matrix. Sweeps run in a fixed (p, q) order and
// stop once the off-diagonal Frobenius mass drops below 1e-12, so results are
// reproducible bit-for-bit across runs.
EigenSystem jacobi_eigensystem(const Matrix& symmetric);

std::vector<double> symmetric_eigenvalues(const Matrix& symmetric);

// Largest singular value, computed as sqrt(lambda_max(A^T A)).
double spectral_norm(const Matrix& a);

// Orthonormal basis (as matrix columns) of the span of the input columns,
// via column-pivoted Gram-Schmidt with the given rank tolerance.
Matrix orthonormal_columns(const Matrix& a, double rank_tol = 1e-10);

// Orthonormal basis of the null space of `a` (right null space).
Matrix null_space(const Matrix& a, double rank_tol = 1e-10);

// Orthonormal basis of the orthogonal complement of a single unit vector.
Matrix complement_basis(const std::vector<double>& unit);

// Minimum-norm least-squares solution of a x = b.
std::vector<double> least_squares(const Matrix& a, const std::vector<double>& b,
                                  double rank_tol = 1e-10);

double dot(const std::vector<double>& x, const std::vector<double>& y);
double norm(const std::vector<double>& x);

}  // namespace posethdx
