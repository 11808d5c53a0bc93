#include "posethdx/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "posethdx/errors.hpp"

namespace posethdx {

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(const std::vector<double>& d) {
  Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (int i = 0; i < m.rows(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (cols_ != rhs.rows_) fail(ErrorCode::LevelMismatch, "matrix product shape mismatch");
  Matrix out(rows_, rhs.cols_);
  for (int r = 0; r < rows_; ++r) {
    for (int k = 0; k < cols_; ++k) {
      const double v = (*this)(r, k);
      if (v == 0.0) continue;
      for (int c = 0; c < rhs.cols_; ++c) out(r, c) += v * rhs(k, c);
    }
  }
  return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
  Matrix out(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] + rhs.a_[i];
  return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
  Matrix out(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] - rhs.a_[i];
  return out;
}

Matrix Matrix::scaled(double s) const {
  Matrix out(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] * s;
  return out;
}

std::vector<double> Matrix::apply(const std::vector<double>& v) const {
  if (static_cast<int>(v.size()) != cols_) fail(ErrorCode::LevelMismatch, "matrix apply shape mismatch");
  std::vector<double> out(rows_, 0.0);
  for (int r = 0; r < rows_; ++r) {
    double acc = 0.0;
    for (int c = 0; c < cols_; ++c) acc += (*this)(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

double Matrix::max_abs_diff(const Matrix& rhs) const {
  double m = 0.0;
  for (size_t i = 0; i < a_.size(); ++i) m = std::max(m, std::abs(a_[i] - rhs.a_[i]));
  return m;
}

double Matrix::frobenius_inner(const Matrix& rhs) const {
  double acc = 0.0;
  for (size_t i = 0; i < a_.size(); ++i) acc += a_[i] * rhs.a_[i];
  return acc;
}

namespace {

double offdiagonal_mass(const Matrix& a) {
  double acc = 0.0;
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c)
      if (r != c) acc += a(r, c) * a(r, c);
  return std::sqrt(acc);
}

}  // namespace

EigenSystem jacobi_eigensystem(const Matrix& symmetric) {
  const int n = symmetric.rows();
  Matrix a = symmetric;
  // Symmetrize away representation roundoff before rotating.
  for (int r = 0; r < n; ++r)
    for (int c = r + 1; c < n; ++c) {
      const double v = 0.5 * (a(r, c) + a(c, r));
      a(r, c) = v;
      a(c, r) = v;
    }
  Matrix v = Matrix::identity(n);

  constexpr int kMaxSweeps = 100;
  constexpr double kOffTol = 1e-12;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (offdiagonal_mass(a) < kOffTol) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) > a(j, j); });

  EigenSystem out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (int i = 0; i < n; ++i) {
    out.values[i] = a(order[i], order[i]);
    for (int k = 0; k < n; ++k) out.vectors(k, i) = v(k, order[i]);
  }
  return out;
}

std::vector<double> symmetric_eigenvalues(const Matrix& symmetric) {
  return jacobi_eigensystem(symmetric).values;
}

double spectral_norm(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  const Matrix gram = a.transposed() * a;
  const auto vals = symmetric_eigenvalues(gram);
  return std::sqrt(std::max(0.0, vals.front()));
}

Matrix orthonormal_columns(const Matrix& a, double rank_tol) {
  const int n = a.rows();
  const int m = a.cols();
  std::vector<std::vector<double>> cols(m, std::vector<double>(n));
  std::vector<double> norms(m, 0.0);
  for (int c = 0; c < m; ++c) {
    for (int r = 0; r < n; ++r) cols[c][r] = a(r, c);
    norms[c] = norm(cols[c]);
  }
  std::vector<bool> used(m, false);
  std::vector<std::vector<double>> basis;
  for (int step = 0; step < m; ++step) {
    int pivot = -1;
    double best = rank_tol;
    for (int c = 0; c < m; ++c) {
      if (!used[c] && norms[c] > best) {
        best = norms[c];
        pivot = c;
      }
    }
    if (pivot < 0) break;
    used[pivot] = true;
    std::vector<double> q = cols[pivot];
    const double nq = norm(q);
    for (double& x : q) x /= nq;
    // Re-orthogonalize once for stability.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        const double proj = dot(q, b);
        for (int r = 0; r < n; ++r) q[r] -= proj * b[r];
      }
      const double nn = norm(q);
      if (nn < rank_tol) {
        q.clear();
        break;
      }
      for (double& x : q) x /= nn;
    }
    if (q.empty()) continue;
    basis.push_back(q);
    for (int c = 0; c < m; ++c) {
      if (used[c]) continue;
      const double proj = dot(cols[c], q);
      for (int r = 0; r < n; ++r) cols[c][r] -= proj * q[r];
      norms[c] = norm(cols[c]);
    }
  }
  Matrix out(n, static_cast<int>(basis.size()));
  for (int c = 0; c < out.cols(); ++c)
    for (int r = 0; r < n; ++r) out(r, c) = basis[c][r];
  return out;
}

Matrix null_space(const Matrix& a, double rank_tol) {
  const int n = a.cols();
  const Matrix row_space = orthonormal_columns(a.transposed(), rank_tol);
  // Project the identity columns off the row space and orthonormalize.
  Matrix residual = Matrix::identity(n);
  for (int c = 0; c < n; ++c) {
    for (int b = 0; b < row_space.cols(); ++b) {
      double proj = 0.0;
      for (int r = 0; r < n; ++r) proj += residual(r, c) * row_space(r, b);
      for (int r = 0; r < n; ++r) residual(r, c) -= proj * row_space(r, b);
    }
  }
  return orthonormal_columns(residual, rank_tol);
}

Matrix complement_basis(const std::vector<double>& unit) {
  const int n = static_cast<int>(unit.size());
  Matrix row(1, n);
  for (int c = 0; c < n; ++c) row(0, c) = unit[c];
  return null_space(row);
}

std::vector<double> least_squares(const Matrix& a, const std::vector<double>& b, double rank_tol) {
  // Minimum-norm solution through the eigendecomposition of A^T A.
  const Matrix gram = a.transposed() * a;
  const EigenSystem eig = jacobi_eigensystem(gram);
  std::vector<double> atb(a.cols(), 0.0);
  for (int c = 0; c < a.cols(); ++c) {
    double acc = 0.0;
    for (int r = 0; r < a.rows(); ++r) acc += a(r, c) * b[r];
    atb[c] = acc;
  }
  const double scale = eig.values.empty() ? 0.0 : std::max(1.0, eig.values.front());
  std::vector<double> x(a.cols(), 0.0);
  for (int i = 0; i < static_cast<int>(eig.values.size()); ++i) {
    if (eig.values[i] < rank_tol * rank_tol * scale) continue;
    double coef = 0.0;
    for (int r = 0; r < a.cols(); ++r) coef += eig.vectors(r, i) * atb[r];
    coef /= eig.values[i];
    for (int r = 0; r < a.cols(); ++r) x[r] += coef * eig.vectors(r, i);
  }
  return x;
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double acc = 0.0;
  for (size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

double norm(const std::vector<double>& x) { return std::sqrt(dot(x, x)); }

}  // namespace posethdx
