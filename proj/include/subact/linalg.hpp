#ifndef SUBACT_LINALG_HPP
#define SUBACT_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "subact/error.hpp"

namespace subact {

inline constexpr double kDefaultTol = 1e-10;

/// Dense real vector. Thin value wrapper over contiguous storage.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0) : data_(n, fill) {}
  Vector(std::initializer_list<double> init) : data_(init) {}
  explicit Vector(std::vector<double> values) : data_(std::move(values)) {}

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  std::span<double> span() noexcept { return data_; }
  std::span<const double> span() const noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  Vector& operator+=(const Vector& o) {
    check_same(o);
    for (std::size_t i = 0; i < size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Vector& operator-=(const Vector& o) {
    check_same(o);
    for (std::size_t i = 0; i < size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Vector& operator*=(double a) {
    for (double& v : data_) v *= a;
    return *this;
  }

  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(double a, Vector v) { return v *= a; }
  friend Vector operator*(Vector v, double a) { return v *= a; }
  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  void check_same(const Vector& o) const {
    if (o.size() != size()) fail(ErrorCode::DimensionMismatch, "vector lengths differ");
  }

  std::vector<double> data_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) fail(ErrorCode::DimensionMismatch, "dot: lengths differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
inline double dot(const Vector& a, const Vector& b) { return dot(a.span(), b.span()); }
inline double norm_sq(const Vector& a) { return dot(a, a); }
inline double norm(const Vector& a) { return std::sqrt(norm_sq(a)); }

inline Vector normalized(Vector v) {
  const double n = norm(v);
  if (n == 0.0) fail(ErrorCode::DomainError, "cannot normalize the zero vector");
  return v *= 1.0 / n;
}

inline Vector unit_vector(std::size_t d, std::size_t i) {
  Vector e(d);
  e[i] = 1.0;
  return e;
}

/// Dense row-major real matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
      : rows_(rows), cols_(cols), data_(std::move(row_major)) {
    if (data_.size() != rows_ * cols_)
      fail(ErrorCode::DimensionMismatch, "matrix entry count does not match shape");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  /// Matrix whose columns are the given vectors.
  static Matrix from_columns(std::span<const Vector> cols) {
    if (cols.empty()) fail(ErrorCode::InvalidParameter, "no columns supplied");
    const std::size_t d = cols.front().size();
    Matrix m(d, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != d) fail(ErrorCode::DimensionMismatch, "columns of unequal length");
      for (std::size_t i = 0; i < d; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> entries() const noexcept { return data_; }

  Vector column(std::size_t j) const {
    Vector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(double a) {
    for (double& v : data_) v *= a;
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(double a, Matrix m) { return m *= a; }
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  void check_same(const Matrix& o) const {
    if (o.rows_ != rows_ || o.cols_ != cols_)
      fail(ErrorCode::DimensionMismatch, "matrix shapes differ");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) fail(ErrorCode::DimensionMismatch, "matrix product shapes");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const double ail = a(i, l);
      if (ail == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += ail * b(l, j);
    }
  return c;
}

inline Vector operator*(const Matrix& a, const Vector& x) {
  if (a.cols() != x.size()) fail(ErrorCode::DimensionMismatch, "matrix-vector shapes");
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

/// aᵀx without forming the transpose.
inline Vector transpose_times(const Matrix& a, const Vector& x) {
  if (a.rows() != x.size()) fail(ErrorCode::DimensionMismatch, "transpose-vector shapes");
  Vector y(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double xi = x[i];
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += a(i, j) * xi;
  }
  return y;
}

inline double max_abs(const Matrix& m) {
  double r = 0.0;
  for (double v : m.entries()) r = std::max(r, std::abs(v));
  return r;
}

inline double frobenius_norm(const Matrix& m) {
  double s = 0.0;
  for (double v : m.entries()) s += v * v;
  return std::sqrt(s);
}

inline double trace(const Matrix& m) {
  double t = 0.0;
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) t += m(i, i);
  return t;
}

inline double quadratic_form(const Matrix& a, const Vector& x) { return dot(x, a * x); }

/// Orthonormal basis of span(m) by Householder QR, thin Q (d×k).
///
/// The columns are signed so the triangular factor has a positive diagonal,
/// which makes the result a canonical function of the column sequence and
/// leaves an already-orthonormal input unchanged. Throws RankDeficient when a
/// diagonal entry of R has magnitude ≤ tol.
inline Matrix orthonormalize(const Matrix& m, double tol = kDefaultTol) {
  const std::size_t d = m.rows();
  const std::size_t k = m.cols();
  if (k == 0 || k > d) fail(ErrorCode::InvalidParameter, "orthonormalize needs 1 <= k <= d");

  Matrix r = m;
  std::vector<Vector> reflectors;
  reflectors.reserve(k);
  std::vector<double> diag(k);

  for (std::size_t j = 0; j < k; ++j) {
    double col_norm_sq = 0.0;
    for (std::size_t i = j; i < d; ++i) col_norm_sq += r(i, j) * r(i, j);
    const double col_norm = std::sqrt(col_norm_sq);
    // alpha has the sign opposite to the pivot to avoid cancellation.
    const double alpha = r(j, j) > 0.0 ? -col_norm : col_norm;
    Vector v(d);
    for (std::size_t i = j; i < d; ++i) v[i] = r(i, j);
    v[j] -= alpha;
    const double v_norm_sq = norm_sq(v);
    if (v_norm_sq > 0.0) {
      for (std::size_t c = j; c < k; ++c) {
        double s = 0.0;
        for (std::size_t i = j; i < d; ++i) s += v[i] * r(i, c);
        const double f = 2.0 * s / v_norm_sq;
        for (std::size_t i = j; i < d; ++i) r(i, c) -= f * v[i];
      }
    }
    diag[j] = v_norm_sq > 0.0 ? alpha : r(j, j);
    if (std::abs(diag[j]) <= tol)
      fail(ErrorCode::RankDeficient, "column " + std::to_string(j) + " is dependent on earlier columns");
    reflectors.push_back(std::move(v));
  }

  // Q = H_0 H_1 ... H_{k-1} applied to the first k columns of the identity.
  Matrix q(d, k);
  for (std::size_t j = 0; j < k; ++j) q(j, j) = 1.0;
  for (std::size_t jj = k; jj-- > 0;) {
    const Vector& v = reflectors[jj];
    const double v_norm_sq = norm_sq(v);
    if (v_norm_sq == 0.0) continue;
    for (std::size_t c = 0; c < k; ++c) {
      double s = 0.0;
      for (std::size_t i = jj; i < d; ++i) s += v[i] * q(i, c);
      const double f = 2.0 * s / v_norm_sq;
      for (std::size_t i = jj; i < d; ++i) q(i, c) -= f * v[i];
    }
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (diag[j] < 0.0)
      for (std::size_t i = 0; i < d; ++i) q(i, j) = -q(i, j);
  }
  return q;
}

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column i pairs with values[i]
};

struct JacobiOptions {
  double symmetry_tol = 1e-10;
  double off_diagonal_tol = 1e-12;
  int max_sweeps = 100;
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
inline EigenDecomposition sym_eig(const Matrix& a, const JacobiOptions& opts = {}) {
  const std::size_t n = a.rows();
  if (n == 0 || a.cols() != n) fail(ErrorCode::DimensionMismatch, "sym_eig needs a square matrix");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(a(i, j) - a(j, i)) > opts.symmetry_tol)
        fail(ErrorCode::NotSymmetric, "asymmetry exceeds tolerance");

  Matrix m = a;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m(i, j) = m(j, i) = 0.5 * (a(i, j) + a(j, i));
  Matrix v = Matrix::identity(n);

  const double scale = std::max(frobenius_norm(m), 1e-300);
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * m(i, j) * m(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > opts.off_diagonal_tol * scale) {
    if (sweep++ >= opts.max_sweeps)
      fail(ErrorCode::NoConvergence, "Jacobi sweep limit reached");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t r = 0; r < n; ++r) {
          const double mrp = m(r, p);
          const double mrq = m(r, q);
          m(r, p) = c * mrp - s * mrq;
          m(r, q) = s * mrp + c * mrq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double mpr = m(p, r);
          const double mqr = m(q, r);
          m(p, r) = c * mpr - s * mqr;
          m(q, r) = s * mpr + c * mqr;
        }
        m(p, q) = m(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = c * vrp - s * vrq;
          v(r, q) = s * vrp + c * vrq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return m(i, i) < m(j, j); });
  EigenDecomposition out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = m(order[c], order[c]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

}  // namespace subact

#endif  // SUBACT_LINALG_HPP
