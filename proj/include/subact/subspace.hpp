#ifndef SUBACT_SUBSPACE_HPP
#define SUBACT_SUBSPACE_HPP

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "subact/linalg.hpp"
#include "subact/rng.hpp"

namespace subact {

/// A k-dimensional subspace of R^d held through an orthonormal basis (d×k).
///
/// Immutable. Two subspaces are the same when their projectors agree, so
/// compare with same_span() rather than by basis entries.
class Subspace {
 public:
  /// Takes ownership of a basis whose columns are already orthonormal.
  explicit Subspace(Matrix orthonormal_basis) : basis_(std::move(orthonormal_basis)) {
    const std::size_t d = basis_.rows();
    const std::size_t k = basis_.cols();
    if (k < 1 || k > d) fail(ErrorCode::InvalidParameter, "subspace needs 1 <= k <= d");
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i) s += basis_(i, a) * basis_(i, b);
        if (std::abs(s - (a == b ? 1.0 : 0.0)) > 1e-10)
          fail(ErrorCode::InvalidParameter, "basis columns are not orthonormal");
      }
  }

  std::size_t ambient_dim() const noexcept { return basis_.rows(); }
  std::size_t dim() const noexcept { return basis_.cols(); }
  const Matrix& basis() const noexcept { return basis_; }

  /// BBᵀ as a dense d×d matrix.
  Matrix projector() const {
    const std::size_t d = ambient_dim();
    Matrix p(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) {
        double s = 0.0;
        for (std::size_t c = 0; c < dim(); ++c) s += basis_(i, c) * basis_(j, c);
        p(i, j) = p(j, i) = s;
      }
    return p;
  }

 private:
  Matrix basis_;
};

inline Subspace from_spanning(std::span<const Vector> vectors, double tol = kDefaultTol) {
  if (vectors.empty()) fail(ErrorCode::InvalidParameter, "no spanning vectors");
  return Subspace(orthonormalize(Matrix::from_columns(vectors), tol));
}

inline Subspace from_spanning(std::initializer_list<Vector> vectors, double tol = kDefaultTol) {
  return from_spanning(std::span<const Vector>(vectors.begin(), vectors.size()), tol);
}

/// The subspace spanned by canonical basis vectors e_first, ..., e_{first+k-1}.
inline Subspace coordinate_subspace(std::size_t d, std::size_t first, std::size_t k) {
  if (first + k > d) fail(ErrorCode::InvalidParameter, "coordinate block out of range");
  Matrix b(d, k);
  for (std::size_t c = 0; c < k; ++c) b(first + c, c) = 1.0;
  return Subspace(std::move(b));
}

namespace detail {
inline void check_dim(const Subspace& w, const Vector& x) {
  if (x.size() != w.ambient_dim())
    fail(ErrorCode::DimensionMismatch, "vector length " + std::to_string(x.size()) +
                                           " vs ambient dimension " + std::to_string(w.ambient_dim()));
}
}  // namespace detail

/// Coordinates Bᵀx of the projection in the subspace basis.
inline Vector coordinates(const Subspace& w, const Vector& x) {
  detail::check_dim(w, x);
  return transpose_times(w.basis(), x);
}

inline Vector project(const Subspace& w, const Vector& x) {
  return w.basis() * coordinates(w, x);
}

/// ‖P_W x‖² computed as ‖Bᵀx‖².
inline double proj_norm_sq(const Subspace& w, const Vector& x) {
  detail::check_dim(w, x);
  const Matrix& b = w.basis();
  const std::size_t d = b.rows();
  const std::size_t k = b.cols();
  if (k == 1) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += b(i, 0) * x[i];
    return s * s;
  }
  return norm_sq(transpose_times(b, x));
}

/// ‖P_V - P_W‖_F, evaluated as sqrt(‖(I - P_W)B_v‖_F² + ‖(I - P_V)B_w‖_F²).
/// The residual form keeps full accuracy for nearly equal spans, where
/// k_v + k_w - 2‖B_vᵀB_w‖_F² cancels to round-off.
inline double grassmann_distance(const Subspace& v, const Subspace& w) {
  if (v.ambient_dim() != w.ambient_dim())
    fail(ErrorCode::DimensionMismatch, "subspaces live in different ambient spaces");
  const Matrix& bv = v.basis();
  const Matrix& bw = w.basis();
  const Matrix cross = bv.transpose() * bw;  // k_v × k_w
  const Matrix rv = bv - bw * cross.transpose();
  const Matrix rw = bw - bv * cross;
  const double fv = frobenius_norm(rv);
  const double fw = frobenius_norm(rw);
  return std::sqrt(fv * fv + fw * fw);
}

inline bool same_span(const Subspace& v, const Subspace& w, double tol = 1e-8) {
  return v.ambient_dim() == w.ambient_dim() && grassmann_distance(v, w) <= tol;
}

/// Draw from the rotation-invariant law on G(k, d): QR of a Gaussian d×k matrix.
inline Subspace sample_invariant(SeededRng& rng, std::size_t k, std::size_t d) {
  if (k < 1 || k > d) fail(ErrorCode::InvalidParameter, "sample_invariant needs 1 <= k <= d");
  Matrix g = gaussian_matrix(rng, d, k);
  for (;;) {
    try {
      return Subspace(orthonormalize(g, 1e-300));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RankDeficient) throw;
      g = gaussian_matrix(rng, d, k);  // probability-zero event
    }
  }
}

// Text form: "d k" then k rows of d basis entries (one row per basis vector).

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_subspace(std::ostream& os, const Subspace& w) {
  os << w.ambient_dim() << ' ' << w.dim() << '\n';
  for (std::size_t c = 0; c < w.dim(); ++c) {
    for (std::size_t i = 0; i < w.ambient_dim(); ++i)
      os << (i ? " " : "") << format_real(w.basis()(i, c));
    os << '\n';
  }
}

/// Reads one subspace. Orthonormal rows are kept verbatim; otherwise they only
/// need to span the subspace and are orthonormalized.
inline Subspace read_subspace(std::istream& is) {
  long d = 0, k = 0;
  if (!(is >> d >> k)) fail(ErrorCode::IoError, "expected subspace header 'd k'");
  if (d < 1 || k < 1 || k > d) fail(ErrorCode::IoError, "invalid subspace header");
  std::vector<Vector> rows;
  for (long c = 0; c < k; ++c) {
    Vector v(static_cast<std::size_t>(d));
    for (long i = 0; i < d; ++i)
      if (!(is >> v[static_cast<std::size_t>(i)])) fail(ErrorCode::IoError, "truncated subspace basis");
    rows.push_back(std::move(v));
  }
  Matrix b = Matrix::from_columns(rows);
  if (max_abs(b.transpose() * b - Matrix::identity(b.cols())) <= 1e-12) return Subspace(std::move(b));
  return from_spanning(rows);
}

}  // namespace subact

#endif  // SUBACT_SUBSPACE_HPP
