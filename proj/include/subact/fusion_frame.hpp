#ifndef SUBACT_FUSION_FRAME_HPP
#define SUBACT_FUSION_FRAME_HPP

#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <vector>

#include "subact/linalg.hpp"
#include "subact/subspace.hpp"

namespace subact {

struct FrameBounds {
  double lower = 0.0;  // A
  double upper = 0.0;  // B
};

/// Weighted subspaces {(W_n, v_n)} whose operator S = Σ v_n² P_{W_n} is
/// positive definite. Construction computes S and rejects non-frames.
class FusionFrame {
 public:
  FusionFrame(std::vector<Subspace> subspaces, std::vector<double> weights)
      : subspaces_(std::move(subspaces)), weights_(std::move(weights)) {
    if (subspaces_.empty()) fail(ErrorCode::InvalidParameter, "fusion frame needs a subspace");
    if (weights_.size() != subspaces_.size())
      fail(ErrorCode::InvalidParameter, "one weight per subspace required");
    const std::size_t d = subspaces_.front().ambient_dim();
    for (std::size_t n = 0; n < subspaces_.size(); ++n) {
      if (subspaces_[n].ambient_dim() != d)
        fail(ErrorCode::DimensionMismatch, "subspaces of a fusion frame share the ambient dimension");
      if (!(weights_[n] > 0.0) || !std::isfinite(weights_[n]))
        fail(ErrorCode::InvalidParameter, "fusion frame weights must be positive");
    }
    operator_ = Matrix(d, d);
    for (std::size_t n = 0; n < subspaces_.size(); ++n)
      operator_ += (weights_[n] * weights_[n]) * subspaces_[n].projector();
    const EigenDecomposition eig = sym_eig(operator_);
    bounds_ = {eig.values.front(), eig.values.back()};
    if (bounds_.lower <= 1e-10)
      fail(ErrorCode::NotAFrame, "lower frame bound " + format_real(bounds_.lower) + " <= 1e-10");
  }

  /// Unit weights.
  explicit FusionFrame(std::vector<Subspace> subspaces)
      : FusionFrame(subspaces, std::vector<double>(subspaces.size(), 1.0)) {}

  std::size_t ambient_dim() const noexcept { return operator_.rows(); }
  std::size_t size() const noexcept { return subspaces_.size(); }
  const std::vector<Subspace>& subspaces() const noexcept { return subspaces_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const Subspace& subspace(std::size_t n) const { return subspaces_.at(n); }
  double weight(std::size_t n) const { return weights_.at(n); }

  const Matrix& frame_operator() const noexcept { return operator_; }
  /// Optimal bounds: extreme eigenvalues of S.
  const FrameBounds& bounds() const noexcept { return bounds_; }

 private:
  std::vector<Subspace> subspaces_;
  std::vector<double> weights_;
  Matrix operator_;
  FrameBounds bounds_;
};

inline const Matrix& frame_operator(const FusionFrame& ff) { return ff.frame_operator(); }
inline FrameBounds frame_bounds(const FusionFrame& ff) { return ff.bounds(); }

/// y_n = P_{W_n}(x) for every subspace of the frame.
inline std::vector<Vector> measure(const FusionFrame& ff, const Vector& x) {
  std::vector<Vector> y;
  y.reserve(ff.size());
  for (const Subspace& w : ff.subspaces()) y.push_back(project(w, x));
  return y;
}

struct ClassicResult {
  Vector estimate;
  std::vector<double> errors;  // ‖x - x_n‖ for n = 0..n_iter, only when truth was given
};

/// Frame-operator iteration x_n = x_{n-1} + 2/(A+B) (Σ v_j² y_j - S x_{n-1}).
///
/// The error contracts by (B-A)/(B+A) per step. When `truth` is supplied the
/// error norms are traced; it is never used to form the iterates.
inline ClassicResult classic_recover(const FusionFrame& ff, const std::vector<Vector>& y,
                                     const Vector& x0, int n_iter,
                                     const std::optional<Vector>& truth = std::nullopt) {
  const std::size_t d = ff.ambient_dim();
  if (y.size() != ff.size()) fail(ErrorCode::DimensionMismatch, "one measurement per subspace required");
  if (x0.size() != d) fail(ErrorCode::DimensionMismatch, "x0 has the wrong length");
  if (truth && truth->size() != d) fail(ErrorCode::DimensionMismatch, "truth has the wrong length");
  if (n_iter < 0) fail(ErrorCode::InvalidParameter, "n_iter must be >= 0");

  Vector sy(d);  // S x = Σ v² y
  for (std::size_t n = 0; n < ff.size(); ++n) {
    if (y[n].size() != d) fail(ErrorCode::DimensionMismatch, "measurement has the wrong length");
    const double w2 = ff.weight(n) * ff.weight(n);
    for (std::size_t i = 0; i < d; ++i) sy[i] += w2 * y[n][i];
  }
  const FrameBounds fb = ff.bounds();
  const double relax = 2.0 / (fb.lower + fb.upper);
  const Matrix& s = ff.frame_operator();

  ClassicResult out{x0, {}};
  if (truth) out.errors.push_back(norm(*truth - out.estimate));
  for (int it = 0; it < n_iter; ++it) {
    const Vector sx = s * out.estimate;
    for (std::size_t i = 0; i < d; ++i) out.estimate[i] += relax * (sy[i] - sx[i]);
    if (truth) out.errors.push_back(norm(*truth - out.estimate));
  }
  return out;
}

// File form: "d N", then per subspace a line "v k" and the k basis rows.

inline void write_fusion_frame(std::ostream& os, const FusionFrame& ff) {
  os << ff.ambient_dim() << ' ' << ff.size() << '\n';
  for (std::size_t n = 0; n < ff.size(); ++n) {
    const Subspace& w = ff.subspace(n);
    os << format_real(ff.weight(n)) << ' ' << w.dim() << '\n';
    for (std::size_t c = 0; c < w.dim(); ++c) {
      for (std::size_t i = 0; i < w.ambient_dim(); ++i)
        os << (i ? " " : "") << format_real(w.basis()(i, c));
      os << '\n';
    }
  }
}

inline FusionFrame read_fusion_frame(std::istream& is) {
  long d = 0, count = 0;
  if (!(is >> d >> count) || d < 1 || count < 1) fail(ErrorCode::IoError, "expected fusion frame header 'd N'");
  std::vector<Subspace> subspaces;
  std::vector<double> weights;
  for (long n = 0; n < count; ++n) {
    double v = 0.0;
    long k = 0;
    if (!(is >> v >> k) || k < 1 || k > d) fail(ErrorCode::IoError, "expected weight line 'v k'");
    std::vector<Vector> rows;
    for (long c = 0; c < k; ++c) {
      Vector r(static_cast<std::size_t>(d));
      for (long i = 0; i < d; ++i)
        if (!(is >> r[static_cast<std::size_t>(i)])) fail(ErrorCode::IoError, "truncated basis row");
      rows.push_back(std::move(r));
    }
    subspaces.push_back(from_spanning(rows));
    weights.push_back(v);
  }
  return FusionFrame(std::move(subspaces), std::move(weights));
}

}  // namespace subact

#endif  // SUBACT_FUSION_FRAME_HPP
