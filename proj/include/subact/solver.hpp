#ifndef SUBACT_SOLVER_HPP
#define SUBACT_SOLVER_HPP

#include <cassert>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "subact/distribution.hpp"
#include "subact/fusion_frame.hpp"

namespace subact {

/// Visit the frame's subspaces in order, wrapping around.
struct Cyclic {
  FusionFrame frame;
};
/// Independent draws from a discrete law.
struct RandomDiscrete {
  SubspaceDistribution dist;
};
/// Independent draws from any law, the invariant one included.
struct IidStream {
  SubspaceDistribution dist;
};
using ControlStrategy = std::variant<Cyclic, RandomDiscrete, IidStream>;

struct NoNoise {};
enum class NoiseMagnitude { uniform, fixed };
/// Measurement noise ε_n ∈ W_n with ‖ε_n‖ ≤ epsilon: a uniform direction in
/// W_n scaled by epsilon times a uniform factor in [0, 1] (or by epsilon
/// itself with NoiseMagnitude::fixed).
struct InSubspaceNoise {
  double epsilon = 0.0;
  std::uint64_t stream = 0;  // drawn from SeededRng(run seed, stream)
  NoiseMagnitude magnitude = NoiseMagnitude::uniform;
};
using NoiseModel = std::variant<NoNoise, InSubspaceNoise>;

inline constexpr long kStreamDraw = -1;  // `chosen` entry for a non-atom draw

struct SolveTrace {
  std::vector<double> sq_errors;  // ‖x - x_n‖², n = 0..N
  std::vector<long> chosen;       // atom/frame index per step, or kStreamDraw
  Vector estimate;
  std::vector<Subspace> subspaces;  // W_1..W_N when recording was requested
  std::vector<Vector> noise;        // ε_1..ε_N when recording was requested
};

struct RunOptions {
  bool record = false;
};

/// One subspace action: x_prev + y - P_W(x_prev).
///
/// y must lie in W. Debug builds assert this within 1e-9; release builds
/// project y onto W first.
inline Vector step(const Vector& x_prev, const Subspace& w, const Vector& y) {
  if (x_prev.size() != w.ambient_dim() || y.size() != w.ambient_dim())
    fail(ErrorCode::DimensionMismatch, "step: vector length differs from the ambient dimension");
#ifdef NDEBUG
  const Vector y_in = project(w, y);
#else
  const Vector& y_in = y;
  assert(norm(y - project(w, y)) <= 1e-9 * std::max(1.0, norm(y)));
#endif
  Vector x = x_prev;
  x += y_in;
  x -= project(w, x_prev);
  return x;
}

namespace detail {

inline Vector noise_in_subspace(const Subspace& w, double epsilon, NoiseMagnitude magnitude, SeededRng& rng) {
  Vector g(w.dim());
  double n2 = 0.0;
  while (n2 == 0.0) {
    for (std::size_t i = 0; i < w.dim(); ++i) g[i] = rng.normal();
    n2 = norm_sq(g);
  }
  const double factor = magnitude == NoiseMagnitude::uniform ? rng.uniform() : 1.0;
  const double scale = epsilon * factor / std::sqrt(n2);
  return (w.basis() * g) *= scale;
}

// x ← x + B Bᵀ(target - x) (+ noise): the step with y = P_W(target) folded in.
inline void apply_action(Vector& x, const Subspace& w, const Vector& target, const Vector* noise) {
  const Matrix& b = w.basis();
  const std::size_t d = b.rows();
  const std::size_t k = b.cols();
  std::vector<double> c(k, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    const double r = target[i] - x[i];
    for (std::size_t j = 0; j < k; ++j) c[j] += b(i, j) * r;
  }
  for (std::size_t i = 0; i < d; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += b(i, j) * c[j];
    x[i] += s;
  }
  if (noise) x += *noise;
}

}  // namespace detail

/// Runs N subspace actions toward x_true from x0 and records ‖x - x_n‖².
///
/// Subspaces come from the strategy; measurements are y_n = P_{W_n}(x_true)
/// plus optional in-subspace noise. Deterministic given the rng's
/// (seed, stream) and the noise stream.
inline SolveTrace run(const ControlStrategy& strategy, const Vector& x_true, const Vector& x0, long n_iter,
                      const NoiseModel& noise, SeededRng& rng, const RunOptions& opts = {}) {
  if (n_iter < 0) fail(ErrorCode::InvalidParameter, "n_iter must be >= 0");
  const std::size_t d = x_true.size();
  if (x0.size() != d) fail(ErrorCode::DimensionMismatch, "x0 and x_true differ in length");
  const std::size_t ambient = std::visit(
      [](const auto& s) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Cyclic>)
          return s.frame.ambient_dim();
        else
          return s.dist.ambient_dim();
      },
      strategy);
  if (ambient != d) fail(ErrorCode::DimensionMismatch, "strategy dimension differs from x_true");
  if (const auto* rd = std::get_if<RandomDiscrete>(&strategy); rd && !rd->dist.is_discrete())
    fail(ErrorCode::UnsupportedVariant, "RandomDiscrete needs a discrete law");

  const InSubspaceNoise* noisy = std::get_if<InSubspaceNoise>(&noise);
  std::optional<SeededRng> noise_rng;
  if (noisy) {
    if (!(noisy->epsilon >= 0.0) || !std::isfinite(noisy->epsilon))
      fail(ErrorCode::InvalidParameter, "noise epsilon must be finite and >= 0");
    noise_rng.emplace(rng.seed(), noisy->stream);
  }

  SolveTrace trace;
  trace.sq_errors.reserve(static_cast<std::size_t>(n_iter) + 1);
  trace.chosen.reserve(static_cast<std::size_t>(n_iter));
  Vector x = x0;
  trace.sq_errors.push_back(norm_sq(x_true - x));

  for (long n = 0; n < n_iter; ++n) {
    std::optional<Subspace> drawn;
    const Subspace* w = nullptr;
    long index = kStreamDraw;
    if (const auto* cyc = std::get_if<Cyclic>(&strategy)) {
      index = n % static_cast<long>(cyc->frame.size());
      w = &cyc->frame.subspace(static_cast<std::size_t>(index));
    } else {
      const SubspaceDistribution& dist =
          std::holds_alternative<RandomDiscrete>(strategy) ? std::get<RandomDiscrete>(strategy).dist
                                                           : std::get<IidStream>(strategy).dist;
      if (dist.is_discrete()) {
        const DiscreteLaw& law = dist.as_discrete();
        const std::size_t i = sample_index(law, rng);
        index = static_cast<long>(i);
        w = &law.atoms[i];
      } else {
        drawn.emplace(sample(dist, rng));
        w = &*drawn;
      }
    }

    std::optional<Vector> eps;
    if (noisy) eps = detail::noise_in_subspace(*w, noisy->epsilon, noisy->magnitude, *noise_rng);
    detail::apply_action(x, *w, x_true, eps ? &*eps : nullptr);

    trace.sq_errors.push_back(norm_sq(x_true - x));
    trace.chosen.push_back(index);
    if (opts.record) {
      trace.subspaces.push_back(*w);
      trace.noise.push_back(eps ? *eps : Vector(d));
    }
  }
  trace.estimate = std::move(x);
  return trace;
}

/// CSV dump "n,sq_error,chosen"; row 0 has no chosen subspace, stream draws print "stream".
inline void write_trace_csv(std::ostream& os, const SolveTrace& trace) {
  os << "n,sq_error,chosen\n";
  for (std::size_t n = 0; n < trace.sq_errors.size(); ++n) {
    os << n << ',' << format_real(trace.sq_errors[n]) << ',';
    if (n > 0) {
      const long c = trace.chosen[n - 1];
      if (c == kStreamDraw)
        os << "stream";
      else
        os << c;
    }
    os << '\n';
  }
}

/// A recorded measurement: subspace and y = P_W(x) (possibly noisy).
struct Measurement {
  Subspace subspace;
  Vector y;
};

/// Genuine recovery: applies the measurements in order, `passes` times over.
inline Vector run_from_stream(const std::vector<Measurement>& stream, const Vector& x0, int passes = 1) {
  if (passes < 0) fail(ErrorCode::InvalidParameter, "passes must be >= 0");
  Vector x = x0;
  for (int p = 0; p < passes; ++p)
    for (const Measurement& m : stream) x = step(x, m.subspace, m.y);
  return x;
}

struct IdentityReport {
  bool ok = true;
  bool applicable = true;
  double max_step_error = 0.0;     // stepwise energy identity
  double max_product_error = 0.0;  // product form
  double max_composed_error = 0.0; // composed complementary projections
  std::string diagnostics;
};

/// Replays a recorded noiseless run and checks the three error identities:
/// the per-step energy drop, the product of (1 - ‖P_{W_k} u_{k-1}‖²) factors,
/// and x - x_n = P_{W_n⊥} ... P_{W_1⊥}(x - x_0).
inline IdentityReport verify_error_identities(const SolveTrace& trace, const Vector& x_true, const Vector& x0) {
  IdentityReport r;
  for (const Vector& e : trace.noise)
    if (norm_sq(e) > 0.0) {
      r.applicable = false;
      r.diagnostics = "noisy run: identities not applicable";
      return r;
    }
  const std::size_t steps = trace.sq_errors.size() - 1;
  if (trace.subspaces.size() != steps) {
    r.ok = false;
    r.diagnostics = "trace was not recorded with subspaces";
    return r;
  }
  Vector residual = x_true - x0;  // composed projections applied to x - x_0
  const double initial = trace.sq_errors.front();
  double product = 1.0;
  for (std::size_t n = 1; n <= steps; ++n) {
    const Subspace& w = trace.subspaces[n - 1];
    const double prev = trace.sq_errors[n - 1];
    const double drop = proj_norm_sq(w, residual);

    const double step_err = std::abs(trace.sq_errors[n] - (prev - drop));
    r.max_step_error = std::max(r.max_step_error, step_err);
    if (step_err > 1e-10 * std::max(1.0, initial)) {
      r.ok = false;
      r.diagnostics += "energy identity fails at step " + std::to_string(n) + "; ";
    }

    if (prev > 0.0) product *= 1.0 - drop / prev;
    else product = 0.0;
    const double prod_err = std::abs(trace.sq_errors[n] - initial * product);
    r.max_product_error = std::max(r.max_product_error, prod_err);
    if (prod_err > 1e-10 * std::max(1.0, initial)) {
      r.ok = false;
      r.diagnostics += "product form fails at step " + std::to_string(n) + "; ";
    }

    residual -= project(w, residual);
  }
  const double comp_err = norm(residual - (x_true - trace.estimate));
  r.max_composed_error = comp_err;
  if (comp_err > 1e-8 * std::max(1.0, std::sqrt(initial))) {
    r.ok = false;
    r.diagnostics += "composed projection identity fails; ";
  }
  return r;
}

}  // namespace subact

#endif  // SUBACT_SOLVER_HPP
