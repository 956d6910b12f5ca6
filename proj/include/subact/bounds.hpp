#ifndef SUBACT_BOUNDS_HPP
#define SUBACT_BOUNDS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "subact/distribution.hpp"
#include "subact/quadrature.hpp"
#include "subact/special_functions.hpp"

namespace subact {

enum class BoundMethod { exact_eigen, optimizer, closed_form, quadrature, monte_carlo };

inline std::string_view to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::exact_eigen: return "exact_eigen";
    case BoundMethod::optimizer: return "optimizer";
    case BoundMethod::closed_form: return "closed_form";
    case BoundMethod::quadrature: return "quadrature";
    case BoundMethod::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

/// A Kaczmarz bound α_s (s > 0) or α_log (s == 0) with how it was obtained.
struct BoundEstimate {
  double value = 0.0;
  double s = 0.0;
  BoundMethod method = BoundMethod::closed_form;
  std::optional<Vector> attaining_x;
  std::optional<double> stderr_value;
  /// Set for optimizer results: the value is a lower bound on the true supremum.
  bool lower_bound_only = false;
};

inline double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

/// α_1 = 1 - λ_min(E[P_W]), attained at the λ_min eigenvector.
inline BoundEstimate alpha_one_exact(const SubspaceDistribution& dist) {
  const EigenDecomposition eig = sym_eig(expected_projection(dist));
  BoundEstimate b;
  b.value = clamp_unit(1.0 - eig.values.front());
  b.s = 1.0;
  b.method = BoundMethod::exact_eigen;
  b.attaining_x = eig.vectors.column(0);
  return b;
}

struct AscentOptions {
  int restarts = 64;
  int max_iter = 10'000;
  double tol = 1e-10;
  std::uint64_t seed = 0x5eed;
};

namespace detail {

inline constexpr double kGapFloor = 1e-12;

// Value and Euclidean gradient of x ↦ Σ p_n φ(1 - ‖B_nᵀx‖²) with
// φ(g) = g^s (s > 0) or log g (s == 0).
class SpherePotential {
 public:
  SpherePotential(const DiscreteLaw& law, double s) : law_(law), s_(s) {}

  double value(const Vector& x) const {
    double f = 0.0;
    for (std::size_t n = 0; n < law_.atoms.size(); ++n) {
      const double p = law_.probs[n];
      if (p == 0.0) continue;
      const double gap = std::max(0.0, 1.0 - proj_norm_sq(law_.atoms[n], x));
      if (s_ > 0.0) {
        f += p * std::pow(gap, s_);
      } else {
        if (gap <= 0.0) return -std::numeric_limits<double>::infinity();
        f += p * std::log(gap);
      }
    }
    return f;
  }

  Vector gradient(const Vector& x) const {
    Vector g(x.size());
    for (std::size_t n = 0; n < law_.atoms.size(); ++n) {
      const double p = law_.probs[n];
      if (p == 0.0) continue;
      const Subspace& w = law_.atoms[n];
      const Vector c = coordinates(w, x);
      const double gap = std::max(kGapFloor, 1.0 - norm_sq(c));
      // d/dx φ(1 - ‖Bᵀx‖²) = φ'(gap) · (-2 B Bᵀ x)
      const double dphi = s_ > 0.0 ? s_ * std::pow(gap, s_ - 1.0) : 1.0 / gap;
      const Vector bc = w.basis() * c;
      for (std::size_t i = 0; i < x.size(); ++i) g[i] -= 2.0 * p * dphi * bc[i];
    }
    return g;
  }

 private:
  const DiscreteLaw& law_;
  double s_;
};

struct AscentResult {
  Vector x;
  double value = 0.0;
};

// Projected gradient ascent on the unit sphere with Armijo backtracking and
// retraction by normalization.
inline AscentResult sphere_ascent(const SpherePotential& f, Vector x, const AscentOptions& opts) {
  double fx = f.value(x);
  double step = 1.0;
  int stalled = 0;
  for (int it = 0; it < opts.max_iter && std::isfinite(fx); ++it) {
    Vector g = f.gradient(x);
    const double radial = dot(g, x);
    for (std::size_t i = 0; i < x.size(); ++i) g[i] -= radial * x[i];
    const double gnorm_sq = norm_sq(g);
    if (std::sqrt(gnorm_sq) < opts.tol) break;
    bool moved = false;
    step = std::min(step * 4.0, 1e6);
    while (step > 1e-18) {
      Vector trial = x;
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] += step * g[i];
      trial = normalized(std::move(trial));
      const double ft = f.value(trial);
      if (ft >= fx + 1e-4 * step * gnorm_sq) {
        // gains below round-off for several steps: the value has converged
        stalled = ft - fx <= 4e-16 * std::max(1.0, std::abs(fx)) ? stalled + 1 : 0;
        x = std::move(trial);
        fx = ft;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved || stalled >= 8) break;
  }
  return {std::move(x), fx};
}

// Structured and random starting points for the sup over the sphere.
inline std::vector<Vector> ascent_starts(const SubspaceDistribution& dist, const AscentOptions& opts) {
  const DiscreteLaw& law = dist.as_discrete();
  const std::size_t d = dist.ambient_dim();
  std::vector<Vector> starts;
  const EigenDecomposition eig = sym_eig(expected_projection(dist));
  starts.push_back(eig.vectors.column(0));
  starts.push_back(eig.vectors.column(d - 1));
  starts.push_back(normalized(Vector(d, 1.0)));
  for (const Subspace& w : law.atoms)
    for (std::size_t c = 0; c < w.dim(); ++c) starts.push_back(w.basis().column(c));
  SeededRng rng(opts.seed, 0);
  for (int r = 0; r < opts.restarts; ++r) starts.push_back(random_unit_vector(rng, d));
  return starts;
}

inline BoundEstimate sup_over_sphere(const SubspaceDistribution& dist, double s, const AscentOptions& opts) {
  const DiscreteLaw& law = dist.as_discrete();
  const SpherePotential f(law, s);
  double best = -std::numeric_limits<double>::infinity();
  Vector best_x;
  for (Vector& start : ascent_starts(dist, opts)) {
    if (s == 0.0 && !std::isfinite(f.value(start))) continue;
    AscentResult r = sphere_ascent(f, std::move(start), opts);
    if (r.value > best || best_x.empty()) {
      best = r.value;
      best_x = std::move(r.x);
    }
  }
  BoundEstimate b;
  b.s = s;
  b.method = BoundMethod::optimizer;
  b.lower_bound_only = true;
  if (best_x.empty()) {
    // every start lies in an atom: the log potential is -inf everywhere probed
    b.value = 0.0;
    return b;
  }
  b.value = s > 0.0 ? clamp_unit(std::pow(std::max(best, 0.0), 1.0 / s)) : clamp_unit(std::exp(best));
  b.attaining_x = std::move(best_x);
  return b;
}

}  // namespace detail

/// α_s of a discrete law by multistart ascent. The result is a lower bound on
/// the supremum (flagged in the estimate).
inline BoundEstimate alpha_s_sup(const SubspaceDistribution& dist, double s, const AscentOptions& opts = {}) {
  if (!dist.is_discrete())
    fail(ErrorCode::UnsupportedVariant, "the invariant law is x-independent; use invariant_alpha_closed_form");
  if (!(s > 0.0)) fail(ErrorCode::InvalidParameter, "alpha_s_sup needs s > 0");
  return detail::sup_over_sphere(dist, s, opts);
}

/// α_log of a discrete law by multistart ascent on the log potential.
inline BoundEstimate alpha_log_sup(const SubspaceDistribution& dist, const AscentOptions& opts = {}) {
  if (!dist.is_discrete())
    fail(ErrorCode::UnsupportedVariant, "the invariant law is x-independent; use invariant_alpha_closed_form");
  return detail::sup_over_sphere(dist, 0.0, opts);
}

/// Γ_{k,d} bounds: [B(k/2, (d-k)/2 + s) / B(k/2, (d-k)/2)]^{1/s}, and for s = 0
/// exp(ψ((d-k)/2) - ψ(d/2)).
inline BoundEstimate invariant_alpha_closed_form(std::size_t k, std::size_t d, double s) {
  if (k < 1 || k >= d) fail(ErrorCode::InvalidParameter, "closed form needs 1 <= k < d");
  if (!(s >= 0.0) || !std::isfinite(s)) fail(ErrorCode::InvalidParameter, "s must be >= 0");
  const double a = 0.5 * static_cast<double>(k);
  const double b = 0.5 * static_cast<double>(d - k);
  BoundEstimate est;
  est.s = s;
  est.method = BoundMethod::closed_form;
  if (s == 0.0)
    est.value = std::exp(digamma(b) - digamma(0.5 * static_cast<double>(d)));
  else
    est.value = std::exp((log_beta(a, b + s) - log_beta(a, b)) / s);
  return est;
}

/// E log(1 - ‖P_W x‖²) under Γ_{k,d} through the sphere-coordinate reduction
/// 2 H(S^{k-1}) H(S^{d-k-1}) / H(S^{d-1}) ∫_0^1 (1-ρ²)^{(k-2)/2} ρ^{d-k-1} log ρ dρ.
inline double c_log_quadrature(std::size_t k, std::size_t d) {
  if (k < 1 || k >= d) fail(ErrorCode::InvalidParameter, "c_log_quadrature needs 1 <= k < d");
  const int ki = static_cast<int>(k);
  const int di = static_cast<int>(d);
  const double half_power = 0.5 * (ki - 2);
  const int rho_power = di - ki - 1;
  auto integrand = [&](double rho, double rho_c) {
    if (rho <= 0.0) return 0.0;
    // 1 - ρ² = (1 - ρ)(1 + ρ) keeps accuracy near ρ = 1
    return std::pow(rho_c * (1.0 + rho), half_power) * std::pow(rho, rho_power) * std::log(rho);
  };
  const double integral = quadrature_01(integrand, SingularEnds::both);
  const double log_factor =
      std::log(2.0) + log_sphere_area(ki - 1) + log_sphere_area(di - ki - 1) - log_sphere_area(di - 1);
  return std::exp(log_factor) * integral;
}

struct TightnessOptions {
  int mc_samples = 100'000;  // invariant law only
};

struct TightnessResult {
  bool tight = false;
  double spread = 0.0;
  double pooled_stderr = 0.0;  // zero for exact evaluations
  std::vector<double> values;  // potential at each probe
};

/// Checks whether the potential x ↦ E φ(1 - ‖P_W x‖²) is constant on the
/// sphere, which is the same as the Kaczmarz bound of order s being tight.
///
/// Discrete laws are evaluated exactly at random probes, every atom basis
/// vector and the extreme eigenvectors of E[P_W]. The invariant law is
/// estimated by Monte Carlo with one shared sample of subspaces for all probes.
inline TightnessResult tightness_test(const SubspaceDistribution& dist, double s, int probes, SeededRng& rng,
                                      double tol, const TightnessOptions& opts = {}) {
  if (probes < 2) fail(ErrorCode::InvalidParameter, "tightness_test needs at least 2 probes");
  if (!(s >= 0.0)) fail(ErrorCode::InvalidParameter, "s must be >= 0");
  const std::size_t d = dist.ambient_dim();
  std::vector<Vector> points;
  for (int i = 0; i < probes; ++i) points.push_back(random_unit_vector(rng, d));

  TightnessResult out;
  auto finish = [&](const std::vector<double>& values) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    out.spread = (*hi == *lo) ? 0.0 : *hi - *lo;
    out.values = values;
    return std::pair{lo - values.begin(), hi - values.begin()};
  };

  if (dist.is_discrete()) {
    const DiscreteLaw& law = dist.as_discrete();
    for (const Subspace& w : law.atoms)
      for (std::size_t c = 0; c < w.dim(); ++c) points.push_back(w.basis().column(c));
    const EigenDecomposition eig = sym_eig(expected_projection(dist));
    points.push_back(eig.vectors.column(0));
    points.push_back(eig.vectors.column(d - 1));
    std::vector<double> values;
    for (const Vector& x : points) values.push_back(s > 0.0 ? potential_s(dist, x, s) : potential_log(dist, x));
    finish(values);
    out.tight = std::isfinite(out.spread) && out.spread <= tol;
    return out;
  }

  const InvariantLaw& law = dist.as_invariant();
  points.push_back(unit_vector(d, 0));
  points.push_back(unit_vector(d, d - 1));
  const std::size_t m = points.size();
  std::vector<double> mean(m, 0.0), m2(m, 0.0);
  for (int t = 0; t < opts.mc_samples; ++t) {
    const Subspace w = sample_invariant(rng, law.k, law.d);
    for (std::size_t i = 0; i < m; ++i) {
      const double gap = std::max(0.0, 1.0 - proj_norm_sq(w, points[i]));
      const double v = s > 0.0 ? std::pow(gap, s) : std::log(gap);
      const double delta = v - mean[i];
      mean[i] += delta / (t + 1);
      m2[i] += delta * (v - mean[i]);
    }
  }
  const double n = opts.mc_samples;
  const auto [lo, hi] = finish(mean);
  auto se = [&](std::ptrdiff_t i) { return std::sqrt(m2[i] / (n - 1.0) / n); };
  out.pooled_stderr = std::hypot(se(lo), se(hi));
  out.tight = std::isfinite(out.spread) && out.spread <= tol + 4.0 * out.pooled_stderr;
  return out;
}

/// d (1 - 1/d)^N: the k = 1 term of the inclusion–exclusion sum.
inline double first_term_bound(std::size_t d, std::size_t n_draws) {
  if (d < 1) fail(ErrorCode::InvalidParameter, "d must be >= 1");
  const double dd = static_cast<double>(d);
  return dd * std::pow(1.0 - 1.0 / dd, static_cast<double>(n_draws));
}

/// Σ_{k=1}^{d} (-1)^{k+1} C(d,k) (1 - k/d)^N, the probability that some
/// coordinate is never drawn in N uniform draws from d.
///
/// Terms are summed in ascending k with Neumaier compensation; binomials go
/// through log Γ above d = 60. When the terms are so large that cancellation
/// would cost more than 1e-13 absolute, the value is taken from the exact
/// occupancy recursion instead.
inline double inclusion_exclusion_bound(std::size_t d, std::size_t n_draws) {
  if (d < 1) fail(ErrorCode::InvalidParameter, "d must be >= 1");
  const double dd = static_cast<double>(d);
  const double nn = static_cast<double>(n_draws);
  double sum = 0.0, comp = 0.0, largest = 0.0;
  double binom = 1.0;
  for (std::size_t k = 1; k <= d; ++k) {
    const double kk = static_cast<double>(k);
    binom = binom * (dd - kk + 1.0) / kk;
    const double base = 1.0 - kk / dd;
    double term;
    if (d > 60) {
      if (base <= 0.0) {
        term = n_draws == 0 ? std::exp(ln_gamma(dd + 1) - ln_gamma(kk + 1) - ln_gamma(dd - kk + 1)) : 0.0;
      } else {
        term = std::exp(ln_gamma(dd + 1) - ln_gamma(kk + 1) - ln_gamma(dd - kk + 1) + nn * std::log(base));
      }
    } else {
      term = binom * std::pow(base, nn);
    }
    if (k % 2 == 0) term = -term;
    largest = std::max(largest, std::abs(term));
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  const double value = sum + comp;
  if (largest * dd * 1e-16 <= 1e-13) return value;

  // P(all d coordinates hit) by the occupancy recursion over draws.
  std::vector<double> occ(d + 1, 0.0), next(d + 1, 0.0);
  occ[0] = 1.0;
  for (std::size_t step = 0; step < n_draws; ++step) {
    next[0] = 0.0;
    for (std::size_t j = 1; j <= d; ++j)
      next[j] = occ[j] * static_cast<double>(j) / dd + occ[j - 1] * (dd - static_cast<double>(j) + 1.0) / dd;
    std::swap(occ, next);
  }
  return 1.0 - occ[d];
}

struct LyapunovReport {
  bool monotone = true;
  std::vector<double> values;  // α_s for each s in the list
};

/// Verifies α_{s2} ≤ α_{s1} + tol for s2 ≤ s1 over an ascending list of s > 0.
/// Discrete laws use alpha_s_sup with one shared set of starting points.
inline LyapunovReport lyapunov_check(const SubspaceDistribution& dist, const std::vector<double>& s_list,
                                     const AscentOptions& opts = {}, double tol = 1e-9) {
  LyapunovReport r;
  for (std::size_t i = 0; i < s_list.size(); ++i) {
    const double s = s_list[i];
    if (!(s > 0.0) || (i > 0 && s < s_list[i - 1]))
      fail(ErrorCode::InvalidParameter, "s_list must be ascending and positive");
    double v;
    if (dist.is_invariant()) {
      const InvariantLaw& law = dist.as_invariant();
      v = law.k == law.d ? 0.0 : invariant_alpha_closed_form(law.k, law.d, s).value;
    } else {
      v = alpha_s_sup(dist, s, opts).value;
    }
    r.values.push_back(v);
  }
  for (std::size_t i = 1; i < r.values.size(); ++i)
    if (r.values[i - 1] > r.values[i] + tol) r.monotone = false;
  return r;
}

/// Best available α for a law: closed form for Γ_{k,d}, eigenvalue route for
/// discrete s = 1, multistart ascent otherwise. s == 0 means α_log.
inline BoundEstimate kaczmarz_bound(const SubspaceDistribution& dist, double s, const AscentOptions& opts = {}) {
  if (!(s >= 0.0)) fail(ErrorCode::InvalidParameter, "s must be >= 0");
  if (dist.is_invariant()) {
    const InvariantLaw& law = dist.as_invariant();
    if (law.k == law.d) {
      BoundEstimate b;
      b.s = s;
      b.value = 0.0;
      return b;
    }
    return invariant_alpha_closed_form(law.k, law.d, s);
  }
  if (s == 1.0) return alpha_one_exact(dist);
  if (s == 0.0) return alpha_log_sup(dist, opts);
  return alpha_s_sup(dist, s, opts);
}

}  // namespace subact

#endif  // SUBACT_BOUNDS_HPP
