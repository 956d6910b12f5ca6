#ifndef SUBACT_QUADRATURE_HPP
#define SUBACT_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <concepts>
#include <numbers>
#include <utility>

#include "subact/error.hpp"

namespace subact {

/// Which endpoints of (0, 1) may carry an integrable singularity.
enum class SingularEnds { none, left, right, both };

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
};

struct QuadratureOptions {
  double abs_tol = 1e-10;      // required bound on the total error estimate
  double panel_tol = 1e-14;    // per-panel acceptance threshold
  double tail_tol = 1e-13;     // stop geometric refinement once the tail is below this
  long max_evaluations = 4'000'000;
};

namespace detail {

inline constexpr int kGaussOrder = 20;

struct GaussRule {
  std::array<double, kGaussOrder> nodes{};
  std::array<double, kGaussOrder> weights{};
};

// Gauss–Legendre nodes on [-1, 1] by Newton iteration on P_n.
inline const GaussRule& gauss_rule() {
  static const GaussRule rule = [] {
    GaussRule r;
    constexpr int n = kGaussOrder;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      r.nodes[i] = x;
      r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
  }();
  return rule;
}

// g receives (u, ...) where u is the panel variable; see Integrator.
template <class G>
double gauss_panel(const G& g, double a, double b, long& evals) {
  const GaussRule& rule = gauss_rule();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (int i = 0; i < kGaussOrder; ++i) s += rule.weights[i] * g(mid + half * rule.nodes[i]);
  evals += kGaussOrder;
  return s * half;
}

template <class G>
class Integrator {
 public:
  Integrator(const G& g, const QuadratureOptions& opts) : g_(g), opts_(opts) {}

  // Adaptive bisection on [a, b].
  double adaptive(double a, double b, int depth = 0) {
    const double whole = gauss_panel(g_, a, b, evals_);
    const double m = 0.5 * (a + b);
    const double left = gauss_panel(g_, a, m, evals_);
    const double right = gauss_panel(g_, m, b, evals_);
    const double diff = std::abs(whole - (left + right));
    if (evals_ > opts_.max_evaluations)
      fail(ErrorCode::ToleranceNotReached, "quadrature evaluation budget exhausted");
    if (diff <= opts_.panel_tol || depth >= 40) {
      error_ += diff;
      return left + right;
    }
    return adaptive(a, m, depth + 1) + adaptive(m, b, depth + 1);
  }

  // Geometric panels [h/2, h], h = 1/2, 1/4, ... toward u = 0.
  double geometric_toward_zero() {
    double total = 0.0;
    double prev = 0.0;
    double h = 0.5;
    for (int j = 0;; ++j) {
      const double panel = adaptive(0.5 * h, h);
      total += panel;
      if (j >= 4 && prev != 0.0) {
        const double r = std::abs(panel / prev);
        if (r < 1.0) {
          const double tail = std::abs(panel) * r / (1.0 - r);
          if (tail < opts_.tail_tol) {
            error_ += tail;
            return total;
          }
        }
      }
      if (panel == 0.0 && prev == 0.0 && j >= 4) return total;
      prev = panel;
      h *= 0.5;
      if (h < 1e-300)
        fail(ErrorCode::ToleranceNotReached, "integrand tail does not decay near the endpoint");
    }
  }

  double error() const { return error_; }
  long evaluations() const { return evals_; }

 private:
  const G& g_;
  QuadratureOptions opts_;
  double error_ = 0.0;
  long evals_ = 0;
};

}  // namespace detail

/// Integral of f over (0, 1).
///
/// f is called either as f(t) or as f(t, 1 - t); in the two-argument form the
/// complement is exact, which matters for power singularities at t = 1.
/// Flagged endpoints are resolved by geometric subdivision toward the endpoint.
template <class F>
QuadratureResult quadrature_01_detailed(const F& f, SingularEnds ends = SingularEnds::none,
                                        const QuadratureOptions& opts = {}) {
  auto eval = [&f](double t, double tc) {
    if constexpr (std::invocable<const F&, double, double>)
      return static_cast<double>(f(t, tc));
    else
      return static_cast<double>(f(t));
  };
  auto from_left = [&](double u) { return eval(u, 1.0 - u); };
  auto from_right = [&](double u) { return eval(1.0 - u, u); };

  detail::Integrator<decltype(from_left)> lhs(from_left, opts);
  detail::Integrator<decltype(from_right)> rhs(from_right, opts);

  const bool left_sing = ends == SingularEnds::left || ends == SingularEnds::both;
  const bool right_sing = ends == SingularEnds::right || ends == SingularEnds::both;

  QuadratureResult out;
  out.value = (left_sing ? lhs.geometric_toward_zero() : lhs.adaptive(0.0, 0.5)) +
              (right_sing ? rhs.geometric_toward_zero() : rhs.adaptive(0.0, 0.5));
  out.error_estimate = lhs.error() + rhs.error();
  out.evaluations = lhs.evaluations() + rhs.evaluations();
  if (!std::isfinite(out.value))
    fail(ErrorCode::ToleranceNotReached, "integrand produced a non-finite value");
  if (out.error_estimate >= opts.abs_tol)
    fail(ErrorCode::ToleranceNotReached, "error estimate above tolerance");
  return out;
}

template <class F>
double quadrature_01(const F& f, SingularEnds ends = SingularEnds::none,
                     const QuadratureOptions& opts = {}) {
  return quadrature_01_detailed(f, ends, opts).value;
}

}  // namespace subact

#endif  // SUBACT_QUADRATURE_HPP
