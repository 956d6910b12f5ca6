#ifndef SUBACT_SPECIAL_FUNCTIONS_HPP
#define SUBACT_SPECIAL_FUNCTIONS_HPP

#include <array>
#include <cmath>
#include <numbers>

#include "subact/error.hpp"

namespace subact {

/// log Γ(x) for x > 0 (Lanczos, g = 7, nine terms; reflection below 1/2).
inline double ln_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) fail(ErrorCode::DomainError, "ln_gamma needs a positive argument");
  if (x < 0.5) {
    // Γ(x)Γ(1-x) = π / sin(πx)
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - ln_gamma(1.0 - x);
  }
  static constexpr std::array<double, 9> kCoef = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  constexpr double g = 7.0;
  const double z = x - 1.0;
  double a = kCoef[0];
  for (std::size_t i = 1; i < kCoef.size(); ++i) a += kCoef[i] / (z + static_cast<double>(i));
  const double t = z + g + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

/// ψ(x) = d/dx log Γ(x) for x > 0.
inline double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) fail(ErrorCode::DomainError, "digamma needs a positive argument");
  double acc = 0.0;
  // ψ(x) = ψ(x+1) - 1/x until the asymptotic series is accurate.
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Bernoulli terms B_{2n} / (2n x^{2n}), n = 1..7
  const double series =
      inv2 * (1.0 / 12 -
              inv2 * (1.0 / 120 -
                      inv2 * (1.0 / 252 -
                              inv2 * (1.0 / 240 -
                                      inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 / 12.0))))));
  return acc + std::log(x) - 0.5 * inv - series;
}

/// log B(a, b) = log Γ(a) + log Γ(b) - log Γ(a + b).
inline double log_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) fail(ErrorCode::DomainError, "log_beta needs positive arguments");
  return ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
}

/// Hausdorff measure of the unit sphere S^m ⊂ R^{m+1}, in log form:
/// log(2 π^{(m+1)/2} / Γ((m+1)/2)). S^0 is two points.
inline double log_sphere_area(int m) {
  if (m < 0) fail(ErrorCode::DomainError, "sphere dimension must be >= 0");
  const double h = 0.5 * (m + 1);
  return std::log(2.0) + h * std::log(std::numbers::pi) - ln_gamma(h);
}

}  // namespace subact

#endif  // SUBACT_SPECIAL_FUNCTIONS_HPP
