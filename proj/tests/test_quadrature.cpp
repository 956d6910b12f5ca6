#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "subact/quadrature.hpp"

using namespace subact;

TEST(Quadrature, Constant) { EXPECT_NEAR(quadrature_01([](double) { return 1.0; }), 1.0, 1e-14); }

TEST(Quadrature, LogAtZero) {
  const double v = quadrature_01([](double t) { return t > 0.0 ? std::log(t) : 0.0; }, SingularEnds::left);
  EXPECT_NEAR(v, -1.0, 1e-10);
}

TEST(Quadrature, LogOverSqrtMatchesClosedForm) {
  auto f = [](double r, double rc) { return r > 0.0 ? std::log(r) / std::sqrt(rc * (1.0 + r)) : 0.0; };
  const QuadratureResult q = quadrature_01_detailed(f, SingularEnds::both);
  EXPECT_NEAR(q.value, -0.5 * std::numbers::pi * std::log(2.0), 1e-10);
  EXPECT_LT(q.error_estimate, 1e-10);
}

TEST(Quadrature, LogOverSqrtMatchesRiemannSum) {
  // ρ = sin θ turns the integrand into log sin θ on (0, π/2); midpoint sum
  // skips both endpoints.
  const int n = 2'000'000;
  const double h = 0.5 * std::numbers::pi / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += std::log(std::sin((i + 0.5) * h));
  auto f = [](double r, double rc) { return r > 0.0 ? std::log(r) / std::sqrt(rc * (1.0 + r)) : 0.0; };
  EXPECT_NEAR(quadrature_01(f, SingularEnds::both), sum * h, 1e-5);
}

TEST(Quadrature, PolynomialsExact) {
  for (int p = 0; p <= 12; ++p) {
    auto f = [p](double t) { return (p + 1.0) * std::pow(t, p) - 0.5 * std::pow(1.0 - t, p); };
    EXPECT_NEAR(quadrature_01(f), 1.0 - 0.5 / (p + 1.0), 1e-12) << p;
  }
}

TEST(Quadrature, PowerSingularityAtOne) {
  // ∫ (1-t)^{-0.9} = 10
  auto f = [](double, double tc) { return tc > 0.0 ? std::pow(tc, -0.9) : 0.0; };
  EXPECT_NEAR(quadrature_01(f, SingularEnds::right), 10.0, 1e-9);
}

TEST(Quadrature, BudgetExhaustedThrows) {
  QuadratureOptions opts;
  opts.max_evaluations = 50;
  try {
    quadrature_01([](double t) { return std::sin(200.0 * t); }, SingularEnds::none, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ToleranceNotReached);
  }
}
