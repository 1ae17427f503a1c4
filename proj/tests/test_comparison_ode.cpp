#include <gtest/gtest.h>

#include <cmath>

#include "fmcf/comparison_ode.hpp"

using namespace fmcf;

namespace {

double max_deviation(const SampledCurve& c, auto exact) {
  double worst = 0.0;
  for (const auto& s : c) worst = std::max(worst, std::abs(s.value - exact(s.t)));
  return worst;
}

TEST(ComparisonOde, UmbilicClosedFormValues) {
  EXPECT_EQ(umbilic_exact(1.0, 0.0), 1.0);
  // high-precision evaluation of arcsinh(e^{-1} sinh 1)
  EXPECT_NEAR(umbilic_exact(1.0, 0.5), 0.41988525756205492, 1e-15);
  EXPECT_THROW(umbilic_exact(1.0, -0.1), std::invalid_argument);
}

TEST(ComparisonOde, UmbilicClosedFormSolvesOde) {
  const double h = 1e-6;
  for (double a0 : {0.3, 1.0, 2.0})
    for (double t : {0.1, 0.7, 2.5}) {
      const double dR = (umbilic_exact(a0, t + h) - umbilic_exact(a0, t - h)) / (2 * h);
      EXPECT_NEAR(dR + 2.0 * std::tanh(umbilic_exact(a0, t)), 0.0, 1e-10);
      EXPECT_NEAR(std::sinh(umbilic_exact(a0, t)) * std::exp(2.0 * t), std::sinh(a0), 1e-12);
    }
}

TEST(ComparisonOde, UmbilicAsymptoticSlope) {
  const double t1 = 8.0, t2 = 9.0;
  const double slope = (std::log(umbilic_exact(1.0, t2)) - std::log(umbilic_exact(1.0, t1))) / (t2 - t1);
  EXPECT_NEAR(slope, -2.0, 1e-6);
}

TEST(ComparisonOde, UmbilicRk4MatchesClosedForm) {
  const auto c = umbilic_integrate(1.0, 3.0, 1e-3);
  EXPECT_NEAR(c.back().t, 3.0, 0.0);
  EXPECT_LE(max_deviation(c, [](double t) { return umbilic_exact(1.0, t); }), 1e-10);
  for (const auto& s : umbilic_integrate(0.0, 1.0)) EXPECT_EQ(s.value, 0.0);
}

TEST(ComparisonOde, UmbilicRk4IsFourthOrder) {
  auto err = [](double dt) {
    return max_deviation(umbilic_integrate(1.0, 3.0, dt), [](double t) { return umbilic_exact(1.0, t); });
  };
  const double ratio = err(0.1) / err(0.05);
  EXPECT_NEAR(ratio, 16.0, 1.5);
}

TEST(ComparisonOde, SqueezeBound) {
  EXPECT_EQ(squeeze_bound(0.7, 0.0).lower, -0.7);
  EXPECT_EQ(squeeze_bound(0.7, 0.0).upper, 0.7);
  EXPECT_NEAR(squeeze_bound(1.0, 2.0).upper, 0.021522898951908572, 1e-15);
  EXPECT_EQ(squeeze_bound(1.0, 1.3).upper, umbilic_exact(1.0, 1.3));
}

TEST(ComparisonOde, AngleThreshold) {
  EXPECT_EQ(angle_threshold(0.0), 0.0);
  EXPECT_NEAR(angle_threshold(1.0), 0.76159415595576489, 1e-15);
  for (double a0 : {0.2, 0.9, 1.7}) {
    const double s2 = std::sinh(a0) * std::sinh(a0);
    EXPECT_NEAR(std::pow(angle_threshold(a0), 2), s2 / (1.0 + s2), 1e-15);
  }
}

TEST(ComparisonOde, AngleLowerBoundValues) {
  const double a_unit = std::asinh(1.0);  // sinh^2 = 1
  EXPECT_NEAR(angle_lower_bound(a_unit, 0.0, 0.0), 0.5, 1e-15);
  EXPECT_NEAR(angle_lower_bound(0.8, 0.25, 40.0), 0.25, 1e-12);
  EXPECT_NEAR(angle_lower_bound(1.0, 0.1, 1.0), 0.12220444375532417, 1e-15);
  EXPECT_NEAR(angle_lower_bound(1.2, 0.0, 0.0), std::pow(std::tanh(1.2), 2), 1e-15);
  for (double t = 0.0; t < 5.0; t += 0.25) {
    EXPECT_GT(angle_lower_bound(1.0, 0.3, t), 0.3);
    EXPECT_LE(angle_lower_bound(1.0, 0.3, t + 0.25), angle_lower_bound(1.0, 0.3, t));
  }
  EXPECT_THROW(angle_lower_bound(1.0, -0.1, 0.0), std::invalid_argument);
}

TEST(ComparisonOde, AngleOdeMatchesClosedForm) {
  for (auto [a0, eps] : {std::pair{0.5, 0.0}, {1.0, 0.1}, {0.8814, 0.3}, {0.8, 0.3}}) {
    const auto c = angle_ode_integrate(a0, angle_phi0(a0, eps), 5.0);
    EXPECT_LE(max_deviation(c, [&](double t) { return angle_lower_bound(a0, eps, t); }), 1e-8);
  }
  for (const auto& s : angle_ode_integrate(1.0, 1.0, 2.0)) EXPECT_EQ(s.value, 1.0);
  EXPECT_THROW(angle_ode_integrate(1.0, 0.0, 1.0), std::invalid_argument);
}

TEST(ComparisonOde, AngleOdeIsMonotoneAndOrdered) {
  const double a0 = 0.9;
  const auto lo = angle_ode_integrate(a0, 0.55, 5.0);
  const auto mid = angle_ode_integrate(a0, 0.7, 5.0);
  const auto hi = angle_ode_integrate(a0, 0.85, 5.0);
  for (std::size_t k = 0; k < lo.size(); ++k) {
    EXPECT_LT(lo[k].value, mid[k].value);
    EXPECT_LT(mid[k].value, hi[k].value);
    if (k > 0) {
      EXPECT_LE(mid[k].value, mid[k - 1].value);
    }
  }
  const double eps = angle_epsilon(a0, 0.7);
  EXPECT_NEAR(angle_phi0(a0, eps), 0.7, 1e-15);
  EXPECT_GT(mid.back().value, eps);
}

}  // namespace
