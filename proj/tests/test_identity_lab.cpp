#include <gtest/gtest.h>

#include <cmath>

#include "fmcf/identity_lab.hpp"

using namespace fmcf;

namespace {

constexpr double kL = 6.4, kY = 1.6;

AnalyticGraph sine_surface() { return analytic_sine(kL, kY, 0.3); }

TEST(IdentityLab, SamplePointsStayInInnerStrip) {
  const auto pts = sample_points(kL, kY);
  EXPECT_EQ(pts.size(), 40u);
  for (const auto& p : pts) {
    EXPECT_LE(std::abs(p.y), 0.5 * kY + 1e-15);
    EXPECT_GE(p.x, 0.0);
    EXPECT_LT(p.x, kL);
  }
}

TEST(IdentityLab, StaticResidualsExact) {
  const ResidualReport rep = residual_static(sine_surface(), sample_points(kL, kY));
  ASSERT_EQ(rep.entries.size(), 5u);
  for (const auto& e : rep.entries) EXPECT_LE(e.max_abs, 1e-9) << e.name;
  EXPECT_THROW(rep.entry("nonexistent"), std::out_of_range);
}

TEST(IdentityLab, StaticResidualsDetectWrongSurface) {
  // A quantity from one surface checked against another must fail.
  const AnalyticGraph S = sine_surface();
  const AnalyticLocal a = expand_geometry(S, 0.7, 0.2);
  const AnalyticLocal b = expand_geometry(analytic_sine(kL, kY, 0.31), 0.7, 0.2);
  auto in = detail::static_inputs(a);
  in.lap_theta = detail::static_inputs(b).lap_theta;
  EXPECT_GT(std::abs(detail::static_residuals(in)[2]), 1e-5);
}

TEST(IdentityLab, DiscreteStaticOrderIsTwo) {
  const auto est = static_convergence(sine_surface(), kL, kY, {64, 128, 256});
  for (const auto& e : est) {
    if (e.at_floor) continue;
    EXPECT_GE(e.order, 1.9) << e.identity;
  }
  // the gradient-norm identity is algebraic in the discrete derivatives
  EXPECT_TRUE(est[3].at_floor);
}

TEST(IdentityLab, ForwardStencilFixtureIsFirstOrder) {
  const auto est = static_convergence(sine_surface(), kL, kY, {64, 128, 256}, Stencil::forward);
  EXPECT_NEAR(est[0].order, 1.0, 0.15);
  EXPECT_LT(est[0].order, 1.9);
}

TEST(IdentityLab, ConvergenceOrderFit) {
  const auto e = convergence_order("q", {{0.1, 3e-2}, {0.05, 7.5e-3}, {0.025, 1.875e-3}});
  EXPECT_NEAR(e.order, 2.0, 1e-12);
  EXPECT_FALSE(e.at_floor);
  EXPECT_TRUE(convergence_order("q", {{0.1, 1e-14}, {0.05, 1e-15}, {0.025, 0.0}}).at_floor);
  EXPECT_THROW(convergence_order("q", {{0.1, 1.0}, {0.05, 0.5}}), std::invalid_argument);
}

TEST(IdentityLab, DynamicResidualsExtrapolated) {
  const ResidualReport rep = residual_dynamic(sine_surface(), sample_points(kL, kY, 4, 3));
  ASSERT_EQ(rep.entries.size(), 7u);
  for (const auto& e : rep.entries) {
    EXPECT_LE(e.max_abs, 1e-6) << e.name;
    ASSERT_EQ(e.raw_max.size(), 3u);
  }
  // the raw quotients are first order in eps
  const auto& raw = rep.entry("theta_evolution").raw_max;
  EXPECT_NEAR(raw[0] / raw[1], 2.0, 0.2);
}

TEST(IdentityLab, DynamicRejectsBadEpsSequence) {
  EXPECT_THROW(residual_dynamic(sine_surface(), sample_points(kL, kY, 2, 2), {1e-3}), std::invalid_argument);
  EXPECT_THROW(residual_dynamic(sine_surface(), sample_points(kL, kY, 2, 2), {1e-3, 4e-4}),
               std::invalid_argument);
}

TEST(IdentityLab, NormalVariationResiduals) {
  const ResidualReport rep = residual_normal_variation(sine_surface(), sample_points(kL, kY, 4, 3));
  ASSERT_EQ(rep.entries.size(), 3u);
  for (const auto& e : rep.entries) EXPECT_LE(e.max_abs, 1e-6) << e.name;
}

TEST(IdentityLab, UmbilicVariationOfH) {
  for (double c : {0.0, 0.4, 1.0, -0.7}) {
    const GeomSample s = sample_geometry(analytic_constant(c), 1.1, 0.3);
    EXPECT_NEAR(n_of_H_closed_form(s), 2.0 / (std::cosh(c) * std::cosh(c)), 1e-9) << c;
  }
}

}  // namespace
