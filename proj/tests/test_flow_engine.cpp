#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "fmcf/flow_engine.hpp"

using namespace fmcf;

namespace {

FermiChart small_chart() { return {6.4, 1.6, 32, 16}; }

FlowConfig sine_config(double offset, double amplitude, int kx, int ky) {
  FlowConfig c;
  c.chart = small_chart();
  c.init.kind = InitialData::Kind::sine;
  c.init.offset = offset;
  c.init.amplitude = amplitude;
  c.init.kx = kx;
  c.init.ky = ky;
  return c;
}

TEST(FlowEngine, KernelSpeedMatchesGeometry) {
  const FlowConfig c = sine_config(0.4, 0.5, 2, 1);
  const FlowState s = init_flow(c.chart, c.init, c.params);
  const DiscreteGraph S{c.chart, s.u, Stencil::centered};
  for (int j = 0; j < c.chart.Ny; ++j)
    for (int i = 0; i < c.chart.Nx; ++i) {
      const GeomSample g = sample_geometry(S, i, j);
      const std::size_t k = c.chart.index(i, j);
      EXPECT_NEAR(s.speed[k], -g.H / g.theta, 1e-12);
      EXPECT_NEAR(s.theta[k], g.theta, 1e-14);
    }
}

TEST(FlowEngine, ZeroIsAnEquilibrium) {
  FlowConfig c;
  c.chart = small_chart();
  c.init.level = 0.0;
  FlowState s = init_flow(c.chart, c.init, c.params);
  for (int n = 0; n < 20; ++n) {
    step(s);
    for (double v : s.u) ASSERT_LE(std::abs(v), 1e-12);
  }
}

TEST(FlowEngine, UmbilicFollowsClosedForm) {
  FlowConfig c;
  c.chart = small_chart();
  c.params.t_max = 0.5;
  c.params.stop_on_convergence = false;
  const RunResult r = run(c);
  EXPECT_EQ(r.summary.outcome, Outcome::max_time);
  EXPECT_DOUBLE_EQ(r.summary.t_final, 0.5);
  for (const auto& m : r.records) {
    EXPECT_NEAR(m.umax, umbilic_exact(1.0, m.t), 1e-4);  // coarse grid, large dt
    EXPECT_NEAR(m.theta_min, 1.0, 1e-15);
    // eigenvalues of a rounding-level perturbed umbilic point split by ~sqrt(eps)
    EXPECT_NEAR(m.b, std::tanh(m.L), 1e-7);
    EXPECT_NEAR(m.a, m.b, 1e-7);
    EXPECT_LE(m.b_gap, 1e-7);
    EXPECT_FALSE(m.I_member);
  }
}

TEST(FlowEngine, StepConsistency) {
  const FlowConfig c = sine_config(0.2, 0.3, 1, 1);
  FlowState s = init_flow(c.chart, c.init, c.params);
  const auto u0 = s.u;
  const auto v0 = s.speed;
  const double dt = s.dt;
  step(s);
  double worst = 0.0;
  for (std::size_t k = 0; k < u0.size(); ++k) worst = std::max(worst, std::abs((s.u[k] - u0[k]) / dt - v0[k]));
  EXPECT_LT(worst, 50.0 * dt);
  EXPECT_GT(worst, 0.0);
}

TEST(FlowEngine, TimeStepRespectsMetricSpacing) {
  const FlowConfig c = sine_config(0.8, 0.4, 1, 1);
  FlowState s = init_flow(c.chart, c.init, c.params);
  for (int n = 0; n < 5; ++n) {
    double h_min = std::numeric_limits<double>::infinity();
    for (int j = 0; j < c.chart.Ny; ++j)
      for (int i = 0; i < c.chart.Nx; ++i) {
        const double cu = std::cosh(s.u[c.chart.index(i, j)]);
        h_min = std::min({h_min, c.chart.hx() * cu * std::cosh(c.chart.y(j)), c.chart.hy() * cu});
      }
    EXPECT_GT(s.dt, 0.0);
    EXPECT_LE(s.dt, c.params.cfl * h_min * h_min * (1 + 1e-14));
    step(s);
  }
}

TEST(FlowEngine, InitialCompliance) {
  FlowParams p;
  InitialData flat;
  const FlowState a = init_flow(small_chart(), flat, p);
  EXPECT_EQ(a.initial.a0, 1.0);
  EXPECT_EQ(a.initial.theta_min0, 1.0);
  EXPECT_NEAR(a.initial.threshold, std::tanh(1.0), 1e-15);
  EXPECT_EQ(a.initial.compliance, Compliance::strict);
  EXPECT_NEAR(a.initial.eps, 1.0, 1e-12);

  const FlowConfig steep = sine_config(0.0, 1.2, 4, 0);
  const FlowState b = init_flow(steep.chart, steep.init, steep.params);
  EXPECT_LT(b.initial.theta_min0, b.initial.threshold);
  EXPECT_EQ(b.initial.compliance, Compliance::violated);
  EXPECT_EQ(b.initial.eps, 0.0);

  p.eps = 0.25;
  EXPECT_EQ(init_flow(small_chart(), flat, p).initial.eps, 0.25);
}

TEST(FlowEngine, InitialDataRejected) {
  FlowParams p;
  InitialData bad;
  bad.level = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(init_flow(small_chart(), bad, p), std::invalid_argument);
  bad.level = 11.0;
  EXPECT_THROW(init_flow(small_chart(), bad, p), std::invalid_argument);
  InitialData field;
  field.kind = InitialData::Kind::field;
  field.field.assign(10, 0.0);
  EXPECT_THROW(init_flow(small_chart(), field, p), std::invalid_argument);
  field.field.assign(small_chart().nodes(), 0.5);
  EXPECT_EQ(init_flow(small_chart(), field, p).initial.a0, 0.5);
  p.cfl = 0.5;
  EXPECT_THROW(init_flow(small_chart(), InitialData{}, p), std::invalid_argument);
}

TEST(FlowEngine, ZeroHorizonGivesSingleRecord) {
  FlowConfig c;
  c.chart = small_chart();
  c.params.t_max = 0.0;
  const RunResult r = run(c);
  EXPECT_EQ(r.summary.outcome, Outcome::max_time);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].umax, 1.0);
  EXPECT_EQ(r.records[0].theta_min, 1.0);
  EXPECT_EQ(r.records[0].U, 1.0);
}

TEST(FlowEngine, DiscreteMaximumPrinciple) {
  // positive data: the maximum cannot grow
  const FlowConfig pos = sine_config(0.6, 0.3, 1, 1);
  FlowState s = init_flow(pos.chart, pos.init, pos.params);
  double hi = *std::max_element(s.u.begin(), s.u.end());
  for (int n = 0; n < 200; ++n) {
    step(s);
    const double hi2 = *std::max_element(s.u.begin(), s.u.end());
    ASSERT_LE(hi2, hi);
    hi = hi2;
  }
  // sign-changing data: both extremes move toward zero
  const FlowConfig mixed = sine_config(0.0, 0.5, 1, 1);
  FlowState m = init_flow(mixed.chart, mixed.init, mixed.params);
  auto [lo_it, hi_it] = std::minmax_element(m.u.begin(), m.u.end());
  double lo = *lo_it;
  hi = *hi_it;
  for (int n = 0; n < 200; ++n) {
    step(m);
    const auto [a, b] = std::minmax_element(m.u.begin(), m.u.end());
    ASSERT_GE(*a, lo);
    ASSERT_LE(*b, hi);
    lo = *a;
    hi = *b;
  }
}

TEST(FlowEngine, CompliantRunConverges) {
  const RunResult r = run(sine_config(0.4, 0.2, 1, 1));
  EXPECT_EQ(r.summary.outcome, Outcome::converged);
  EXPECT_LT(r.summary.t_final, 5.0);
  EXPECT_EQ(r.summary.barrier_violations, 0);
  EXPECT_EQ(r.summary.angle_violations, 0);
  EXPECT_NEAR(r.summary.slope_sinh_umax, -2.0, 0.1);
  EXPECT_LT(r.records.back().umax, 1e-3);
  EXPECT_GT(r.records.back().theta_min, 0.999);
}

TEST(FlowEngine, StepBelowFloorAndNonFinite) {
  const FlowConfig c = sine_config(0.0, 1.2, 4, 0);
  FlowParams p = c.params;
  p.theta_floor = 0.5;
  FlowState s = init_flow(c.chart, c.init, p);
  EXPECT_THROW(step(s), GraphLost);

  FlowState t = init_flow(c.chart, c.init, c.params);
  t.u[7] = std::numeric_limits<double>::quiet_NaN();
  detail::refresh(t);
  t.theta.assign(t.theta.size(), 1.0);
  try {
    step(t);
    FAIL() << "expected FlowAborted";
  } catch (const FlowAborted& e) {
    EXPECT_EQ(e.state().steps, 0);
    EXPECT_NE(std::string(e.what()).find("non-finite"), std::string::npos);
  }
}

TEST(FlowEngine, RunStopsAtFloorAsGraphLost) {
  FlowConfig c = sine_config(0.0, 1.2, 4, 0);
  c.params.theta_floor = 0.5;
  const RunResult r = run(c);
  EXPECT_EQ(r.summary.outcome, Outcome::graph_lost);
  EXPECT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.summary.final_record.theta_min, r.records.back().theta_min);
}

TEST(FlowEngine, AngleMinimumRhs) {
  // equidistant surface: a = b = tanh(L), theta = 1 -> rate 0
  for (double L : {0.0, 0.5, 1.3}) EXPECT_NEAR(angle_min_rhs(1.0, std::tanh(L), L), 0.0, 1e-15);
  EXPECT_NEAR(angle_min_rhs(0.5, 0.0, 0.0), 0.375, 1e-15);
}

TEST(FlowEngine, EnvelopeFit) {
  EXPECT_NEAR(double_exponential(1.0, 0.0), std::exp(-1.0), 1e-15);
  std::vector<MonitorRecord> recs(3);
  for (int k = 0; k < 3; ++k) {
    recs[k].t = k;
    recs[k].theta_min = 0.9;
  }
  const double C = fit_envelope(recs);
  ASSERT_TRUE(std::isfinite(C));
  for (const auto& r : recs) EXPECT_LE(double_exponential(C, r.t), r.theta_min);
  recs[2].theta_min = 0.0;
  EXPECT_TRUE(std::isnan(fit_envelope(recs)));
}

TEST(FlowEngine, ProbeClassifications) {
  const ProbeReport ok = singularity_probe(sine_config(0.4, 0.2, 1, 1));
  EXPECT_EQ(ok.classification, ProbeClass::graph_preserved);
  EXPECT_EQ(ok.steps.size(), ok.records.size());
  EXPECT_GE(ok.inequality_fraction, 0.95);

  // a record series that reaches the floor with |a| above the criterion
  RunSummary lost;
  lost.outcome = Outcome::graph_lost;
  std::vector<MonitorRecord> recs(12);
  for (int k = 0; k < 12; ++k) {
    recs[k].t = 0.01 * k;
    recs[k].theta_min = 0.1 * std::pow(0.5, k);
    recs[k].I_member = k >= 2;
  }
  EXPECT_EQ(classify_probe(lost, recs, 1e-3, fit_envelope(recs)), ProbeClass::suspected_singularity);
  recs[5].I_member = false;
  EXPECT_EQ(classify_probe(lost, recs, 1e-3, fit_envelope(recs)), ProbeClass::inconclusive);
  EXPECT_THROW(classify_probe(lost, {}, 1e-3, 1.0), std::invalid_argument);
}

TEST(FlowEngine, ArgminGapShrinksUnderRefinement) {
  FlowConfig c;
  c.init.kind = InitialData::Kind::front;
  c.init.amplitude = 2.0;
  const auto g = argmin_gap_refinement(c, {32, 64, 128}, 0.0);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_LE(g[1].second / g[0].second, 0.6);
  EXPECT_LE(g[2].second / g[1].second, 0.6);
}

}  // namespace
