/// \file flow_engine.hpp
/// \brief Explicit time stepping of graphical mean curvature flow on the
///        Fermi chart, per-step monitors against the comparison solutions,
///        and the angle-minimum probe.
///
/// The height evolves by the vertical speed u_t = -H / Theta = g^ij B_ij,
/// which tracks u over fixed base points.  It differs from the material rate
/// -H Theta by a tangential reparametrization and agrees with it on
/// equidistant data.

#ifndef FMCF_FLOW_ENGINE_HPP
#define FMCF_FLOW_ENGINE_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "comparison_ode.hpp"
#include "graph_geometry.hpp"
#include "reduce.hpp"

namespace fmcf {

/// Initial height: a constant, a named analytic profile, or a loaded field.
///   sine:  offset + amplitude sin(2 pi kx x / L) cos(ky pi (y + Y) / (2 Y))
///   front: offset + amplitude sin(pi y / (2 Y)) (1 + beta cos(2 pi kx x / L))
/// Both satisfy the mirror condition at y = +-Y for integer ky.
struct InitialData {
  enum class Kind { constant, sine, front, field };
  Kind kind = Kind::constant;
  double level = 1.0;
  double amplitude = 0.3;
  double offset = 0.0;
  int kx = 1;
  int ky = 0;
  double beta = 0.3;
  std::vector<double> field;  // node values for Kind::field, index j * Nx + i
  bool operator==(const InitialData&) const = default;
};

struct FlowParams {
  double cfl = 0.2;
  double t_max = 5.0;
  double theta_floor = 1e-3;
  double converge_umax = 1e-3;
  double converge_theta = 0.999;
  bool stop_on_convergence = true;
  double tol_C = 1.0;          // monitor tolerance tol_C * h^2
  double probe_C = 1.0;        // C in -theta log theta + C theta
  double probe_tol = 0.01;     // slack for the angle-minimum inequality
  std::optional<double> eps;   // angle-bound eps; measured from Theta_0 when unset
  double slope_window = 0.4;   // fraction of the run used for the late-time fits
  double max_height = 10.0;    // |u0| above this is rejected
  std::optional<double> dt_max;  // optional cap on the CFL step
  bool operator==(const FlowParams&) const = default;
};

struct FlowConfig {
  FermiChart chart;
  InitialData init;
  FlowParams params;
  bool operator==(const FlowConfig&) const = default;
};

enum class Compliance { strict, equality, violated };

inline const char* to_string(Compliance c) {
  switch (c) {
    case Compliance::strict: return "strict";
    case Compliance::equality: return "equality";
    case Compliance::violated: return "violated";
  }
  return "?";
}

struct InitialReport {
  double a0 = 0.0;          // max |u0|
  double theta_min0 = 1.0;  // min Theta_0
  double threshold = 0.0;   // tanh(a0)
  Compliance compliance = Compliance::strict;
  double eps = 0.0;         // angle-bound parameter actually used
};

struct FlowState {
  double t = 0.0;
  long steps = 0;
  std::vector<double> u;
  double dt = 0.0;
  FermiChart chart;
  FlowParams params;
  InitialReport initial;
  // geometry of the current u, reused by the next step
  std::vector<double> speed, theta;
  double h_min = 0.0;
};

/// Non-finite heights; carries the state at the failed step.
class FlowAborted : public std::runtime_error {
 public:
  FlowAborted(const std::string& what, FlowState state)
      : std::runtime_error(what), state_(std::move(state)) {}
  const FlowState& state() const { return state_; }

 private:
  FlowState state_;
};

/// Stepping was requested with min Theta at or below the floor.
class GraphLost : public std::runtime_error {
 public:
  GraphLost(double t, double theta_min)
      : std::runtime_error(message(t, theta_min)), t_(t), theta_min_(theta_min) {}
  double t() const { return t_; }
  double theta_min() const { return theta_min_; }

 private:
  static std::string message(double t, double th) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "graph lost at t=%.6g (min Theta %.6g)", t, th);
    return buf;
  }
  double t_, theta_min_;
};

namespace detail {

struct RowTrig {
  double C, S, tau;
};

inline std::vector<RowTrig> row_trig(const FermiChart& ch) {
  std::vector<RowTrig> rows(ch.Ny);
  for (int j = 0; j < ch.Ny; ++j) {
    const double y = ch.y(j);
    rows[j] = {std::cosh(y), std::sinh(y), std::tanh(y)};
  }
  return rows;
}

/// Vertical speed and Theta at every node; returns the smallest metric grid
/// spacing min(hx cosh u cosh y, hy cosh u).
inline double evaluate_speed(const FermiChart& ch, const std::vector<RowTrig>& rows,
                             const std::vector<double>& u, std::vector<double>& speed,
                             std::vector<double>& theta) {
  const int Nx = ch.Nx, Ny = ch.Ny;
  const double hx = ch.hx(), hy = ch.hy();
  const double ihx2 = 1.0 / (2.0 * hx), ihy2 = 1.0 / (2.0 * hy);
  const double ihxx = 1.0 / (hx * hx), ihyy = 1.0 / (hy * hy), ihxy = 1.0 / (4.0 * hx * hy);
  speed.resize(u.size());
  theta.resize(u.size());
  double h_min = std::numeric_limits<double>::infinity();
  for (int j = 0; j < Ny; ++j) {
    const int jp = j + 1 == Ny ? j : j + 1;
    const int jm = j == 0 ? 0 : j - 1;
    const double* row = &u[static_cast<std::size_t>(j) * Nx];
    const double* up = &u[static_cast<std::size_t>(jp) * Nx];
    const double* dn = &u[static_cast<std::size_t>(jm) * Nx];
    const RowTrig b = rows[j];
    for (int i = 0; i < Nx; ++i) {
      const int ip = i + 1 == Nx ? 0 : i + 1;
      const int im = i == 0 ? Nx - 1 : i - 1;
      const double v = row[i];
      const double ux = (row[ip] - row[im]) * ihx2;
      const double uy = (up[i] - dn[i]) * ihy2;
      const double uxx = (row[ip] - 2.0 * v + row[im]) * ihxx;
      const double uyy = (up[i] - 2.0 * v + dn[i]) * ihyy;
      const double uxy = (up[ip] - dn[ip] - up[im] + dn[im]) * ihxy;
      double c, s;
      hyperbolic_pair(v, c, s);
      const double t = s / c;
      const double c2 = c * c, cC2 = c2 * b.C * b.C;
      const double g11 = ux * ux + cC2, g12 = ux * uy, g22 = uy * uy + c2;
      const double det = g11 * g22 - g12 * g12;
      const double B11 = uxx - c * s * b.C * b.C - 2.0 * t * ux * ux + b.C * b.S * uy;
      const double B12 = uxy - 2.0 * t * ux * uy - b.tau * ux;
      const double B22 = uyy - c * s - 2.0 * t * uy * uy;
      const std::size_t k = static_cast<std::size_t>(j) * Nx + i;
      speed[k] = (g22 * B11 - 2.0 * g12 * B12 + g11 * B22) / det;
      theta[k] = 1.0 / std::sqrt(1.0 + ux * ux / cC2 + uy * uy / c2);
      h_min = std::min(h_min, std::min(hx * c * b.C, hy * c));
    }
  }
  return h_min;
}

inline const std::vector<RowTrig>& cached_rows(const FermiChart& ch) {
  static thread_local std::vector<RowTrig> rows;
  static thread_local FermiChart cached{0.0, 0.0, 0, 0};
  if (cached.L != ch.L || cached.Y != ch.Y || cached.Nx != ch.Nx || cached.Ny != ch.Ny) {
    rows = row_trig(ch);
    cached = ch;
  }
  return rows;
}

inline void refresh(FlowState& s) {
  s.h_min = evaluate_speed(s.chart, cached_rows(s.chart), s.u, s.speed, s.theta);
  s.dt = s.params.cfl * s.h_min * s.h_min;
  if (s.params.dt_max) s.dt = std::min(s.dt, *s.params.dt_max);
}

inline std::vector<double> initial_heights(const FermiChart& ch, const InitialData& init) {
  using std::numbers::pi;
  std::vector<double> u(ch.nodes());
  if (init.kind == InitialData::Kind::field) {
    if (init.field.size() != ch.nodes())
      throw std::invalid_argument("init_flow: loaded field has " + std::to_string(init.field.size()) +
                                  " values, chart has " + std::to_string(ch.nodes()) + " nodes");
    return init.field;
  }
  for (int j = 0; j < ch.Ny; ++j)
    for (int i = 0; i < ch.Nx; ++i) {
      const double x = ch.x(i), y = ch.y(j);
      double v = 0.0;
      switch (init.kind) {
        case InitialData::Kind::constant: v = init.level; break;
        case InitialData::Kind::sine:
          v = init.offset + init.amplitude * std::sin(2.0 * pi * init.kx * x / ch.L) *
                                std::cos(init.ky * pi * (y + ch.Y) / (2.0 * ch.Y));
          break;
        case InitialData::Kind::front:
          v = init.offset + init.amplitude * std::sin(pi * y / (2.0 * ch.Y)) *
                                (1.0 + init.beta * std::cos(2.0 * pi * init.kx * x / ch.L));
          break;
        case InitialData::Kind::field: break;
      }
      u[ch.index(i, j)] = v;
    }
  return u;
}

}  // namespace detail

inline FlowState init_flow(const FermiChart& chart, const InitialData& init, const FlowParams& params) {
  chart.validate();
  if (!(params.cfl > 0.0 && params.cfl <= 0.25)) throw std::invalid_argument("init_flow: cfl must lie in (0, 0.25]");
  if (!(params.t_max >= 0.0) || !std::isfinite(params.t_max)) throw std::invalid_argument("init_flow: t_max must be >= 0");
  if (params.dt_max && !(*params.dt_max > 0.0)) throw std::invalid_argument("init_flow: dt must be > 0");
  if (!(params.theta_floor > 0.0 && params.theta_floor < 1.0))
    throw std::invalid_argument("init_flow: theta_floor must lie in (0, 1)");
  FlowState s;
  s.chart = chart;
  s.params = params;
  s.u = detail::initial_heights(chart, init);
  double a0 = 0.0;
  for (std::size_t k = 0; k < s.u.size(); ++k) {
    if (!std::isfinite(s.u[k])) throw std::invalid_argument("init_flow: initial height is not finite");
    a0 = std::max(a0, std::abs(s.u[k]));
  }
  if (a0 > params.max_height)
    throw std::invalid_argument("init_flow: max |u0| exceeds the chart height limit");
  detail::refresh(s);

  InitialReport& r = s.initial;
  r.a0 = a0;
  r.theta_min0 = s.theta[argmin_index(s.theta)];
  r.threshold = angle_threshold(a0);
  const double gap = r.theta_min0 - r.threshold;
  r.compliance = gap > 1e-12 ? Compliance::strict : gap >= -1e-12 ? Compliance::equality : Compliance::violated;
  if (params.eps) {
    if (!(*params.eps >= 0.0 && *params.eps <= 1.0)) throw std::invalid_argument("init_flow: eps must lie in [0, 1]");
    r.eps = *params.eps;
  } else {
    r.eps = std::clamp(angle_epsilon(a0, r.theta_min0 * r.theta_min0), 0.0, 1.0);
  }
  return s;
}

/// One Heun step of length min(dt, dt_cap); the state's geometry is refreshed.
inline void step(FlowState& s, double dt_cap = std::numeric_limits<double>::infinity()) {
  const double theta_min = s.theta[argmin_index(s.theta)];
  if (!(theta_min > s.params.theta_floor)) throw GraphLost(s.t, theta_min);
  const double dt = std::min(s.dt, dt_cap);
  const std::size_t n = s.u.size();
  std::vector<double> pred(n), speed2, theta2;
  for (std::size_t k = 0; k < n; ++k) pred[k] = s.u[k] + dt * s.speed[k];
  detail::evaluate_speed(s.chart, detail::cached_rows(s.chart), pred, speed2, theta2);
  for (std::size_t k = 0; k < n; ++k) {
    const double v = s.u[k] + 0.5 * dt * (s.speed[k] + speed2[k]);
    if (!std::isfinite(v)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "non-finite height at node %zu (i=%d, j=%d), t=%.6g, step %ld", k,
                    static_cast<int>(k % s.chart.Nx), static_cast<int>(k / s.chart.Nx), s.t, s.steps);
      throw FlowAborted(buf, s);
    }
    pred[k] = v;
  }
  s.u.swap(pred);
  s.t += dt;
  ++s.steps;
  detail::refresh(s);
}

struct MonitorRecord {
  double t = 0.0;
  double dt = 0.0;
  double umax = 0.0;
  double theta_min = 1.0;
  int i = 0, j = 0;  // argmin node
  double x = 0.0, y = 0.0;
  double L = 0.0;    // height at the argmin
  double a = 0.0;    // curvature of the principal direction closest to level
  double b = 0.0;    // the other principal curvature
  double U = 0.0;    // height barrier
  double Phi = 1.0;  // square root of the angle bound
  double abs_a = 0.0;
  double crit_rhs = 0.0;  // -theta log theta + C theta
  bool I_member = false;
  double b_gap = 0.0;     // |b - tanh(L) theta|
};

inline MonitorRecord monitor(const FlowState& s) {
  const FermiChart& ch = s.chart;
  MonitorRecord m;
  m.t = s.t;
  m.dt = s.dt;
  for (double v : s.u) m.umax = std::max(m.umax, std::abs(v));
  const std::size_t k = argmin_index(s.theta);
  m.theta_min = s.theta[k];
  m.i = static_cast<int>(k % ch.Nx);
  m.j = static_cast<int>(k / ch.Nx);
  m.x = ch.x(m.i);
  m.y = ch.y(m.j);
  const NodeDerivs d = node_derivs(ch, s.u, m.i, m.j);
  const GeomSample g = make_sample(m.x, m.y, {d.f, d.fx, d.fy, d.fxx, d.fxy, d.fyy});
  m.L = d.f;
  m.a = g.principal.a;
  m.b = g.principal.b;
  m.U = umbilic_exact(s.initial.a0, s.t);
  m.Phi = std::sqrt(angle_lower_bound(s.initial.a0, s.initial.eps, s.t));
  const double th = m.theta_min;
  m.abs_a = std::abs(m.a);
  m.crit_rhs = -th * std::log(th) + s.params.probe_C * th;
  m.I_member = m.abs_a > m.crit_rhs;
  m.b_gap = std::abs(m.b - std::tanh(m.L) * th);
  return m;
}

enum class Outcome { converged, graph_lost, max_time };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::converged: return "converged";
    case Outcome::graph_lost: return "graph-lost";
    case Outcome::max_time: return "max-time";
  }
  return "?";
}

struct RunSummary {
  Outcome outcome = Outcome::max_time;
  double t_final = 0.0;
  long steps = 0;
  InitialReport initial;
  double h = 0.0;    // max(hx, hy)
  double tol = 0.0;  // tol_C * h^2
  double slope_sinh_umax = std::numeric_limits<double>::quiet_NaN();
  double slope_one_minus_alpha = std::numeric_limits<double>::quiet_NaN();
  long barrier_violations = 0;
  long angle_violations = 0;
  MonitorRecord final_record;
};

struct RunResult {
  RunSummary summary;
  std::vector<MonitorRecord> records;
};

namespace detail {

/// Least-squares slope of value(record) against t over the last `window`
/// fraction of the run; NaN when fewer than two usable points remain.
template <class F>
double late_slope(const std::vector<MonitorRecord>& recs, double window, F value) {
  if (recs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double t0 = recs.front().t, t1 = recs.back().t;
  const double start = t1 - window * (t1 - t0);
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : recs) {
    if (r.t < start) continue;
    const double v = value(r);
    if (!std::isfinite(v)) return std::numeric_limits<double>::quiet_NaN();
    n += 1;
    sx += r.t;
    sy += v;
    sxx += r.t * r.t;
    sxy += r.t * v;
  }
  const double den = n * sxx - sx * sx;
  if (n < 2 || !(den > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / den;
}

}  // namespace detail

inline RunResult run(const FlowConfig& cfg) {
  FlowState s = init_flow(cfg.chart, cfg.init, cfg.params);
  const FlowParams& p = s.params;
  RunResult res;
  RunSummary& sum = res.summary;
  sum.initial = s.initial;
  sum.h = std::max(cfg.chart.hx(), cfg.chart.hy());
  sum.tol = p.tol_C * sum.h * sum.h;
  const bool bounds_apply = s.initial.compliance != Compliance::violated;

  for (;;) {
    const MonitorRecord m = monitor(s);
    res.records.push_back(m);
    if (bounds_apply) {
      if (m.umax > m.U + sum.tol) ++sum.barrier_violations;
      if (m.theta_min * m.theta_min < m.Phi * m.Phi - sum.tol) ++sum.angle_violations;
    }
    if (p.stop_on_convergence && m.umax < p.converge_umax && m.theta_min > p.converge_theta) {
      sum.outcome = Outcome::converged;
      break;
    }
    if (!(m.theta_min > p.theta_floor)) {
      sum.outcome = Outcome::graph_lost;
      break;
    }
    const double remaining = p.t_max - s.t;
    if (remaining <= 1e-12 * std::max(1.0, p.t_max)) {
      sum.outcome = Outcome::max_time;
      break;
    }
    // the last step lands exactly on t_max; a sliver left by rounding is absorbed
    const bool last = remaining <= s.dt * (1.0 + 1e-9);
    step(s, remaining);
    if (last) s.t = p.t_max;
  }
  sum.t_final = s.t;
  sum.steps = s.steps;
  sum.final_record = res.records.back();
  sum.slope_sinh_umax = detail::late_slope(res.records, p.slope_window,
                                           [](const MonitorRecord& r) { return std::log(std::sinh(r.umax)); });
  sum.slope_one_minus_alpha = detail::late_slope(res.records, p.slope_window, [](const MonitorRecord& r) {
    return std::log(1.0 - r.theta_min * r.theta_min);
  });
  return res;
}

// ---------------------------------------------------------------------------
// Angle-minimum probe

struct ProbeStep {
  double t = 0.0;
  double theta = 1.0;
  double abs_a = 0.0;
  double crit_rhs = 0.0;
  bool I_member = false;
  double dtheta_dt = 0.0;  // measured rate of min Theta
  double rhs = 0.0;        // lower bound for the rate at the minimum
  double residual = 0.0;   // dtheta_dt - rhs
};

enum class ProbeClass { graph_preserved, suspected_singularity, inconclusive };

inline const char* to_string(ProbeClass c) {
  switch (c) {
    case ProbeClass::graph_preserved: return "graph-preserved";
    case ProbeClass::suspected_singularity: return "suspected singularity";
    case ProbeClass::inconclusive: return "inconclusive";
  }
  return "?";
}

struct ProbeReport {
  RunSummary summary;
  std::vector<MonitorRecord> records;
  std::vector<ProbeStep> steps;
  double inequality_fraction = 1.0;  // share of steps with residual >= -tol
  double envelope_C = std::numeric_limits<double>::quiet_NaN();  // fitted; NaN if none fits
  bool envelope_holds_configured = false;  // with C = probe_C
  ProbeClass classification = ProbeClass::inconclusive;
};

/// Right side of the differential inequality for min Theta at the minimum.
inline double angle_min_rhs(double theta, double a, double L) {
  const double t = std::tanh(L), c = std::cosh(L);
  return (a * a + t * t * theta * theta) * theta - 2.0 * a * t + theta * (1.0 - theta * theta) / (c * c);
}

/// C exp(-C exp(C t)).
inline double double_exponential(double C, double t) { return C * std::exp(-C * std::exp(C * t)); }

/// Largest C on a fixed log grid in [1e-3, 10] whose envelope stays below the
/// recorded minima; NaN when none does.
inline double fit_envelope(const std::vector<MonitorRecord>& recs) {
  double best = std::numeric_limits<double>::quiet_NaN();
  for (int k = 0; k <= 80; ++k) {
    const double C = std::pow(10.0, -3.0 + 0.05 * k);
    bool ok = true;
    for (const auto& r : recs)
      if (double_exponential(C, r.t) >= r.theta_min) {
        ok = false;
        break;
      }
    if (ok) best = C;
  }
  return best;
}

inline ProbeClass classify_probe(const RunSummary& sum, const std::vector<MonitorRecord>& recs,
                                 double theta_floor, double envelope_C) {
  if (recs.empty()) throw std::invalid_argument("classify_probe: empty record series");
  const bool crossed = sum.outcome == Outcome::graph_lost || recs.back().theta_min <= theta_floor;
  if (crossed) {
    if (recs.size() < 10) return ProbeClass::inconclusive;
    for (std::size_t k = recs.size() - 10; k < recs.size(); ++k)
      if (!recs[k].I_member) return ProbeClass::inconclusive;
    return ProbeClass::suspected_singularity;
  }
  return std::isfinite(envelope_C) ? ProbeClass::graph_preserved : ProbeClass::inconclusive;
}

/// Per-step probe quantities from a finished record series.
inline ProbeReport probe_from_run(RunResult run, const FlowParams& p) {
  ProbeReport rep;
  rep.summary = run.summary;
  rep.records = std::move(run.records);
  const auto& R = rep.records;
  const std::size_t n = R.size();
  long ok = 0;
  for (std::size_t k = 0; k < n; ++k) {
    ProbeStep ps;
    ps.t = R[k].t;
    ps.theta = R[k].theta_min;
    ps.abs_a = R[k].abs_a;
    ps.crit_rhs = R[k].crit_rhs;
    ps.I_member = R[k].I_member;
    ps.rhs = angle_min_rhs(R[k].theta_min, R[k].a, R[k].L);
    if (n >= 2) {
      const std::size_t lo = k == 0 ? 0 : k - 1, hi = k + 1 == n ? k : k + 1;
      ps.dtheta_dt = (R[hi].theta_min - R[lo].theta_min) / (R[hi].t - R[lo].t);
    } else {
      ps.dtheta_dt = ps.rhs;
    }
    ps.residual = ps.dtheta_dt - ps.rhs;
    if (ps.residual >= -p.probe_tol) ++ok;
    rep.steps.push_back(ps);
  }
  rep.inequality_fraction = n ? static_cast<double>(ok) / n : 1.0;
  rep.envelope_C = fit_envelope(R);
  rep.envelope_holds_configured = true;
  for (const auto& r : R)
    if (double_exponential(p.probe_C, r.t) >= r.theta_min) rep.envelope_holds_configured = false;
  rep.classification = classify_probe(rep.summary, R, p.theta_floor, rep.envelope_C);
  return rep;
}

inline ProbeReport singularity_probe(const FlowConfig& cfg) { return probe_from_run(run(cfg), cfg.params); }

/// |b - tanh(L) theta| at the argmin at time t_at for each grid Nx x Nx/2.
inline std::vector<std::pair<double, double>> argmin_gap_refinement(FlowConfig cfg, const std::vector<int>& grids,
                                                                    double t_at) {
  std::vector<std::pair<double, double>> out;
  cfg.params.t_max = t_at;
  cfg.params.stop_on_convergence = false;
  for (int N : grids) {
    cfg.chart.Nx = N;
    cfg.chart.Ny = N / 2;
    const RunResult r = run(cfg);
    out.push_back({cfg.chart.hx(), r.records.back().b_gap});
  }
  return out;
}

}  // namespace fmcf

#endif  // FMCF_FLOW_ENGINE_HPP
