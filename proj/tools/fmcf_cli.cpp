// Command-line front end.  Exit codes: 0 success, 2 invalid input,
// 3 runtime failure, 4 a checked tolerance was exceeded.

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "fmcf/fmcf.hpp"

using namespace fmcf;

namespace {

constexpr int kOk = 0, kInvalid = 2, kRuntime = 3, kTolerance = 4;

struct Check {
  std::string what;
  double value;
  double limit;
  bool at_most = true;
  bool ok() const { return at_most ? value <= limit : value >= limit; }
};

int report(const std::vector<Check>& checks) {
  bool all = true;
  for (const auto& c : checks) {
    std::printf("%-40s %-4s %.6e (%s %.1e)\n", c.what.c_str(), c.ok() ? "ok" : "FAIL", c.value,
                c.at_most ? "<=" : ">=", c.limit);
    all = all && c.ok();
  }
  return all ? kOk : kTolerance;
}

std::vector<int> parse_grids(const std::string& s) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t comma = std::min(s.find(',', pos), s.size());
    out.push_back(std::stoi(s.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  if (out.size() < 3) throw std::invalid_argument("--grids needs at least three sizes");
  for (int n : out)
    if (n < 8 || n % 2) throw std::invalid_argument("--grids sizes must be even and >= 8");
  return out;
}

struct VerifyOptions {
  std::string suite = "static";
  std::string grids = "64,128,256";
  double amplitude = 0.3;
  int random_points = 0;
  std::uint64_t seed = 1;
};

int run_verify(const VerifyOptions& o) {
  const FermiChart chart;
  const AnalyticGraph S = analytic_sine(chart.L, chart.Y, o.amplitude);
  const auto pts = o.random_points > 0 ? random_sample_points(chart.L, chart.Y, o.random_points, o.seed)
                                       : sample_points(chart.L, chart.Y);
  std::vector<Check> checks;
  std::string notes;
  if (o.suite == "static") {
    for (const auto& e : residual_static(S, pts).entries) checks.push_back({"analytic " + e.name, e.max_abs, 1e-9});
    for (const auto& est : static_convergence(S, chart.L, chart.Y, parse_grids(o.grids))) {
      if (est.at_floor) {
        char buf[120];
        std::snprintf(buf, sizeof buf, "%-40s at floor (max residual %.3e)\n", ("order " + est.identity).c_str(),
                      est.levels.back().second);
        notes += buf;
        continue;
      }
      checks.push_back({"order " + est.identity, est.order, 1.9, false});
    }
  } else if (o.suite == "dynamic") {
    for (const auto& e : residual_dynamic(S, pts).entries) checks.push_back({e.name, e.max_abs, 1e-6});
  } else if (o.suite == "normal_variation") {
    for (const auto& e : residual_normal_variation(S, pts).entries) checks.push_back({e.name, e.max_abs, 1e-6});
    for (double c : {0.5, 1.0}) {
      const double v = n_of_H_closed_form(sample_geometry(analytic_constant(c), 0.7, 0.2));
      checks.push_back({"umbilic n(H) at height " + std::to_string(c),
                        std::abs(v - 2.0 / (std::cosh(c) * std::cosh(c))), 1e-9});
    }
  } else {
    throw std::invalid_argument("unknown suite '" + o.suite + "'");
  }
  const int rc = report(checks);
  std::fputs(notes.c_str(), stdout);
  return rc;
}

void apply_overrides(RunConfig& c, const std::string& series, const std::string& summary,
                     const std::string& plot) {
  if (!series.empty()) c.series_path = series;
  if (!summary.empty()) c.summary_path = summary;
  if (!plot.empty()) c.plot_path = plot;
}

void emit_outputs(const RunConfig& c, const std::vector<MonitorRecord>& recs) {
  if (!c.series_path.empty()) emit_series(recs, c.series_path);
  if (!c.plot_path.empty()) emit_plot(recs, c.plot_kind, c.plot_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean curvature flow of geodesic graphs in a Fuchsian manifold"};
  app.require_subcommand(1);

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "Residuals of the geometric identities");
  verify->add_option("--suite", vo.suite, "static, dynamic or normal_variation")
      ->check(CLI::IsMember({"static", "dynamic", "normal_variation"}));
  verify->add_option("--grids", vo.grids, "Comma-separated Nx values for the order study");
  verify->add_option("--amplitude", vo.amplitude, "Amplitude of the test surface");
  verify->add_option("--points", vo.random_points, "Random sample points (default: fixed grid)");
  verify->add_option("--seed", vo.seed, "Seed for random sample points");

  double a0 = 1.0, t_max = 3.0, eps = 0.0, dt = 1e-3;
  std::string curve_out;
  auto* barrier = app.add_subcommand("barrier", "Equidistant barrier: RK4 against the closed form");
  barrier->add_option("--a0", a0)->required()->check(CLI::NonNegativeNumber);
  barrier->add_option("--t-max", t_max)->required()->check(CLI::NonNegativeNumber);
  barrier->add_option("--dt", dt)->check(CLI::PositiveNumber);
  barrier->add_option("--out", curve_out, "CSV of the integrated curve");

  auto* angle = app.add_subcommand("angle-ode", "Angle bound: RK4 against the closed form");
  angle->add_option("--a0", a0)->required()->check(CLI::NonNegativeNumber);
  angle->add_option("--eps", eps)->required()->check(CLI::Range(0.0, 1.0));
  angle->add_option("--t-max", t_max)->check(CLI::NonNegativeNumber);
  angle->add_option("--dt", dt)->check(CLI::PositiveNumber);
  angle->add_option("--out", curve_out, "CSV of the integrated curve");

  std::string config_path, series, summary, plot, steps_out;
  auto* flow = app.add_subcommand("flow", "Run the flow from a config file");
  auto* probe = app.add_subcommand("probe", "Run the angle-minimum probe from a config file");
  for (auto* sub : {flow, probe}) {
    sub->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
    sub->add_option("--series", series, "CSV of monitor records (overrides config)");
    sub->add_option("--summary", summary, "Key/value summary (overrides config)");
    sub->add_option("--plot", plot, "SVG plot (overrides config)");
  }
  probe->add_option("--steps", steps_out, "CSV of per-step probe quantities");

  bool check = false;
  int points = 1000;
  std::uint64_t seed = 1;
  auto* group = app.add_subcommand("group", "Checks on the octagon group");
  group->add_flag("--check", check)->required();
  group->add_option("--points", points)->check(CLI::PositiveNumber);
  group->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInvalid;
  }

  try {
    if (verify->parsed()) return run_verify(vo);

    if (barrier->parsed() || angle->parsed()) {
      const bool is_barrier = barrier->parsed();
      const SampledCurve c = is_barrier ? umbilic_integrate(a0, t_max, dt)
                                        : angle_ode_integrate(a0, angle_phi0(a0, eps), t_max, dt);
      double worst = 0.0;
      for (const auto& s : c)
        worst = std::max(worst, std::abs(s.value - (is_barrier ? umbilic_exact(a0, s.t)
                                                               : angle_lower_bound(a0, eps, s.t))));
      if (!curve_out.empty()) emit_curve(c, curve_out);
      std::printf("final t = %.17g value = %.17g\n", c.back().t, c.back().value);
      return report({{"max deviation from closed form", worst, 1e-8}});
    }

    if (flow->parsed() || probe->parsed()) {
      RunConfig cfg = load_config(config_path);
      apply_overrides(cfg, series, summary, plot);
      const FlowConfig fc = resolve_flow(cfg);
      if (flow->parsed()) {
        const RunResult r = run(fc);
        emit_outputs(cfg, r.records);
        const std::string text = format_summary(r.summary);
        if (!cfg.summary_path.empty()) emit_summary(r.summary, cfg.summary_path);
        std::fputs(text.c_str(), stdout);
      } else {
        const ProbeReport rep = singularity_probe(fc);
        emit_outputs(cfg, rep.records);
        if (!steps_out.empty()) emit_probe_steps(rep.steps, steps_out);
        if (!cfg.summary_path.empty()) emit_probe_summary(rep, cfg.summary_path);
        std::fputs(format_probe_summary(rep).c_str(), stdout);
      }
      return kOk;
    }

    if (group->parsed()) {
      const GroupCheckReport r = check_octagon_group(points, seed);
      std::printf("translation length = %.17g\n", r.translation_length);
      return report({{"relator distance to identity", r.relator_error, 1e-10},
                     {"reduction round trip", r.roundtrip_error, 1e-9},
                     {"translation length spread", r.translation_spread, 1e-10},
                     {"points outside the domain", static_cast<double>(r.outside_domain), 0.0}});
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInvalid;
  } catch (const FlowAborted& e) {
    std::fprintf(stderr, "flow aborted: %s\n", e.what());
    return kRuntime;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntime;
  }
  return kInvalid;
}
