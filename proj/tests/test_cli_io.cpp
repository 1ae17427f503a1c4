#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "fmcf/cli_io.hpp"

using namespace fmcf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "fmcf_cli_io_test";
  fs::create_directories(dir);
  return dir / name;
}

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

TEST(CliIo, DefaultsApplied) {
  const RunConfig c = parse_config("a0 = 1.0\ncfl = 0.2\n");
  EXPECT_EQ(c.flow.init.level, 1.0);
  EXPECT_EQ(c.flow.params.cfl, 0.2);
  EXPECT_EQ(c.flow.chart, (FermiChart{6.4, 1.6, 128, 64}));
  EXPECT_EQ(c.flow.init.kind, InitialData::Kind::constant);
  EXPECT_EQ(c.flow.params.probe_C, 1.0);
  EXPECT_FALSE(c.flow.params.eps.has_value());
  EXPECT_EQ(c.command, "flow");
}

TEST(CliIo, ErrorsCiteLines) {
  EXPECT_EQ(error_line("a0 = -1"), 1);
  EXPECT_EQ(error_line("# comment\n\nunknown_key = 3"), 3);
  EXPECT_EQ(error_line("a0 = 1\ncfl = fast"), 2);
  EXPECT_EQ(error_line("a0 = 1\na0 = 2"), 2);
  EXPECT_EQ(error_line("Nx = 12.5"), 1);
  EXPECT_EQ(error_line("cfl = 0.3"), 1);
  EXPECT_EQ(error_line("eps = 1.5"), 1);
  EXPECT_EQ(error_line("just words"), 1);
  EXPECT_EQ(error_line("t_max = nan"), 1);
  EXPECT_EQ(error_line("plot_kind = pie"), 1);
  try {
    parse_config("unknown_key = 3");
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("unknown key"), std::string::npos);
  }
}

TEST(CliIo, CommentsAndWhitespace) {
  const RunConfig c = parse_config("  profile = sine   # the x-sine\r\namplitude=0.25\n\tkx = 2\n");
  EXPECT_EQ(c.flow.init.kind, InitialData::Kind::sine);
  EXPECT_EQ(c.flow.init.amplitude, 0.25);
  EXPECT_EQ(c.flow.init.kx, 2);
}

TEST(CliIo, SerializeRoundTrip) {
  const std::string text =
      "command = probe\nL = 6.4\nNx = 64\nNy = 32\nprofile = front\namplitude = 0.1\n"
      "offset = 0.30000000000000004\neps = 0.125\nC = 2.5\ndt = 1e-4\nt_max = 2\n"
      "stop_on_convergence = false\nseed = 42\nseries = out.csv\nplot_kind = probe\n";
  const RunConfig a = parse_config(text);
  const RunConfig b = parse_config(serialize(a));
  EXPECT_EQ(a, b);
  EXPECT_EQ(serialize(a), serialize(b));
  EXPECT_EQ(b.flow.init.offset, 0.30000000000000004);
  const RunConfig d = parse_config("");
  EXPECT_EQ(parse_config(serialize(d)), d);
}

TEST(CliIo, FieldProfileNeedsFile) {
  EXPECT_THROW(parse_config("profile = field"), ConfigError);
  const fs::path f = scratch("field.txt");
  {
    std::string body;
    for (int k = 0; k < 16 * 8; ++k) body += "0.25\n";
    detail::write_text_file(f.string(), body);
  }
  const RunConfig c = parse_config("profile = field\nNx = 16\nNy = 8\nfield_file = " + f.string());
  const FlowConfig flow = resolve_flow(c);
  EXPECT_EQ(flow.init.field.size(), 128u);
  RunConfig wrong = c;
  wrong.flow.chart.Nx = 32;
  EXPECT_THROW(resolve_flow(wrong), std::invalid_argument);
}

TEST(CliIo, UmbilicSeriesRow) {
  FlowConfig c;
  c.params.t_max = 0.0;
  const RunResult r = run(c);
  const std::string csv = format_series(r.records);
  EXPECT_EQ(csv,
            "t,umax,theta_min,L,a,b,U_t,Phi_t,I_member,crit_lhs,crit_rhs\n"
            "0,1,1,1," + detail::fmt17(r.records[0].a) + ',' + detail::fmt17(r.records[0].b) + ",1," +
                detail::fmt17(r.records[0].Phi) + ",0," + detail::fmt17(r.records[0].abs_a) + ",1\n");
  EXPECT_EQ(csv.find('\r'), std::string::npos);
}

TEST(CliIo, EmptySeriesWritesNothing) {
  const fs::path p = scratch("empty.csv");
  fs::remove(p);
  EXPECT_THROW(emit_series({}, p.string()), std::invalid_argument);
  EXPECT_FALSE(fs::exists(p));
  EXPECT_THROW(emit_plot({}, PlotKind::probe, p.string()), std::invalid_argument);
  EXPECT_FALSE(fs::exists(p));
}

TEST(CliIo, IoErrorCarriesPath) {
  std::vector<MonitorRecord> one(1);
  try {
    emit_series(one, "/nonexistent_dir/x.csv");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_EQ(e.path(), "/nonexistent_dir/x.csv");
  }
}

TEST(CliIo, SeriesIsDeterministic) {
  FlowConfig c;
  c.chart = {6.4, 1.6, 16, 8};
  c.init.kind = InitialData::Kind::sine;
  c.init.amplitude = 0.3;
  c.init.offset = 0.2;
  c.params.t_max = 0.5;
  const fs::path a = scratch("a.csv"), b = scratch("b.csv");
  emit_series(run(c).records, a.string());
  emit_series(run(c).records, b.string());
  EXPECT_EQ(read_text_file(a.string()), read_text_file(b.string()));
}

TEST(CliIo, SummaryFields) {
  FlowConfig c;
  c.chart = {6.4, 1.6, 16, 8};
  const RunResult r = run(c);
  const std::string s = format_summary(r.summary);
  for (const char* key : {"outcome = converged", "t_final = ", "slope_sinh_umax = ", "threshold_tanh_a0 = ",
                          "compliance = strict", "barrier_violations = 0", "angle_violations = 0"})
    EXPECT_NE(s.find(key), std::string::npos) << key;

  FlowConfig lost = c;
  lost.init.kind = InitialData::Kind::sine;
  lost.init.amplitude = 1.2;
  lost.init.kx = 4;
  lost.params.theta_floor = 0.5;
  const ProbeReport rep = singularity_probe(lost);
  const std::string ps = format_probe_summary(rep);
  EXPECT_NE(ps.find("outcome = graph-lost"), std::string::npos);
  EXPECT_NE(ps.find("final.theta_min = " + detail::fmt17(rep.records.back().theta_min)), std::string::npos);
  EXPECT_NE(ps.find("classification = "), std::string::npos);

  FlowConfig timed = c;
  timed.params.t_max = 0.1;
  EXPECT_NE(format_summary(run(timed).summary).find("outcome = max-time"), std::string::npos);
}

TEST(CliIo, PlotsAreValidSvg) {
  FlowConfig c;
  c.chart = {6.4, 1.6, 16, 8};
  c.params.t_max = 0.3;
  const auto recs = run(c).records;
  for (PlotKind k : {PlotKind::height_decay, PlotKind::angle_bound, PlotKind::probe}) {
    const std::string svg = format_plot(recs, k);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    EXPECT_EQ(std::count(svg.begin(), svg.end(), '<') , std::count(svg.begin(), svg.end(), '>'));
    EXPECT_EQ(svg.find("nan"), std::string::npos);
    EXPECT_EQ(svg.find("inf"), std::string::npos);
  }
  const std::string one = format_plot({recs.front()}, PlotKind::probe);
  EXPECT_NE(one.find("<circle"), std::string::npos);
  EXPECT_EQ(parse_plot_kind("angle-bound"), PlotKind::angle_bound);
  EXPECT_THROW(parse_plot_kind("pie"), std::invalid_argument);
}

TEST(CliIo, CurveCsv) {
  const fs::path p = scratch("curve.csv");
  emit_curve(umbilic_integrate(1.0, 0.002, 1e-3), p.string());
  EXPECT_EQ(read_text_file(p.string()).substr(0, 12), "t,value\n0,1\n");
}

}  // namespace
