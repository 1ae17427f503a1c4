/// \file cli_io.hpp
/// \brief Plain-text run configuration and bit-stable CSV, summary and SVG
///        emission.

#ifndef FMCF_CLI_IO_HPP
#define FMCF_CLI_IO_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "comparison_ode.hpp"
#include "flow_engine.hpp"

namespace fmcf {

/// Bad configuration text; line() is 1-based.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(int line, const std::string& msg)
      : std::invalid_argument("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& what, const std::string& path)
      : std::runtime_error(what + ": " + path), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum class PlotKind { height_decay, angle_bound, probe };

inline const char* to_string(PlotKind k) {
  switch (k) {
    case PlotKind::height_decay: return "height-decay";
    case PlotKind::angle_bound: return "angle-bound";
    case PlotKind::probe: return "probe";
  }
  return "?";
}

inline PlotKind parse_plot_kind(std::string_view s) {
  if (s == "height-decay") return PlotKind::height_decay;
  if (s == "angle-bound") return PlotKind::angle_bound;
  if (s == "probe") return PlotKind::probe;
  throw std::invalid_argument("unknown plot kind '" + std::string(s) + "'");
}

struct RunConfig {
  std::string command = "flow";  // flow | probe
  FlowConfig flow;
  std::string field_file;        // heights for profile = field
  std::uint64_t seed = 1;
  std::string series_path;
  std::string summary_path;
  std::string plot_path;
  PlotKind plot_kind = PlotKind::height_decay;
  bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(std::string_view v, int line, std::string_view key) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError(line, "cannot parse '" + std::string(v) + "' as a number for " + std::string(key));
  return out;
}

template <class Int>
Int parse_int(std::string_view v, int line, std::string_view key) {
  Int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError(line, "cannot parse '" + std::string(v) + "' as an integer for " + std::string(key));
  return out;
}

inline bool parse_bool(std::string_view v, int line, std::string_view key) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(line, "expected true or false for " + std::string(key));
}

inline void require(bool ok, int line, const std::string& msg) {
  if (!ok) throw ConfigError(line, msg);
}

inline const char* profile_name(InitialData::Kind k) {
  switch (k) {
    case InitialData::Kind::constant: return "constant";
    case InitialData::Kind::sine: return "sine";
    case InitialData::Kind::front: return "front";
    case InitialData::Kind::field: return "field";
  }
  return "?";
}

}  // namespace detail

/// Parses `key = value` lines; `#` starts a comment.  Unset keys keep their
/// defaults.
inline RunConfig parse_config(std::string_view text) {
  using namespace detail;
  RunConfig c;
  FlowParams& p = c.flow.params;
  InitialData& init = c.flow.init;
  FermiChart& ch = c.flow.chart;
  std::vector<std::string> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string_view::npos, line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view v = trim(line.substr(eq + 1));
    require(!key.empty(), line_no, "missing key");
    require(!v.empty(), line_no, "missing value for " + key);
    require(std::find(seen.begin(), seen.end(), key) == seen.end(), line_no, "duplicate key " + key);
    seen.push_back(key);

    auto num = [&] { return parse_double(v, line_no, key); };
    auto positive = [&] {
      const double x = num();
      require(x > 0.0, line_no, key + " must be > 0");
      return x;
    };
    auto nonneg = [&] {
      const double x = num();
      require(x >= 0.0, line_no, key + " must be >= 0");
      return x;
    };
    auto unit_open = [&] {
      const double x = num();
      require(x > 0.0 && x < 1.0, line_no, key + " must lie in (0, 1)");
      return x;
    };

    if (key == "command") {
      require(v == "flow" || v == "probe", line_no, "command must be flow or probe");
      c.command = std::string(v);
    } else if (key == "L") {
      ch.L = positive();
    } else if (key == "Y") {
      ch.Y = positive();
    } else if (key == "Nx" || key == "Ny") {
      const int n = parse_int<int>(v, line_no, key);
      require(n >= 4 && n <= 4096, line_no, key + " must lie in [4, 4096]");
      (key == "Nx" ? ch.Nx : ch.Ny) = n;
    } else if (key == "profile") {
      if (v == "constant") init.kind = InitialData::Kind::constant;
      else if (v == "sine") init.kind = InitialData::Kind::sine;
      else if (v == "front") init.kind = InitialData::Kind::front;
      else if (v == "field") init.kind = InitialData::Kind::field;
      else throw ConfigError(line_no, "profile must be constant, sine, front or field");
    } else if (key == "a0") {
      init.level = positive();
      require(init.level <= p.max_height, line_no, "a0 exceeds the chart height limit");
    } else if (key == "amplitude") {
      init.amplitude = num();
    } else if (key == "offset") {
      init.offset = num();
    } else if (key == "kx" || key == "ky") {
      const int n = parse_int<int>(v, line_no, key);
      require(n >= 0 && n <= 64, line_no, key + " must lie in [0, 64]");
      (key == "kx" ? init.kx : init.ky) = n;
    } else if (key == "beta") {
      init.beta = num();
    } else if (key == "field_file") {
      c.field_file = std::string(v);
    } else if (key == "eps") {
      const double e = num();
      require(e >= 0.0 && e <= 1.0, line_no, "eps must lie in [0, 1]");
      p.eps = e;
    } else if (key == "C") {
      p.probe_C = positive();
    } else if (key == "tol_C") {
      p.tol_C = nonneg();
    } else if (key == "cfl") {
      p.cfl = positive();
      require(p.cfl <= 0.25, line_no, "cfl must lie in (0, 0.25]");
    } else if (key == "dt") {
      p.dt_max = positive();
    } else if (key == "t_max") {
      p.t_max = nonneg();
    } else if (key == "theta_floor") {
      p.theta_floor = unit_open();
    } else if (key == "probe_tol") {
      p.probe_tol = nonneg();
    } else if (key == "converge_umax") {
      p.converge_umax = positive();
    } else if (key == "converge_theta") {
      p.converge_theta = unit_open();
    } else if (key == "stop_on_convergence") {
      p.stop_on_convergence = parse_bool(v, line_no, key);
    } else if (key == "slope_window") {
      p.slope_window = positive();
      require(p.slope_window <= 1.0, line_no, "slope_window must lie in (0, 1]");
    } else if (key == "seed") {
      c.seed = parse_int<std::uint64_t>(v, line_no, key);
    } else if (key == "series") {
      c.series_path = std::string(v);
    } else if (key == "summary") {
      c.summary_path = std::string(v);
    } else if (key == "plot") {
      c.plot_path = std::string(v);
    } else if (key == "plot_kind") {
      try {
        c.plot_kind = parse_plot_kind(v);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(line_no, e.what());
      }
    } else {
      throw ConfigError(line_no, "unknown key '" + key + "'");
    }
  }
  if (init.kind == InitialData::Kind::field && c.field_file.empty())
    throw ConfigError(line_no, "profile = field needs field_file");
  return c;
}

/// Canonical text form; parse_config(serialize(c)) == c.
inline std::string serialize(const RunConfig& c) {
  using detail::fmt17;
  const auto& ch = c.flow.chart;
  const auto& in = c.flow.init;
  const auto& p = c.flow.params;
  std::string out;
  auto kv = [&](const char* k, const std::string& v) { out += std::string(k) + " = " + v + "\n"; };
  kv("command", c.command);
  kv("L", fmt17(ch.L));
  kv("Y", fmt17(ch.Y));
  kv("Nx", std::to_string(ch.Nx));
  kv("Ny", std::to_string(ch.Ny));
  kv("profile", detail::profile_name(in.kind));
  kv("a0", fmt17(in.level));
  kv("amplitude", fmt17(in.amplitude));
  kv("offset", fmt17(in.offset));
  kv("kx", std::to_string(in.kx));
  kv("ky", std::to_string(in.ky));
  kv("beta", fmt17(in.beta));
  if (!c.field_file.empty()) kv("field_file", c.field_file);
  if (p.eps) kv("eps", fmt17(*p.eps));
  kv("C", fmt17(p.probe_C));
  kv("tol_C", fmt17(p.tol_C));
  kv("cfl", fmt17(p.cfl));
  if (p.dt_max) kv("dt", fmt17(*p.dt_max));
  kv("t_max", fmt17(p.t_max));
  kv("theta_floor", fmt17(p.theta_floor));
  kv("probe_tol", fmt17(p.probe_tol));
  kv("converge_umax", fmt17(p.converge_umax));
  kv("converge_theta", fmt17(p.converge_theta));
  kv("stop_on_convergence", p.stop_on_convergence ? "true" : "false");
  kv("slope_window", fmt17(p.slope_window));
  kv("seed", std::to_string(c.seed));
  if (!c.series_path.empty()) kv("series", c.series_path);
  if (!c.summary_path.empty()) kv("summary", c.summary_path);
  if (!c.plot_path.empty()) kv("plot", c.plot_path);
  kv("plot_kind", to_string(c.plot_kind));
  return out;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline RunConfig load_config(const std::string& path) { return parse_config(read_text_file(path)); }

/// Whitespace-separated node heights, row-major in j.
inline std::vector<double> load_field(const std::string& path, const FermiChart& ch) {
  std::istringstream in(read_text_file(path));
  std::vector<double> f;
  std::string tok;
  while (in >> tok) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
      throw std::invalid_argument("field file " + path + ": bad value '" + tok + "'");
    f.push_back(v);
  }
  if (f.size() != ch.nodes())
    throw std::invalid_argument("field file " + path + ": " + std::to_string(f.size()) + " values for " +
                                std::to_string(ch.nodes()) + " nodes");
  return f;
}

/// The flow configuration with any referenced field loaded.
inline FlowConfig resolve_flow(const RunConfig& c) {
  FlowConfig f = c.flow;
  if (f.init.kind == InitialData::Kind::field) f.init.field = load_field(c.field_file, f.chart);
  return f;
}

namespace detail {

/// Writes the whole text or throws; LF line endings are kept verbatim.
inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing", path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("write failed", path);
}

}  // namespace detail

inline constexpr const char* kSeriesHeader = "t,umax,theta_min,L,a,b,U_t,Phi_t,I_member,crit_lhs,crit_rhs";

inline std::string format_series(const std::vector<MonitorRecord>& recs) {
  using detail::fmt17;
  std::string out = std::string(kSeriesHeader) + "\n";
  for (const auto& r : recs) {
    out += fmt17(r.t) + ',' + fmt17(r.umax) + ',' + fmt17(r.theta_min) + ',' + fmt17(r.L) + ',' + fmt17(r.a) +
           ',' + fmt17(r.b) + ',' + fmt17(r.U) + ',' + fmt17(r.Phi) + ',' + (r.I_member ? "1" : "0") + ',' +
           fmt17(r.abs_a) + ',' + fmt17(r.crit_rhs) + '\n';
  }
  return out;
}

inline void emit_series(const std::vector<MonitorRecord>& recs, const std::string& path) {
  if (recs.empty()) throw std::invalid_argument("emit_series: empty record series, nothing written");
  detail::write_text_file(path, format_series(recs));
}

/// Comparison curve as `t,value` rows.
inline void emit_curve(const SampledCurve& curve, const std::string& path) {
  if (curve.empty()) throw std::invalid_argument("emit_curve: empty curve, nothing written");
  std::string out = "t,value\n";
  for (const auto& s : curve) out += detail::fmt17(s.t) + ',' + detail::fmt17(s.value) + '\n';
  detail::write_text_file(path, out);
}

/// Per-step probe quantities.
inline void emit_probe_steps(const std::vector<ProbeStep>& steps, const std::string& path) {
  using detail::fmt17;
  if (steps.empty()) throw std::invalid_argument("emit_probe_steps: empty series, nothing written");
  std::string out = "t,theta,abs_a,crit_rhs,I_member,dtheta_dt,rhs,residual\n";
  for (const auto& s : steps)
    out += fmt17(s.t) + ',' + fmt17(s.theta) + ',' + fmt17(s.abs_a) + ',' + fmt17(s.crit_rhs) + ',' +
           (s.I_member ? "1" : "0") + ',' + fmt17(s.dtheta_dt) + ',' + fmt17(s.rhs) + ',' + fmt17(s.residual) +
           '\n';
  detail::write_text_file(path, out);
}

inline std::string format_summary(const RunSummary& s) {
  using detail::fmt17;
  std::string out;
  auto kv = [&](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
  kv("outcome", to_string(s.outcome));
  kv("t_final", fmt17(s.t_final));
  kv("steps", std::to_string(s.steps));
  kv("a0", fmt17(s.initial.a0));
  kv("theta_min0", fmt17(s.initial.theta_min0));
  kv("threshold_tanh_a0", fmt17(s.initial.threshold));
  kv("compliance", to_string(s.initial.compliance));
  kv("eps", fmt17(s.initial.eps));
  kv("slope_sinh_umax", fmt17(s.slope_sinh_umax));
  kv("slope_one_minus_alpha", fmt17(s.slope_one_minus_alpha));
  kv("h", fmt17(s.h));
  kv("tolerance", fmt17(s.tol));
  kv("barrier_violations", std::to_string(s.barrier_violations));
  kv("angle_violations", std::to_string(s.angle_violations));
  const MonitorRecord& r = s.final_record;
  kv("final.t", fmt17(r.t));
  kv("final.umax", fmt17(r.umax));
  kv("final.theta_min", fmt17(r.theta_min));
  kv("final.x", fmt17(r.x));
  kv("final.y", fmt17(r.y));
  kv("final.L", fmt17(r.L));
  kv("final.a", fmt17(r.a));
  kv("final.b", fmt17(r.b));
  kv("final.I_member", r.I_member ? "1" : "0");
  return out;
}

inline void emit_summary(const RunSummary& s, const std::string& path) {
  detail::write_text_file(path, format_summary(s));
}

inline std::string format_probe_summary(const ProbeReport& rep) {
  using detail::fmt17;
  std::string out = format_summary(rep.summary);
  out += "classification = " + std::string(to_string(rep.classification)) + "\n";
  out += "inequality_fraction = " + fmt17(rep.inequality_fraction) + "\n";
  out += "envelope_C_fit = " + fmt17(rep.envelope_C) + "\n";
  out += std::string("envelope_holds_configured_C = ") + (rep.envelope_holds_configured ? "true" : "false") + "\n";
  long members = 0;
  for (const auto& s : rep.steps) members += s.I_member ? 1 : 0;
  out += "I_member_steps = " + std::to_string(members) + "\n";
  return out;
}

inline void emit_probe_summary(const ProbeReport& rep, const std::string& path) {
  detail::write_text_file(path, format_probe_summary(rep));
}

// ---------------------------------------------------------------------------
// SVG plots

namespace detail {

struct PlotSeries {
  std::string label;
  std::string color;
  std::vector<double> t, v;
};

inline std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string render_svg(const std::string& title, const std::string& ylabel,
                              const std::vector<PlotSeries>& series) {
  const double W = 640, H = 400, ml = 70, mr = 20, mt = 40, mb = 50;
  double t0 = std::numeric_limits<double>::infinity(), t1 = -t0, v0 = t0, v1 = -t0;
  for (const auto& s : series)
    for (std::size_t k = 0; k < s.t.size(); ++k) {
      t0 = std::min(t0, s.t[k]);
      t1 = std::max(t1, s.t[k]);
      v0 = std::min(v0, s.v[k]);
      v1 = std::max(v1, s.v[k]);
    }
  if (!(t1 > t0)) {
    t0 -= 0.5;
    t1 += 0.5;
  }
  if (!(v1 > v0)) {
    const double pad = std::max(0.5 * std::abs(v0), 0.5);
    v0 -= pad;
    v1 += pad;
  }
  auto X = [&](double t) { return ml + (t - t0) / (t1 - t0) * (W - ml - mr); };
  auto Y = [&](double v) { return H - mb - (v - v0) / (v1 - v0) * (H - mt - mb); };

  std::string o;
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
  o += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  o += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" + title +
       "</text>\n";
  o += "<line x1=\"" + fmt6(ml) + "\" y1=\"" + fmt6(H - mb) + "\" x2=\"" + fmt6(W - mr) + "\" y2=\"" + fmt6(H - mb) +
       "\" stroke=\"black\"/>\n";
  o += "<line x1=\"" + fmt6(ml) + "\" y1=\"" + fmt6(mt) + "\" x2=\"" + fmt6(ml) + "\" y2=\"" + fmt6(H - mb) +
       "\" stroke=\"black\"/>\n";
  auto text = [&](double x, double y, const std::string& anchor, const std::string& s) {
    o += "<text x=\"" + fmt6(x) + "\" y=\"" + fmt6(y) + "\" text-anchor=\"" + anchor +
         "\" font-family=\"sans-serif\" font-size=\"12\">" + s + "</text>\n";
  };
  text(ml, H - mb + 18, "middle", fmt6(t0));
  text(W - mr, H - mb + 18, "middle", fmt6(t1));
  text(ml - 6, H - mb + 4, "end", fmt6(v0));
  text(ml - 6, mt + 4, "end", fmt6(v1));
  text(0.5 * (ml + W - mr), H - 12, "middle", "t");
  o += "<text x=\"16\" y=\"" + fmt6(0.5 * (mt + H - mb)) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"12\" transform=\"rotate(-90 16 " + fmt6(0.5 * (mt + H - mb)) + ")\">" + ylabel + "</text>\n";
  double ly = mt + 8;
  for (const auto& s : series) {
    o += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < s.t.size(); ++k) {
      if (k) o += ' ';
      o += fmt6(X(s.t[k])) + ',' + fmt6(Y(s.v[k]));
    }
    o += "\"/>\n";
    if (s.t.size() == 1) {
      o += "<circle cx=\"" + fmt6(X(s.t[0])) + "\" cy=\"" + fmt6(Y(s.v[0])) + "\" r=\"3\" fill=\"" + s.color + "\"/>\n";
    }
    o += "<line x1=\"" + fmt6(W - mr - 150) + "\" y1=\"" + fmt6(ly) + "\" x2=\"" + fmt6(W - mr - 130) + "\" y2=\"" +
         fmt6(ly) + "\" stroke=\"" + s.color + "\" stroke-width=\"1.5\"/>\n";
    text(W - mr - 125, ly + 4, "start", s.label);
    ly += 16;
  }
  o += "</svg>\n";
  return o;
}

}  // namespace detail

inline std::string format_plot(const std::vector<MonitorRecord>& recs, PlotKind kind) {
  if (recs.empty()) throw std::invalid_argument("emit_plot: empty series");
  detail::PlotSeries data{"", "#1f5fbf", {}, {}}, bound{"", "#c03030", {}, {}};
  for (const auto& r : recs) {
    data.t.push_back(r.t);
    bound.t.push_back(r.t);
    switch (kind) {
      case PlotKind::height_decay:
        data.v.push_back(r.umax);
        bound.v.push_back(r.U);
        break;
      case PlotKind::angle_bound:
        data.v.push_back(r.theta_min * r.theta_min);
        bound.v.push_back(r.Phi * r.Phi);
        break;
      case PlotKind::probe:
        data.v.push_back(r.abs_a);
        bound.v.push_back(r.crit_rhs);
        break;
    }
  }
  switch (kind) {
    case PlotKind::height_decay:
      data.label = "max |u|";
      bound.label = "arcsinh(exp(-2t) sinh a0)";
      return detail::render_svg("height decay", "height", {data, bound});
    case PlotKind::angle_bound:
      data.label = "min Theta^2";
      bound.label = "angle bound phi(t)";
      return detail::render_svg("angle bound", "Theta^2", {data, bound});
    case PlotKind::probe:
      data.label = "|a| at argmin";
      bound.label = "-theta log theta + C theta";
      return detail::render_svg("angle-minimum probe", "curvature", {data, bound});
  }
  throw std::invalid_argument("emit_plot: unknown plot kind");
}

inline void emit_plot(const std::vector<MonitorRecord>& recs, PlotKind kind, const std::string& path) {
  detail::write_text_file(path, format_plot(recs, kind));
}

}  // namespace fmcf

#endif  // FMCF_CLI_IO_HPP
