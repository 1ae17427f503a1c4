/// \file identity_lab.hpp
/// \brief Residuals of the pointwise and evolution identities satisfied by
///        geodesic graphs under mean curvature flow, with grid-refinement
///        order estimates.
///
/// Static identities are evaluated either with exact derivatives (analytic
/// graphs) or with the second-order stencils (discrete graphs).  Time
/// derivatives are material: a point is followed along -eps H nu with
/// normal_push, the quantity is compared at the matched point, and the
/// O(eps) difference quotients are Richardson-extrapolated.

#ifndef FMCF_IDENTITY_LAB_HPP
#define FMCF_IDENTITY_LAB_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ambient.hpp"
#include "graph_geometry.hpp"
#include "reduce.hpp"

namespace fmcf {

struct ChartPoint {
  double x = 0.0;
  double y = 0.0;
};

struct ResidualEntry {
  std::string name;
  double max_abs = 0.0;
  double mean_abs = 0.0;
  /// For eps-based identities: max residual of the raw difference quotient
  /// at each eps, before extrapolation.
  std::vector<double> raw_max;
};

struct ResidualReport {
  std::string suite;
  double h = 0.0;  // grid spacing; 0 for exact derivatives
  std::vector<ChartPoint> points;
  std::vector<ResidualEntry> entries;

  const ResidualEntry& entry(std::string_view name) const {
    for (const auto& e : entries)
      if (e.name == name) return e;
    throw std::out_of_range("ResidualReport: no identity named " + std::string(name));
  }
  double worst() const {
    double w = 0.0;
    for (const auto& e : entries) w = std::max(w, e.max_abs);
    return w;
  }
};

struct ConvergenceEstimate {
  std::string identity;
  std::vector<std::pair<double, double>> levels;  // (h, max residual)
  double order = std::numeric_limits<double>::quiet_NaN();
  bool at_floor = false;
};

inline constexpr double kResidualFloor = 1e-12;

inline const std::vector<double>& default_eps_sequence() {
  static const std::vector<double> eps{1e-3, 5e-4, 2.5e-4};
  return eps;
}

inline const std::array<const char*, 5>& static_identity_names() {
  static const std::array<const char*, 5> names{"laplace_u", "laplace_eta", "laplace_theta",
                                                "grad_u_norm", "grad_theta_frame"};
  return names;
}

inline const std::array<const char*, 7>& dynamic_identity_names() {
  static const std::array<const char*, 7> names{"theta_rate",      "theta_evolution",
                                                "alpha_evolution", "H_evolution",
                                                "A2_evolution",    "u_material",
                                                "u_heat"};
  return names;
}

inline const std::array<const char*, 3>& normal_variation_names() {
  static const std::array<const char*, 3> names{"n_of_H", "theta_two_forms", "normal_transport"};
  return names;
}

/// A regular nx-by-ny set of points with |y| <= Y/2.
inline std::vector<ChartPoint> sample_points(double L, double Y, int nx = 8, int ny = 5) {
  std::vector<ChartPoint> pts;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      pts.push_back({(i + 0.25) * L / nx, -0.5 * Y + j * Y / std::max(1, ny - 1)});
  return pts;
}

/// n uniformly random points with |y| <= Y/2, reproducible from the seed.
inline std::vector<ChartPoint> random_sample_points(double L, double Y, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, L), uy(-0.5 * Y, 0.5 * Y);
  std::vector<ChartPoint> pts;
  for (int k = 0; k < n; ++k) {
    const double x = ux(rng);
    pts.push_back({x, uy(rng)});
  }
  return pts;
}

namespace detail {

/// Everything the static identities need at one point.
struct StaticInputs {
  HeightDerivs<double> d;
  GraphFields<double> f;
  double theta_x, theta_y, H_x, H_y;
  double lap_u, lap_theta, lap_eta;
};

inline double pair_with_du(const GraphFields<double>& f, const HeightDerivs<double>& d, double vx,
                           double vy) {
  return f.gi11 * d.ux * vx + f.gi12 * (d.ux * vy + d.uy * vx) + f.gi22 * d.uy * vy;
}

inline std::array<double, 5> static_residuals(const StaticInputs& in) {
  const auto& f = in.f;
  const auto& d = in.d;
  const double th = f.theta, t = f.t, c = f.c;
  const double n_dot_gradH = pair_with_du(f, d, in.H_x, in.H_y);
  const double n_dot_gradTheta = pair_with_du(f, d, in.theta_x, in.theta_y);

  std::array<double, 5> r{};
  r[0] = in.lap_u - (t * (1.0 + th * th) - f.H * th);
  r[1] = in.lap_eta - (f.s * f.H - f.A2 * f.eta + c * n_dot_gradH);
  r[2] = in.lap_theta - (n_dot_gradH - f.A2 * th + t * (1.0 + th * th) * f.H -
                         th * (1.0 - th * th) / (c * c) - 2.0 * t * n_dot_gradTheta -
                         2.0 * t * t * th);
  r[3] = pair_with_du(f, d, d.ux, d.uy) - (1.0 - th * th);

  // dTheta - sum_k (kappa_k - tanh(u) Theta) <e_k, n> e_k^flat, measured in g.
  const PrincipalFrame pf = principal_frame(f, d.ux, d.uy);
  double D[2] = {in.theta_x, in.theta_y};
  const std::array<std::pair<double, std::array<double, 2>>, 2> frame{
      std::pair{pf.a, pf.e1}, std::pair{pf.b, pf.e2}};
  for (const auto& [kappa, e] : frame) {
    const double en = d.ux * e[0] + d.uy * e[1];
    const double flat_x = f.g11 * e[0] + f.g12 * e[1];
    const double flat_y = f.g12 * e[0] + f.g22 * e[1];
    D[0] -= (kappa - t * th) * en * flat_x;
    D[1] -= (kappa - t * th) * en * flat_y;
  }
  r[4] = std::sqrt(std::max(0.0, f.gi11 * D[0] * D[0] + 2.0 * f.gi12 * D[0] * D[1] + f.gi22 * D[1] * D[1]));
  return r;
}

inline HeightDerivs<double> values(const HeightDerivs<Jet>& d) {
  return {d.u.partial(0, 0), d.u.partial(1, 0), d.u.partial(0, 1),
          d.u.partial(2, 0), d.u.partial(1, 1), d.u.partial(0, 2)};
}

inline GraphFields<double> field_values(const AnalyticLocal& loc) {
  return graph_fields(values(loc.d), base_trig(loc.y));
}

inline StaticInputs static_inputs(const AnalyticLocal& loc) {
  const auto& F = loc.f;
  StaticInputs in{values(loc.d), field_values(loc), F.theta.partial(1, 0), F.theta.partial(0, 1),
                  F.H.partial(1, 0), F.H.partial(0, 1), surface_laplacian(loc, loc.d.u),
                  surface_laplacian(loc, F.theta), surface_laplacian(loc, F.eta)};
  return in;
}

/// |grad A|^2 = g^kp g^iq g^jr (grad_k a_ij)(grad_p a_qr) from jets.
inline double grad_A_squared(const AnalyticLocal& loc) {
  const auto& F = loc.f;
  const double gi[2][2] = {{F.gi11.value(), F.gi12.value()}, {F.gi12.value(), F.gi22.value()}};
  const Jet* gj[2][2] = {{&F.g11, &F.g12}, {&F.g12, &F.g22}};
  const Jet* aj[2][2] = {{&F.a11, &F.a12}, {&F.a12, &F.a22}};
  auto dg = [&](int k, int i, int j) { return k == 0 ? (*gj[i][j])(1, 0) : (*gj[i][j])(0, 1); };
  auto da = [&](int k, int i, int j) { return k == 0 ? (*aj[i][j])(1, 0) : (*aj[i][j])(0, 1); };
  double gamma[2][2][2];  // gamma[m][i][j]
  for (int m = 0; m < 2; ++m)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double v = 0.0;
        for (int l = 0; l < 2; ++l) v += 0.5 * gi[m][l] * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
        gamma[m][i][j] = v;
      }
  double N[2][2][2];  // N[k][i][j] = grad_k a_ij
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double v = da(k, i, j);
        for (int m = 0; m < 2; ++m)
          v -= gamma[m][k][i] * aj[m][j]->value() + gamma[m][k][j] * aj[i][m]->value();
        N[k][i][j] = v;
      }
  double out = 0.0;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int p = 0; p < 2; ++p)
          for (int q = 0; q < 2; ++q)
            for (int r = 0; r < 2; ++r) out += gi[k][p] * gi[i][q] * gi[j][r] * N[k][i][j] * N[p][q][r];
  return out;
}

inline ResidualEntry summarize(std::string name, const std::vector<double>& abs_values) {
  ResidualEntry e;
  e.name = std::move(name);
  for (double v : abs_values) e.max_abs = std::max(e.max_abs, v);
  e.mean_abs = abs_values.empty() ? 0.0 : pairwise_sum(abs_values) / abs_values.size();
  return e;
}

/// Richardson table over all levels (eps halves between levels, error a
/// power series in eps).
inline double richardson(std::vector<double> D) {
  if (D.size() < 2) throw std::invalid_argument("richardson: need at least two eps levels");
  double factor = 2.0;
  for (std::size_t level = 1; level < D.size(); ++level, factor *= 2.0)
    for (std::size_t k = D.size() - 1; k >= level; --k) D[k] = (factor * D[k] - D[k - 1]) / (factor - 1.0);
  return D.back();
}

inline void require_halving(const std::vector<double>& eps) {
  if (eps.size() < 2) throw std::invalid_argument("eps sequence needs at least two values");
  for (std::size_t k = 1; k < eps.size(); ++k)
    if (std::abs(eps[k] - 0.5 * eps[k - 1]) > 1e-15 * eps[k - 1])
      throw std::invalid_argument("eps sequence must halve between levels");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Static identities

inline ResidualReport residual_static(const AnalyticGraph& S, const std::vector<ChartPoint>& points) {
  ResidualReport rep{"static", 0.0, points, {}};
  std::array<std::vector<double>, 5> vals;
  for (const auto& p : points) {
    const auto r = detail::static_residuals(detail::static_inputs(expand_geometry(S, p.x, p.y)));
    for (int k = 0; k < 5; ++k) vals[k].push_back(std::abs(r[k]));
  }
  for (int k = 0; k < 5; ++k) rep.entries.push_back(detail::summarize(static_identity_names()[k], vals[k]));
  return rep;
}

/// Residuals at every node with |y| <= Y/2.
inline ResidualReport residual_static(const DiscreteGraph& S) {
  const FermiChart& ch = S.chart;
  const NodalGeometry G = nodal_geometry(S);
  const auto theta = G.field(&GraphFields<double>::theta);
  const auto H = G.field(&GraphFields<double>::H);
  const auto eta = G.field(&GraphFields<double>::eta);
  ResidualReport rep{"static", ch.hx(), {}, {}};
  std::array<std::vector<double>, 5> vals;
  for (int j = 0; j < ch.Ny; ++j) {
    if (std::abs(ch.y(j)) > 0.5 * ch.Y) continue;
    for (int i = 0; i < ch.Nx; ++i) {
      const std::size_t k = ch.index(i, j);
      const NodeDerivs dT = node_derivs(ch, theta, i, j, S.stencil);
      const NodeDerivs dH = node_derivs(ch, H, i, j, S.stencil);
      const detail::StaticInputs in{G.d[k],
                                    G.f[k],
                                    dT.fx,
                                    dT.fy,
                                    dH.fx,
                                    dH.fy,
                                    surface_laplacian(G, S.u, i, j),
                                    surface_laplacian(G, theta, i, j),
                                    surface_laplacian(G, eta, i, j)};
      const auto r = detail::static_residuals(in);
      for (int m = 0; m < 5; ++m) vals[m].push_back(std::abs(r[m]));
      rep.points.push_back({ch.x(i), ch.y(j)});
    }
  }
  for (int m = 0; m < 5; ++m) rep.entries.push_back(detail::summarize(static_identity_names()[m], vals[m]));
  return rep;
}

/// Least-squares slope of log(residual) against log(h).
inline ConvergenceEstimate convergence_order(std::string identity,
                                             std::vector<std::pair<double, double>> levels) {
  if (levels.size() < 3) throw std::invalid_argument("convergence_order: need at least 3 grid levels");
  ConvergenceEstimate est{std::move(identity), std::move(levels), std::numeric_limits<double>::quiet_NaN(), false};
  bool all_floor = true;
  for (const auto& [h, r] : est.levels) {
    if (!(h > 0.0)) throw std::invalid_argument("convergence_order: grid spacing must be > 0");
    all_floor = all_floor && r <= kResidualFloor;
  }
  if (all_floor) {
    est.at_floor = true;
    return est;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(est.levels.size());
  for (const auto& [h, r] : est.levels) {
    const double lx = std::log(h), ly = std::log(std::max(r, 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  est.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return est;
}

/// Order estimates for every static identity over grids N x N/2.
inline std::vector<ConvergenceEstimate> static_convergence(const AnalyticGraph& S, double L, double Y,
                                                           const std::vector<int>& grids,
                                                           Stencil stencil = Stencil::centered) {
  std::array<std::vector<std::pair<double, double>>, 5> levels;
  for (int N : grids) {
    const FermiChart ch{L, Y, N, N / 2};
    const ResidualReport rep = residual_static(discretize(S, ch, stencil));
    for (int k = 0; k < 5; ++k) levels[k].push_back({ch.hx(), rep.entries[k].max_abs});
  }
  std::vector<ConvergenceEstimate> out;
  for (int k = 0; k < 5; ++k) out.push_back(convergence_order(static_identity_names()[k], levels[k]));
  return out;
}

// ---------------------------------------------------------------------------
// Evolution identities

/// Difference quotients (Q(S_eps) at the moved point - Q(S) at the point) / eps.
struct MaterialRates {
  double theta, alpha, H, A2, u;
};

inline MaterialRates material_rates(const AnalyticGraph& S, const AnalyticLocal& loc, double eps) {
  const auto& F = loc.f;
  const double H = F.H.value();
  const double bx = loc.x - eps * H * F.nu_x.value();
  const double by = loc.y - eps * H * F.nu_y.value();
  const AnalyticLocal moved = expand_geometry(normal_push(S, eps), bx, by);
  const auto& M = moved.f;
  const double th0 = F.theta.value(), th1 = M.theta.value();
  return {(th1 - th0) / eps,
          (th1 * th1 - th0 * th0) / eps,
          (M.H.value() - H) / eps,
          (M.A2.value() - F.A2.value()) / eps,
          (moved.d.u.value() - loc.d.u.value()) / eps};
}

namespace detail {

/// The seven dynamic residuals given (extrapolated) material rates.
inline std::array<double, 7> dynamic_residuals(const AnalyticLocal& loc, const MaterialRates& dt) {
  const auto& F = loc.f;
  const GraphFields<double> f = field_values(loc);
  const HeightDerivs<double> d = values(loc.d);
  const double th = f.theta, t = f.t, c = f.c, H = f.H, A2 = f.A2, al = th * th;
  const double n_gradH = pair_with_du(f, d, F.H.partial(1, 0), F.H.partial(0, 1));
  const double n_gradT = pair_with_du(f, d, F.theta.partial(1, 0), F.theta.partial(0, 1));
  const double Tx = F.theta.partial(1, 0), Ty = F.theta.partial(0, 1);
  const double grad_theta2 = f.gi11 * Tx * Tx + 2.0 * f.gi12 * Tx * Ty + f.gi22 * Ty * Ty;
  const double lap_theta = surface_laplacian(loc, F.theta);
  const double lap_alpha = surface_laplacian(loc, F.theta * F.theta);
  const double lap_H = surface_laplacian(loc, F.H);
  const double lap_A2 = surface_laplacian(loc, F.A2);
  const double lap_u = surface_laplacian(loc, loc.d.u);

  std::array<double, 7> r{};
  r[0] = dt.theta - (n_gradH - H * t * (1.0 - th * th));
  r[1] = dt.theta - lap_theta -
         (A2 * th - 2.0 * t * H + 2.0 * t * n_gradT + th * (1.0 - th * th) / (c * c) + 2.0 * t * t * th);
  r[2] = dt.alpha - lap_alpha -
         (2.0 * A2 * al - 4.0 * t * H * th + 4.0 * t * th * n_gradT + 2.0 * al * (1.0 - al) / (c * c) +
          4.0 * t * t * al - 2.0 * grad_theta2);
  r[3] = dt.H - lap_H - H * (A2 - 2.0);
  r[4] = dt.A2 - lap_A2 - (-2.0 * grad_A_squared(loc) + 2.0 * A2 * A2 + 4.0 * (A2 - H * H));
  r[5] = dt.u + H * th;
  r[6] = dt.u - lap_u + t * (1.0 + th * th);
  return r;
}

}  // namespace detail

inline ResidualReport residual_dynamic(const AnalyticGraph& S, const std::vector<ChartPoint>& points,
                                       const std::vector<double>& eps = default_eps_sequence()) {
  detail::require_halving(eps);
  ResidualReport rep{"dynamic", 0.0, points, {}};
  std::array<std::vector<double>, 7> extrap;
  std::array<std::vector<double>, 7> raw_max;
  for (auto& v : raw_max) v.assign(eps.size(), 0.0);
  for (const auto& p : points) {
    const AnalyticLocal loc = expand_geometry(S, p.x, p.y);
    std::vector<MaterialRates> rates;
    for (std::size_t k = 0; k < eps.size(); ++k) {
      rates.push_back(material_rates(S, loc, eps[k]));
      const auto r = detail::dynamic_residuals(loc, rates.back());
      for (int m = 0; m < 7; ++m) raw_max[m][k] = std::max(raw_max[m][k], std::abs(r[m]));
    }
    auto extrapolate = [&](double MaterialRates::*field) {
      std::vector<double> D;
      for (const auto& q : rates) D.push_back(q.*field);
      return detail::richardson(D);
    };
    const MaterialRates best{extrapolate(&MaterialRates::theta), extrapolate(&MaterialRates::alpha),
                             extrapolate(&MaterialRates::H), extrapolate(&MaterialRates::A2),
                             extrapolate(&MaterialRates::u)};
    const auto r = detail::dynamic_residuals(loc, best);
    for (int m = 0; m < 7; ++m) extrap[m].push_back(std::abs(r[m]));
  }
  for (int m = 0; m < 7; ++m) {
    rep.entries.push_back(detail::summarize(dynamic_identity_names()[m], extrap[m]));
    rep.entries.back().raw_max = raw_max[m];
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Variation of H along n and related identities

namespace detail {

struct NormalVariationTerms {
  double half_grad_nu_L;    // 1/2 (grad_nu L_n g)(e_i, e_i)
  double grad_e_L;          // (grad_{e_i} L_n g)(nu, e_i)
  double a_dot_L;           // a_ij L_n g(e_i, e_j)
  double nu_grad_nu_n;      // <nu, grad_nu n>
};

inline NormalVariationTerms normal_variation_terms(const GeomSample& s) {
  const AmbientPoint p{s.u, s.x, s.y};
  const auto D = lie_derivative_ng_gradient(p);
  const SymTensor2 L = lie_derivative_ng(p);
  const double det = s.g.det();
  const double gi[2][2] = {{s.g.yy / det, -s.g.xy / det}, {-s.g.xy / det, s.g.xx / det}};
  const double a[2][2] = {{s.a.xx, s.a.xy}, {s.a.xy, s.a.yy}};
  const std::array<Vec3, 2> Fr{s.Fx, s.Fy};
  auto T = [](const Mat3& M, const Vec3& X, const Vec3& Y) {
    double v = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) v += X[i] * M[i][j] * Y[j];
    return v;
  };
  auto grad_along = [&](const Vec3& X) {  // (grad_X L)
    Mat3 M{};
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) M[i][j] += X[k] * D[k][i][j];
    return M;
  };
  const Mat3 gnu = grad_along(s.nu);
  NormalVariationTerms out{0.0, 0.0, 0.0, 0.0};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      out.half_grad_nu_L += 0.5 * gi[i][j] * T(gnu, Fr[i], Fr[j]);
      out.grad_e_L += gi[i][j] * T(grad_along(Fr[i]), s.nu, Fr[j]);
      double a_up = 0.0;  // a^ij
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) a_up += gi[i][k] * a[k][l] * gi[l][j];
      out.a_dot_L += a_up * T(L, Fr[i], Fr[j]);
    }
  out.nu_grad_nu_n = inner(p, s.nu, nabla_n(p, s.nu));
  return out;
}

}  // namespace detail

/// Closed form of the variation of H under the deformation field n.
inline double n_of_H_closed_form(const GeomSample& s) {
  const auto T = detail::normal_variation_terms(s);
  return T.half_grad_nu_L - T.grad_e_L - T.a_dot_L + s.H * T.nu_grad_nu_n;
}

/// (H of the graph u + eps - H of u) / eps at a fixed base point.
inline double n_of_H_difference(const AnalyticGraph& S, double x, double y, double eps) {
  const AnalyticGraph lifted([S, eps](double px, double py) { return S.expand(px, py) + eps; }, S.degree());
  return (sample_geometry(lifted, x, y).H - sample_geometry(S, x, y).H) / eps;
}

inline ResidualReport residual_normal_variation(const AnalyticGraph& S, const std::vector<ChartPoint>& points,
                                        const std::vector<double>& eps = default_eps_sequence()) {
  detail::require_halving(eps);
  ResidualReport rep{"normal_variation", 0.0, points, {}};
  std::array<std::vector<double>, 3> vals;
  std::vector<double> raw_nH(eps.size(), 0.0), raw_tr(eps.size(), 0.0);
  for (const auto& p : points) {
    const GeomSample s = sample_geometry(S, p.x, p.y);
    const double closed = n_of_H_closed_form(s);
    std::vector<double> D;
    for (std::size_t k = 0; k < eps.size(); ++k) {
      D.push_back(n_of_H_difference(S, p.x, p.y, eps[k]));
      raw_nH[k] = std::max(raw_nH[k], std::abs(D.back() - closed));
    }
    vals[0].push_back(std::abs(detail::richardson(D) - closed));

    // Two stated forms of (d/dt - Laplacian) Theta against the expanded one.
    const AnalyticLocal loc = expand_geometry(S, p.x, p.y);
    const GraphFields<double> f = detail::field_values(loc);
    const auto T = detail::normal_variation_terms(s);
    const double form_n = (s.A2 - 2.0) * s.theta + closed - s.H * T.nu_grad_nu_n;
    const double form_L = (s.A2 - 2.0) * s.theta + T.half_grad_nu_L - T.grad_e_L - T.a_dot_L;
    const double n_gradT = detail::pair_with_du(f, detail::values(loc.d), loc.f.theta.partial(1, 0),
                                                loc.f.theta.partial(0, 1));
    const double t = f.t, th = f.theta;
    const double expanded = s.A2 * th - 2.0 * t * s.H + 2.0 * t * n_gradT +
                            th * (1.0 - th * th) / (f.c * f.c) + 2.0 * t * t * th;
    vals[1].push_back(std::max(std::abs(form_n - form_L), std::abs(form_L - expanded)));

    // Covariant rate of n along the motion -H nu, by parallel transport back.
    const AmbientPoint q{s.u, s.x, s.y};
    const Vec3 expected = [&] {
      Vec3 v = nabla_n(q, s.nu);
      for (double& c : v) c *= -s.H;
      return v;
    }();
    std::array<std::vector<double>, 3> Dn;
    for (std::size_t k = 0; k < eps.size(); ++k) {
      const Vec3 vel{-eps[k] * s.H * s.nu[0], -eps[k] * s.H * s.nu[1], -eps[k] * s.H * s.nu[2]};
      const TransportState fwd = geodesic_transport(q, vel, {0.0, 0.0, 0.0});
      const Vec3 back_vel{-fwd.velocity[0], -fwd.velocity[1], -fwd.velocity[2]};
      const TransportState back = geodesic_transport(fwd.p, back_vel, {1.0, 0.0, 0.0});
      Vec3 rate{};
      for (int c = 0; c < 3; ++c) {
        rate[c] = (back.carried[c] - (c == 0 ? 1.0 : 0.0)) / eps[k];
        Dn[c].push_back(rate[c]);
      }
      const Vec3 diff{rate[0] - expected[0], rate[1] - expected[1], rate[2] - expected[2]};
      raw_tr[k] = std::max(raw_tr[k], ambient_norm(q, diff));
    }
    const Vec3 diff{detail::richardson(Dn[0]) - expected[0], detail::richardson(Dn[1]) - expected[1],
                    detail::richardson(Dn[2]) - expected[2]};
    vals[2].push_back(ambient_norm(q, diff));
  }
  for (int m = 0; m < 3; ++m) rep.entries.push_back(detail::summarize(normal_variation_names()[m], vals[m]));
  rep.entries[0].raw_max = raw_nH;
  rep.entries[2].raw_max = raw_tr;
  return rep;
}

}  // namespace fmcf

#endif  // FMCF_IDENTITY_LAB_HPP
