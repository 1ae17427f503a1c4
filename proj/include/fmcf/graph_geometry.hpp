/// \file graph_geometry.hpp
/// \brief Pointwise geometry of a geodesic graph r = u(x, y) over the Fermi
///        chart, for analytic height functions (expanded as jets, so every
///        derivative is exact) and for discrete height fields on the grid.
///
/// Conventions: the unit normal nu points upward (Theta = <nu, n> > 0) and
/// a_ij = <grad_{e_i} nu, e_j>, so the level set r = c has H = 2 tanh(c).
/// With B_ij the coordinate Hessian of u corrected by Christoffel terms,
/// a_ij = -Theta B_ij and the graph velocity is u_t = -H / Theta = g^ij B_ij.

#ifndef FMCF_GRAPH_GEOMETRY_HPP
#define FMCF_GRAPH_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ambient.hpp"
#include "errors.hpp"
#include "hyp_base.hpp"
#include "jet.hpp"

namespace fmcf {

using Jet = Jet2<6>;

/// cosh, sinh and tanh of the base coordinate y.
template <class T>
struct BaseTrig {
  T C, S, tau;
};

inline BaseTrig<double> base_trig(double y) { return {std::cosh(y), std::sinh(y), std::tanh(y)}; }
inline BaseTrig<Jet> base_trig(const Jet& y) {
  Jet C = cosh(y), S = sinh(y);
  return {C, S, S / C};
}

namespace detail {
inline void hyperbolic_pair(double u, double& c, double& s) {
  const double em1 = std::expm1(u);
  const double inv = 1.0 / (1.0 + em1);
  c = 0.5 * (1.0 + em1 + inv);
  s = 0.5 * em1 * (1.0 + inv);
}
inline void hyperbolic_pair(const Jet& u, Jet& c, Jet& s) {
  c = cosh(u);
  s = sinh(u);
}
}  // namespace detail

/// Height and its first and second coordinate partials at a point.
template <class T>
struct HeightDerivs {
  T u, ux, uy, uxx, uxy, uyy;
};

template <class T>
struct GraphFields {
  T c, s, t;  // cosh, sinh, tanh of u
  T g11, g12, g22, det;
  T gi11, gi12, gi22;
  T W, theta, eta;
  T nu_r, nu_x, nu_y;
  T B11, B12, B22;
  T a11, a12, a22;
  T H, A2;
};

template <class T>
GraphFields<T> graph_fields(const HeightDerivs<T>& d, const BaseTrig<T>& b) {
  using std::sqrt;
  GraphFields<T> f;
  detail::hyperbolic_pair(d.u, f.c, f.s);
  f.t = f.s / f.c;
  const T c2 = f.c * f.c;
  const T c2C2 = c2 * (b.C * b.C);
  f.g11 = d.ux * d.ux + c2C2;
  f.g12 = d.ux * d.uy;
  f.g22 = d.uy * d.uy + c2;
  const T W2 = 1.0 + d.ux * d.ux / c2C2 + d.uy * d.uy / c2;
  f.det = c2 * c2C2 * W2;
  f.gi11 = f.g22 / f.det;
  f.gi12 = -f.g12 / f.det;
  f.gi22 = f.g11 / f.det;
  f.W = sqrt(W2);
  f.theta = 1.0 / f.W;
  f.eta = f.c * f.theta;
  f.nu_r = f.theta;
  f.nu_x = -d.ux * f.theta / c2C2;
  f.nu_y = -d.uy * f.theta / c2;

  const T cs = f.c * f.s;
  const T t2 = 2.0 * f.t;
  f.B11 = d.uxx - cs * (b.C * b.C) - t2 * d.ux * d.ux + b.C * b.S * d.uy;
  f.B12 = d.uxy - t2 * d.ux * d.uy - b.tau * d.ux;
  f.B22 = d.uyy - cs - t2 * d.uy * d.uy;
  f.a11 = -f.theta * f.B11;
  f.a12 = -f.theta * f.B12;
  f.a22 = -f.theta * f.B22;

  f.H = f.gi11 * f.a11 + 2.0 * f.gi12 * f.a12 + f.gi22 * f.a22;
  const T m11 = f.gi11 * f.a11 + f.gi12 * f.a12;
  const T m12 = f.gi11 * f.a12 + f.gi12 * f.a22;
  const T m21 = f.gi12 * f.a11 + f.gi22 * f.a12;
  const T m22 = f.gi12 * f.a12 + f.gi22 * f.a22;
  f.A2 = m11 * m11 + 2.0 * m12 * m21 + m22 * m22;
  return f;
}

/// Principal curvatures with g-orthonormal principal directions (coordinate
/// components).  e1 is the direction with the smaller |<e, n>| = |du(e)|.
struct PrincipalFrame {
  double a = 0.0, b = 0.0;
  std::array<double, 2> e1{}, e2{};
};

inline PrincipalFrame principal_frame(const GraphFields<double>& f, double ux, double uy) {
  const double half = 0.5 * f.H;
  const double deta = f.a11 * f.a22 - f.a12 * f.a12;
  const double disc = std::sqrt(std::max(0.0, half * half - deta / f.det));
  const double kp = half + disc, km = half - disc;

  const std::array<double, 2> r1{f.a11 - kp * f.g11, f.a12 - kp * f.g12};
  const std::array<double, 2> r2{f.a12 - kp * f.g12, f.a22 - kp * f.g22};
  const double n1 = std::hypot(r1[0], r1[1]), n2 = std::hypot(r2[0], r2[1]);
  const double scale = std::abs(f.a11) + std::abs(f.a12) + std::abs(f.a22) + 1e-300;
  std::array<double, 2> v;
  if (std::max(n1, n2) > 1e-12 * scale) {
    const auto& r = n1 >= n2 ? r1 : r2;
    v = {-r[1], r[0]};
  } else if (std::hypot(ux, uy) > 0.0) {
    v = {-uy, ux};  // umbilic: pick the level direction of u
  } else {
    v = {1.0, 0.0};
  }
  const double len = std::sqrt(f.g11 * v[0] * v[0] + 2.0 * f.g12 * v[0] * v[1] + f.g22 * v[1] * v[1]);
  PrincipalFrame pf;
  pf.e1 = {v[0] / len, v[1] / len};
  const double sd = std::sqrt(f.det);
  const double w1 = f.g11 * pf.e1[0] + f.g12 * pf.e1[1];
  const double w2 = f.g12 * pf.e1[0] + f.g22 * pf.e1[1];
  pf.e2 = {w2 / sd, -w1 / sd};
  pf.a = kp;
  pf.b = km;
  const double n_e1 = std::abs(ux * pf.e1[0] + uy * pf.e1[1]);
  const double n_e2 = std::abs(ux * pf.e2[0] + uy * pf.e2[1]);
  if (n_e2 < n_e1) {
    std::swap(pf.e1, pf.e2);
    std::swap(pf.a, pf.b);
  }
  return pf;
}

/// All pointwise quantities of a graph surface at one chart point.
struct GeomSample {
  double x = 0.0, y = 0.0;
  double u = 0.0, ux = 0.0, uy = 0.0;
  Sym2 g;             // induced metric
  Vec3 Fx{}, Fy{};    // tangent frame in ambient (r, x, y) components
  Vec3 nu{};          // unit normal
  double theta = 1.0;
  Sym2 a;             // second fundamental form
  double H = 0.0, A2 = 0.0, eta = 1.0;
  std::array<double, 2> grad_u{};  // contravariant g^ij u_j
  PrincipalFrame principal;
};

inline GeomSample make_sample(double x, double y, const HeightDerivs<double>& d) {
  const GraphFields<double> f = graph_fields(d, base_trig(y));
  if (!(f.theta > 0.0) || !std::isfinite(f.H))
    throw GeometryError("graph property lost here", x, y, f.theta);
  GeomSample s;
  s.x = x;
  s.y = y;
  s.u = d.u;
  s.ux = d.ux;
  s.uy = d.uy;
  s.g = {f.g11, f.g12, f.g22};
  s.Fx = {d.ux, 1.0, 0.0};
  s.Fy = {d.uy, 0.0, 1.0};
  s.nu = {f.nu_r, f.nu_x, f.nu_y};
  s.theta = f.theta;
  s.a = {f.a11, f.a12, f.a22};
  s.H = f.H;
  s.A2 = f.A2;
  s.eta = f.eta;
  s.grad_u = {f.gi11 * d.ux + f.gi12 * d.uy, f.gi12 * d.ux + f.gi22 * d.uy};
  s.principal = principal_frame(f, d.ux, d.uy);
  return s;
}

/// Laplace-Beltrami operator g^ij (f_ij - gamma^k_ij f_k) from the metric, its
/// first partials and the partials of f.
inline double laplacian_core(const Sym2& g, const Sym2& gx, const Sym2& gy, double fx, double fy,
                             double fxx, double fxy, double fyy) {
  const double det = g.det();
  if (!(det > 1e-14)) throw std::domain_error("surface_laplacian: degenerate induced metric");
  const double i11 = g.yy / det, i12 = -g.xy / det, i22 = g.xx / det;
  // v_l = g^ij d_i g_jl - 1/2 g^ij d_l g_ij ; contracted Christoffels are g^kl v_l.
  const double trx = i11 * gx.xx + 2.0 * i12 * gx.xy + i22 * gx.yy;
  const double try_ = i11 * gy.xx + 2.0 * i12 * gy.xy + i22 * gy.yy;
  const double v1 = i11 * gx.xx + i12 * (gx.xy + gy.xx) + i22 * gy.xy - 0.5 * trx;
  const double v2 = i11 * gx.xy + i12 * (gx.yy + gy.xy) + i22 * gy.yy - 0.5 * try_;
  const double G1 = i11 * v1 + i12 * v2, G2 = i12 * v1 + i22 * v2;
  return i11 * fxx + 2.0 * i12 * fxy + i22 * fyy - G1 * fx - G2 * fy;
}

// ---------------------------------------------------------------------------
// Analytic surfaces

/// A height function given by its local Taylor expansion at any chart point.
/// expand(x, y) returns the jet of u in the local variables (x - x0, y - y0);
/// coefficients up to total degree degree() are exact.
class AnalyticGraph {
 public:
  using Expansion = std::function<Jet(double, double)>;
  /// u written with jet arithmetic in the global coordinates.
  using Profile = std::function<Jet(const Jet& x, const Jet& y)>;

  AnalyticGraph(Expansion e, int degree) : expand_(std::move(e)), degree_(degree) {
    if (degree_ < 2 || degree_ > Jet::kOrder)
      throw std::invalid_argument("AnalyticGraph: trusted degree must be in [2, 6]");
  }

  static AnalyticGraph from_profile(Profile f) {
    return {[f = std::move(f)](double x, double y) {
              return f(Jet::variable(x, 0), Jet::variable(y, 1));
            },
            Jet::kOrder};
  }

  Jet expand(double x, double y) const { return expand_(x, y); }
  double operator()(double x, double y) const { return expand_(x, y).value(); }
  int degree() const { return degree_; }

 private:
  Expansion expand_;
  int degree_;
};

inline AnalyticGraph analytic_constant(double c) {
  return {[c](double, double) { return Jet(c); }, Jet::kOrder};
}

/// amplitude * sin(2 pi x / L) * cos(pi y / (2 Y)).
inline AnalyticGraph analytic_sine(double L, double Y, double amplitude) {
  return AnalyticGraph::from_profile([=](const Jet& x, const Jet& y) {
    return amplitude * sin((2.0 * std::numbers::pi / L) * x) * cos((std::numbers::pi / (2.0 * Y)) * y);
  });
}

/// Jets of u, its partials and every derived field around one point.
struct AnalyticLocal {
  double x = 0.0, y = 0.0;
  int degree = 0;  // trusted degree of u
  HeightDerivs<Jet> d;
  BaseTrig<Jet> base;
  GraphFields<Jet> f;
};

inline AnalyticLocal expand_geometry(const AnalyticGraph& S, double x, double y) {
  AnalyticLocal loc;
  loc.x = x;
  loc.y = y;
  loc.degree = S.degree();
  const Jet u = S.expand(x, y);
  const Jet ux = d_dx(u), uy = d_dy(u);
  loc.d = {u, ux, uy, d_dx(ux), d_dy(ux), d_dy(uy)};
  loc.base = base_trig(Jet::variable(y, 1));
  loc.f = graph_fields(loc.d, loc.base);
  return loc;
}

inline GeomSample sample_geometry(const AnalyticGraph& S, double x, double y) {
  const Jet u = S.expand(x, y);
  const HeightDerivs<double> d{u.partial(0, 0), u.partial(1, 0), u.partial(0, 1),
                               u.partial(2, 0), u.partial(1, 1), u.partial(0, 2)};
  return make_sample(x, y, d);
}

/// Laplacian of a scalar jet f at the base point of `loc`.
inline double surface_laplacian(const AnalyticLocal& loc, const Jet& f) {
  const auto& F = loc.f;
  const Sym2 g{F.g11.value(), F.g12.value(), F.g22.value()};
  const Sym2 gx{F.g11(1, 0), F.g12(1, 0), F.g22(1, 0)};
  const Sym2 gy{F.g11(0, 1), F.g12(0, 1), F.g22(0, 1)};
  return laplacian_core(g, gx, gy, f.partial(1, 0), f.partial(0, 1), f.partial(2, 0),
                        f.partial(1, 1), f.partial(0, 2));
}

inline double surface_laplacian(const AnalyticGraph& S,
                                const std::function<Jet(const AnalyticLocal&)>& f, double x,
                                double y) {
  const AnalyticLocal loc = expand_geometry(S, x, y);
  return surface_laplacian(loc, f(loc));
}

/// Moves every point of S by -eps H nu and re-expresses the result as a graph.
/// The returned expansion at b solves P(s) = b by Newton iteration, where
/// P(s) is the base projection of the moved point over s, then composes the
/// moved height with the local inverse of P.  Two degrees of the expansion are
/// consumed by H.
inline AnalyticGraph normal_push(const AnalyticGraph& S, double eps, double min_theta = 0.05) {
  if (eps == 0.0) return S;
  if (S.degree() < 4) throw std::invalid_argument("normal_push: surface lacks derivative budget");
  auto expansion = [S, eps, min_theta](double bx, double by) {
    double sx = bx, sy = by;
    constexpr int kMaxIter = 50;
    for (int it = 0; it <= kMaxIter; ++it) {
      const AnalyticLocal loc = expand_geometry(S, sx, sy);
      if (!(loc.f.theta.value() > min_theta))
        throw GeometryError("normal_push: surface too steep to push", sx, sy, loc.f.theta.value());
      const Jet Px = Jet::variable(sx, 0) - eps * loc.f.H * loc.f.nu_x;
      const Jet Py = Jet::variable(sy, 1) - eps * loc.f.H * loc.f.nu_y;
      const double rx = Px.value() - bx, ry = Py.value() - by;
      const double j11 = Px(1, 0), j12 = Px(0, 1), j21 = Py(1, 0), j22 = Py(0, 1);
      const double det = j11 * j22 - j12 * j21;
      if (!(det > 0.0))
        throw GeometryError("normal_push: graph property lost during push", sx, sy, det);
      if (std::hypot(rx, ry) <= 1e-15 * (1.0 + std::hypot(bx, by))) {
        const Jet R = loc.d.u - eps * loc.f.H * loc.f.nu_r;
        const auto d = inverse_map(Px, Py);
        return compose(R, d[0], d[1]);
      }
      if (it == kMaxIter) break;
      sx -= (j22 * rx - j12 * ry) / det;
      sy -= (-j21 * rx + j11 * ry) / det;
    }
    throw GeometryError("normal_push: re-graphing Newton iteration did not converge", bx, by, eps);
  };
  return {expansion, S.degree() - 2};
}

// ---------------------------------------------------------------------------
// Discrete surfaces

enum class Stencil { centered, forward };

/// Height field on the Fermi-chart grid, periodic in x and evenly reflected
/// across y = +-Y.
struct DiscreteGraph {
  FermiChart chart;
  std::vector<double> u;
  Stencil stencil = Stencil::centered;
};

inline DiscreteGraph discretize(const std::function<double(double, double)>& f,
                                const FermiChart& chart, Stencil stencil = Stencil::centered) {
  chart.validate();
  DiscreteGraph S{chart, std::vector<double>(chart.nodes()), stencil};
  for (int j = 0; j < chart.Ny; ++j)
    for (int i = 0; i < chart.Nx; ++i) S.u[chart.index(i, j)] = f(chart.x(i), chart.y(j));
  return S;
}

inline DiscreteGraph discretize(const AnalyticGraph& S, const FermiChart& chart,
                                Stencil stencil = Stencil::centered) {
  return discretize([&S](double x, double y) { return S(x, y); }, chart, stencil);
}

struct NodeDerivs {
  double f, fx, fy, fxx, fxy, fyy;
};

/// Finite-difference partials of a nodal field at node (i, j).
inline NodeDerivs node_derivs(const FermiChart& ch, const std::vector<double>& f, int i, int j,
                              Stencil stencil = Stencil::centered) {
  const int ip = i + 1 == ch.Nx ? 0 : i + 1;
  const int im = i == 0 ? ch.Nx - 1 : i - 1;
  const int jp = j + 1 == ch.Ny ? j : j + 1;
  const int jm = j == 0 ? 0 : j - 1;
  auto F = [&](int a, int b) { return f[ch.index(a, b)]; };
  const double hx = ch.hx(), hy = ch.hy();
  const double c = F(i, j);
  NodeDerivs d;
  d.f = c;
  if (stencil == Stencil::centered) {
    d.fx = (F(ip, j) - F(im, j)) / (2.0 * hx);
    d.fy = (F(i, jp) - F(i, jm)) / (2.0 * hy);
  } else {
    d.fx = (F(ip, j) - c) / hx;
    d.fy = (F(i, jp) - c) / hy;
  }
  d.fxx = (F(ip, j) - 2.0 * c + F(im, j)) / (hx * hx);
  d.fyy = (F(i, jp) - 2.0 * c + F(i, jm)) / (hy * hy);
  d.fxy = (F(ip, jp) - F(ip, jm) - F(im, jp) + F(im, jm)) / (4.0 * hx * hy);
  return d;
}

inline HeightDerivs<double> height_derivs(const DiscreteGraph& S, int i, int j) {
  const NodeDerivs d = node_derivs(S.chart, S.u, i, j, S.stencil);
  return {d.f, d.fx, d.fy, d.fxx, d.fxy, d.fyy};
}

inline GeomSample sample_geometry(const DiscreteGraph& S, int i, int j) {
  return make_sample(S.chart.x(i), S.chart.y(j), height_derivs(S, i, j));
}

/// Derived fields at every node of a discrete surface.
struct NodalGeometry {
  FermiChart chart;
  Stencil stencil = Stencil::centered;
  std::vector<HeightDerivs<double>> d;
  std::vector<GraphFields<double>> f;

  /// One derived field as a nodal array, e.g. field(&GraphFields<double>::theta).
  std::vector<double> field(double GraphFields<double>::*member) const {
    std::vector<double> out(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) out[k] = f[k].*member;
    return out;
  }
};

inline NodalGeometry nodal_geometry(const DiscreteGraph& S) {
  const FermiChart& ch = S.chart;
  NodalGeometry G{ch, S.stencil, std::vector<HeightDerivs<double>>(ch.nodes()),
                  std::vector<GraphFields<double>>(ch.nodes())};
  for (int j = 0; j < ch.Ny; ++j) {
    const BaseTrig<double> b = base_trig(ch.y(j));
    for (int i = 0; i < ch.Nx; ++i) {
      const std::size_t k = ch.index(i, j);
      G.d[k] = height_derivs(S, i, j);
      G.f[k] = graph_fields(G.d[k], b);
      if (!(G.f[k].theta > 0.0) || !std::isfinite(G.f[k].H))
        throw GeometryError("graph property lost here", ch.x(i), ch.y(j), G.f[k].theta);
    }
  }
  return G;
}

inline double surface_laplacian(const NodalGeometry& G, const std::vector<double>& f, int i,
                                int j) {
  using M = double GraphFields<double>::*;
  auto metric_derivs = [&](M member) {
    const int ip = i + 1 == G.chart.Nx ? 0 : i + 1;
    const int im = i == 0 ? G.chart.Nx - 1 : i - 1;
    const int jp = j + 1 == G.chart.Ny ? j : j + 1;
    const int jm = j == 0 ? 0 : j - 1;
    auto at = [&](int a, int b) { return G.f[G.chart.index(a, b)].*member; };
    return std::pair{(at(ip, j) - at(im, j)) / (2.0 * G.chart.hx()),
                     (at(i, jp) - at(i, jm)) / (2.0 * G.chart.hy())};
  };
  const auto [g11x, g11y] = metric_derivs(&GraphFields<double>::g11);
  const auto [g12x, g12y] = metric_derivs(&GraphFields<double>::g12);
  const auto [g22x, g22y] = metric_derivs(&GraphFields<double>::g22);
  const auto& F = G.f[G.chart.index(i, j)];
  const NodeDerivs d = node_derivs(G.chart, f, i, j, G.stencil);
  return laplacian_core({F.g11, F.g12, F.g22}, {g11x, g12x, g22x}, {g11y, g12y, g22y}, d.fx,
                        d.fy, d.fxx, d.fxy, d.fyy);
}

inline double surface_laplacian(const DiscreteGraph& S, const std::vector<double>& f, int i,
                                int j) {
  if (f.size() != S.chart.nodes())
    throw std::invalid_argument("surface_laplacian: field does not match the grid");
  return surface_laplacian(nodal_geometry(S), f, i, j);
}

/// Cubic (4 x 4 Lagrange) interpolation of a nodal field at an arbitrary
/// chart point, periodic in x and reflected in y.
inline double interpolate(const FermiChart& ch, const std::vector<double>& f, double x, double y) {
  auto weights = [](double t) {
    return std::array<double, 4>{-t * (t - 1.0) * (t - 2.0) / 6.0,
                                 (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
                                 -(t + 1.0) * t * (t - 2.0) / 2.0,
                                 (t + 1.0) * t * (t - 1.0) / 6.0};
  };
  const double fx = x / ch.hx();
  const double fy = (y + ch.Y) / ch.hy() - 0.5;
  const double i0 = std::floor(fx), j0 = std::floor(fy);
  const auto wx = weights(fx - i0), wy = weights(fy - j0);
  auto wrap_i = [&](long i) {
    long m = i % ch.Nx;
    return static_cast<int>(m < 0 ? m + ch.Nx : m);
  };
  auto mirror_j = [&](long j) {
    const long period = 2L * ch.Ny;
    long m = j % period;
    if (m < 0) m += period;
    return static_cast<int>(m < ch.Ny ? m : period - 1 - m);
  };
  double out = 0.0;
  for (int b = 0; b < 4; ++b) {
    const int jj = mirror_j(static_cast<long>(j0) - 1 + b);
    double row = 0.0;
    for (int a = 0; a < 4; ++a) row += wx[a] * f[ch.index(wrap_i(static_cast<long>(i0) - 1 + a), jj)];
    out += wy[b] * row;
  }
  return out;
}

/// Discrete counterpart of normal_push: nodes are moved by -eps H nu and the
/// moved surface is resampled at the grid nodes through cubic interpolation.
inline DiscreteGraph normal_push(const DiscreteGraph& S, double eps, double min_theta = 0.05) {
  if (eps == 0.0) return S;
  const NodalGeometry G = nodal_geometry(S);
  const FermiChart& ch = S.chart;
  std::vector<double> dx(ch.nodes()), dy(ch.nodes()), lifted(ch.nodes());
  for (std::size_t k = 0; k < ch.nodes(); ++k) {
    const auto& F = G.f[k];
    if (!(F.theta > min_theta))
      throw GeometryError("normal_push: surface too steep to push", ch.x(static_cast<int>(k % ch.Nx)),
                          ch.y(static_cast<int>(k / ch.Nx)), F.theta);
    dx[k] = -eps * F.H * F.nu_x;
    dy[k] = -eps * F.H * F.nu_y;
    lifted[k] = S.u[k] - eps * F.H * F.nu_r;
  }
  DiscreteGraph out = S;
  for (int j = 0; j < ch.Ny; ++j)
    for (int i = 0; i < ch.Nx; ++i) {
      const double bx = ch.x(i), by = ch.y(j);
      double sx = bx, sy = by;
      for (int it = 0; it < 30; ++it) {
        const double nx = bx - interpolate(ch, dx, sx, sy);
        const double ny = by - interpolate(ch, dy, sx, sy);
        const bool done = std::abs(nx - sx) + std::abs(ny - sy) < 1e-15;
        sx = nx;
        sy = ny;
        if (done) break;
      }
      const double v = interpolate(ch, lifted, sx, sy);
      if (!std::isfinite(v)) throw GeometryError("normal_push: non-finite height", bx, by, v);
      out.u[ch.index(i, j)] = v;
    }
  return out;
}

}  // namespace fmcf

#endif  // FMCF_GRAPH_GEOMETRY_HPP
