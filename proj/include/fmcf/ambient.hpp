/// \file ambient.hpp
/// \brief The Fuchsian 3-manifold dr^2 + cosh^2(r) g0 over the Fermi chart, in
///        coordinates (r, x, y): metric, Christoffel symbols, the field
///        V = cosh(r) d/dr, the Lie derivative of the metric along n = d/dr and
///        finite-difference curvature oracles.

#ifndef FMCF_AMBIENT_HPP
#define FMCF_AMBIENT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "errors.hpp"

namespace fmcf {

struct AmbientPoint {
  double r = 0.0;
  double x = 0.0;
  double y = 0.0;
};

using Vec3 = std::array<double, 3>;
using TangentVector = Vec3;
using Mat3 = std::array<Vec3, 3>;
using SymTensor2 = Mat3;
/// Christoffel symbols G[k][i][j] = Gamma^k_ij, index 0 = r, 1 = x, 2 = y.
using Christoffel = std::array<Mat3, 3>;

namespace detail {
inline AmbientPoint shifted(const AmbientPoint& p, int axis, double h) {
  AmbientPoint q = p;
  (axis == 0 ? q.r : axis == 1 ? q.x : q.y) += h;
  return q;
}
}  // namespace detail

inline Mat3 ambient_metric(const AmbientPoint& p) {
  const double cr = std::cosh(p.r), cy = std::cosh(p.y);
  Mat3 g{};
  g[0][0] = 1.0;
  g[1][1] = cr * cr * cy * cy;
  g[2][2] = cr * cr;
  return g;
}

inline double inner(const AmbientPoint& p, const Vec3& a, const Vec3& b) {
  const Mat3 g = ambient_metric(p);
  return g[0][0] * a[0] * b[0] + g[1][1] * a[1] * b[1] + g[2][2] * a[2] * b[2];
}

inline double ambient_norm(const AmbientPoint& p, const Vec3& a) { return std::sqrt(inner(p, a, a)); }

inline Christoffel christoffel(const AmbientPoint& p) {
  const double cr = std::cosh(p.r), sr = std::sinh(p.r), tr = std::tanh(p.r);
  const double cy = std::cosh(p.y), sy = std::sinh(p.y), ty = std::tanh(p.y);
  Christoffel G{};
  G[0][1][1] = -cr * sr * cy * cy;
  G[0][2][2] = -cr * sr;
  G[1][0][1] = G[1][1][0] = tr;
  G[2][0][2] = G[2][2][0] = tr;
  G[1][1][2] = G[1][2][1] = ty;
  G[2][1][1] = -cy * sy;
  return G;
}

/// Christoffel symbols from centered differences of the metric components.
inline Christoffel christoffel_fd(const AmbientPoint& p, double h = 1e-4) {
  std::array<Mat3, 3> dg{};  // dg[l][i][j] = d_l g_ij
  for (int l = 0; l < 3; ++l) {
    const Mat3 gp = ambient_metric(detail::shifted(p, l, h));
    const Mat3 gm = ambient_metric(detail::shifted(p, l, -h));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) dg[l][i][j] = (gp[i][j] - gm[i][j]) / (2.0 * h);
  }
  const Mat3 g = ambient_metric(p);
  Christoffel G{};
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        G[k][i][j] = 0.5 / g[k][k] * (dg[i][j][k] + dg[j][i][k] - dg[k][i][j]);
  return G;
}

/// Covariant derivative of a vector field V along X, given V and its partials
/// dV[k][i] = d_i V^k at p.
inline Vec3 covariant_derivative(const AmbientPoint& p, const Vec3& X, const Vec3& V,
                                 const Mat3& dV) {
  const Christoffel G = christoffel(p);
  Vec3 out{};
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i) {
      out[k] += X[i] * dV[k][i];
      for (int j = 0; j < 3; ++j) out[k] += G[k][i][j] * X[i] * V[j];
    }
  return out;
}

inline TangentVector field_V(const AmbientPoint& p) { return {std::cosh(p.r), 0.0, 0.0}; }

/// |grad_X V - sinh(r) X| with grad_X V taken from the Christoffel symbols.
inline double killing_residual(const AmbientPoint& p, const Vec3& X) {
  Mat3 dV{};
  dV[0][0] = std::sinh(p.r);
  const Vec3 lhs = covariant_derivative(p, X, field_V(p), dV);
  const double s = std::sinh(p.r);
  const Vec3 diff{lhs[0] - s * X[0], lhs[1] - s * X[1], lhs[2] - s * X[2]};
  return ambient_norm(p, diff);
}

/// grad_X n for the unit field n = d/dr, returned in the closed form
/// tanh(r) (X - <X, n> n) after checking it against the Christoffel route.
inline TangentVector nabla_n(const AmbientPoint& p, const Vec3& X, double tol = 1e-8) {
  const Vec3 closed{0.0, std::tanh(p.r) * X[1], std::tanh(p.r) * X[2]};
  const Vec3 via_gamma = covariant_derivative(p, X, {1.0, 0.0, 0.0}, Mat3{});
  const Vec3 diff{closed[0] - via_gamma[0], closed[1] - via_gamma[1], closed[2] - via_gamma[2]};
  if (ambient_norm(p, diff) > tol)
    throw ConsistencyError("nabla_n: Christoffel and closed-form routes disagree");
  return closed;
}

struct LevelSetShape {
  double kappa;
  double H;
};

/// The equidistant surface r = const is umbilic; curvatures are taken with
/// respect to n = d/dr.
inline LevelSetShape levelset_shape(double r) { return {std::tanh(r), 2.0 * std::tanh(r)}; }

/// (L_n g)_ij = 2 tanh(r) (g - dr (x) dr)_ij, checked against
/// <grad_i n, e_j> + <e_i, grad_j n> from the Christoffel symbols.
inline SymTensor2 lie_derivative_ng(const AmbientPoint& p, double tol = 1e-8) {
  const Mat3 g = ambient_metric(p);
  const Christoffel G = christoffel(p);
  const double t2 = 2.0 * std::tanh(p.r);
  SymTensor2 closed{}, via_gamma{};
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      closed[i][j] = t2 * (g[i][j] - (i == 0 && j == 0 ? 1.0 : 0.0));
      for (int k = 0; k < 3; ++k) via_gamma[i][j] += g[j][k] * G[k][i][0] + g[i][k] * G[k][j][0];
      worst = std::max(worst, std::abs(closed[i][j] - via_gamma[i][j]));
    }
  if (worst > tol)
    throw ConsistencyError("lie_derivative_ng: Christoffel and closed-form routes disagree");
  return closed;
}

/// D[k][i][j] = (grad_k L_n g)_ij.  Computed from the coordinate partials of
/// the closed form and the Christoffel symbols, and cross-checked against the
/// constant-curvature expression
///   2 sech^2(r) dr_k P_ij - 2 tanh^2(r) (P_ki dr_j + dr_i P_kj),  P = g - dr (x) dr.
inline std::array<Mat3, 3> lie_derivative_ng_gradient(const AmbientPoint& p, double tol = 1e-8) {
  const double c2r = std::cosh(2.0 * p.r), s2r = std::sinh(2.0 * p.r);
  const double cy = std::cosh(p.y), sy = std::sinh(p.y);
  SymTensor2 L{};
  L[1][1] = s2r * cy * cy;
  L[2][2] = s2r;
  std::array<Mat3, 3> dL{};  // partials d_k L_ij
  dL[0][1][1] = 2.0 * c2r * cy * cy;
  dL[0][2][2] = 2.0 * c2r;
  dL[2][1][1] = s2r * 2.0 * cy * sy;

  const Christoffel G = christoffel(p);
  std::array<Mat3, 3> out{};
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double v = dL[k][i][j];
        for (int m = 0; m < 3; ++m) v -= G[m][k][i] * L[m][j] + G[m][k][j] * L[i][m];
        out[k][i][j] = v;
      }

  const Mat3 g = ambient_metric(p);
  const double tr = std::tanh(p.r), sech2 = 1.0 / (std::cosh(p.r) * std::cosh(p.r));
  double worst = 0.0;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        auto P = [&](int a, int b) { return g[a][b] - (a == 0 && b == 0 ? 1.0 : 0.0); };
        auto dr = [](int a) { return a == 0 ? 1.0 : 0.0; };
        const double closed =
            2.0 * sech2 * dr(k) * P(i, j) - 2.0 * tr * tr * (P(k, i) * dr(j) + dr(i) * P(k, j));
        worst = std::max(worst, std::abs(closed - out[k][i][j]));
      }
  if (worst > tol)
    throw ConsistencyError("lie_derivative_ng_gradient: coordinate and closed-form routes disagree");
  return out;
}

/// Riemann tensor R^a_{bcd} (R(X,Y)Z = grad_X grad_Y Z - grad_Y grad_X Z -
/// grad_[X,Y] Z, component R^a_{bcd} Z^b X^c Y^d) by centered differences of the
/// closed-form Christoffel symbols.
inline std::array<std::array<Mat3, 3>, 3> riemann_fd(const AmbientPoint& p, double h = 1e-4) {
  std::array<Christoffel, 3> dG{};  // dG[l] = d_l Gamma
  for (int l = 0; l < 3; ++l) {
    const Christoffel Gp = christoffel(detail::shifted(p, l, h));
    const Christoffel Gm = christoffel(detail::shifted(p, l, -h));
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) dG[l][a][b][c] = (Gp[a][b][c] - Gm[a][b][c]) / (2.0 * h);
  }
  const Christoffel G = christoffel(p);
  std::array<std::array<Mat3, 3>, 3> R{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) {
          double v = dG[c][a][d][b] - dG[d][a][c][b];
          for (int e = 0; e < 3; ++e) v += G[a][c][e] * G[e][d][b] - G[a][d][e] * G[e][c][b];
          R[a][b][c][d] = v;
        }
  return R;
}

/// Sectional curvature of span{X, Y} from the finite-difference Riemann tensor.
inline double sectional_curvature_fd(const AmbientPoint& p, const Vec3& X, const Vec3& Y,
                                     double h = 1e-4) {
  const auto R = riemann_fd(p, h);
  const Mat3 g = ambient_metric(p);
  // <R(X,Y)Y, X>
  double num = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) num += g[a][a] * X[a] * R[a][b][c][d] * Y[b] * X[c] * Y[d];
  const double xx = inner(p, X, X), yy = inner(p, Y, Y), xy = inner(p, X, Y);
  const double area2 = xx * yy - xy * xy;
  if (!(area2 > 0.0)) throw std::invalid_argument("sectional_curvature_fd: degenerate plane");
  return num / area2;
}

/// Ric(v, v) = R^a_{bad} v^b v^d from the finite-difference Riemann tensor.
inline double ricci_fd(const AmbientPoint& p, const Vec3& v, double h = 1e-4) {
  const auto R = riemann_fd(p, h);
  double out = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int d = 0; d < 3; ++d) out += R[a][b][a][d] * v[b] * v[d];
  return out;
}

/// Constant curvature -1 in three dimensions: Ric(nu, nu) = -2 for unit nu.
inline double ricci_nu_nu(const Vec3& nu, const AmbientPoint& p, double tol = 1e-10) {
  const double len = ambient_norm(p, nu);
  if (std::abs(len - 1.0) > tol) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "ricci_nu_nu: vector is not unit (|nu| = %.17g)", len);
    throw std::invalid_argument(buf);
  }
  return -2.0;
}

struct TransportState {
  AmbientPoint p;
  Vec3 velocity;
  Vec3 carried;
};

/// Follows the geodesic from p with initial velocity v for unit parameter time
/// and parallel-transports w along it (classic RK4).
inline TransportState geodesic_transport(const AmbientPoint& p, const Vec3& v, const Vec3& w,
                                         int substeps = 20) {
  using State = std::array<double, 9>;
  auto rhs = [](const State& s) {
    const AmbientPoint q{s[0], s[1], s[2]};
    const Christoffel G = christoffel(q);
    State d{};
    for (int k = 0; k < 3; ++k) {
      d[k] = s[3 + k];
      double acc = 0.0, tr = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          acc += G[k][i][j] * s[3 + i] * s[3 + j];
          tr += G[k][i][j] * s[3 + i] * s[6 + j];
        }
      d[3 + k] = -acc;
      d[6 + k] = -tr;
    }
    return d;
  };
  State s{p.r, p.x, p.y, v[0], v[1], v[2], w[0], w[1], w[2]};
  const double dt = 1.0 / substeps;
  for (int n = 0; n < substeps; ++n) {
    auto axpy = [](const State& a, const State& b, double f) {
      State r;
      for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + f * b[i];
      return r;
    };
    const State k1 = rhs(s);
    const State k2 = rhs(axpy(s, k1, dt / 2));
    const State k3 = rhs(axpy(s, k2, dt / 2));
    const State k4 = rhs(axpy(s, k3, dt));
    for (std::size_t i = 0; i < s.size(); ++i)
      s[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return {{s[0], s[1], s[2]}, {s[3], s[4], s[5]}, {s[6], s[7], s[8]}};
}

}  // namespace fmcf

#endif  // FMCF_AMBIENT_HPP
