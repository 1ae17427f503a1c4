/// \file comparison_ode.hpp
/// \brief Closed-form comparison solutions for the flow and RK4 integrations
///        of the ODEs they solve.
///
/// The equidistant surfaces r = R(t) move by dR/dt = -2 tanh(R), so
/// sinh(R) e^{2t} is conserved.  The angle bound phi(t) solves
/// dphi/dt = -4 (1 - phi) s^2 e^{-4t} / (1 + s^2 e^{-4t}), s = sinh(a0).

#ifndef FMCF_COMPARISON_ODE_HPP
#define FMCF_COMPARISON_ODE_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace fmcf {

struct CurveSample {
  double t;
  double value;
};
using SampledCurve = std::vector<CurveSample>;

namespace detail {
inline void require_time(double t, const char* who) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument(std::string(who) + ": t must be >= 0");
}

/// Classic RK4 for a scalar ODE y' = f(t, y) on [0, t_max]; the final step is
/// shortened to land on t_max exactly.
template <class F>
SampledCurve rk4(F f, double y0, double t_max, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk4: dt must be > 0");
  require_time(t_max, "rk4");
  SampledCurve out{{0.0, y0}};
  double t = 0.0, y = y0;
  const long steps = static_cast<long>(std::ceil(t_max / dt - 1e-9));
  for (long n = 0; n < steps; ++n) {
    const double h = std::min(dt, t_max - t);
    const double k1 = f(t, y);
    const double k2 = f(t + h / 2, y + h / 2 * k1);
    const double k3 = f(t + h / 2, y + h / 2 * k2);
    const double k4 = f(t + h, y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = (n + 1 == steps) ? t_max : t + h;
    out.push_back({t, y});
  }
  return out;
}
}  // namespace detail

/// R(t) = arcsinh(e^{-2t} sinh(a0)).
inline double umbilic_exact(double a0, double t) {
  detail::require_time(t, "umbilic_exact");
  return std::asinh(std::exp(-2.0 * t) * std::sinh(a0));
}

inline SampledCurve umbilic_integrate(double a0, double t_max, double dt = 1e-3) {
  return detail::rk4([](double, double R) { return -2.0 * std::tanh(R); }, a0, t_max, dt);
}

struct SqueezeBound {
  double lower;
  double upper;
};

/// Equidistant barriers enclosing a graph that starts between r = -a0 and r = a0.
inline SqueezeBound squeeze_bound(double a0, double t) {
  const double R = umbilic_exact(a0, t);
  return {-R, R};
}

/// tanh(a0): the smallest initial angle for which the angle estimate applies.
inline double angle_threshold(double a0) {
  if (!(a0 >= 0.0)) throw std::invalid_argument("angle_threshold: a0 must be >= 0");
  return std::tanh(a0);
}

/// Initial value of the angle bound, (eps + sinh^2 a0) / (1 + sinh^2 a0).
inline double angle_phi0(double a0, double eps) {
  const double s2 = std::sinh(a0) * std::sinh(a0);
  return (eps + s2) / (1.0 + s2);
}

/// The eps for which angle_phi0(a0, eps) equals phi0.
inline double angle_epsilon(double a0, double phi0) {
  const double s2 = std::sinh(a0) * std::sinh(a0);
  return phi0 * (1.0 + s2) - s2;
}

/// phi(t) = (eps + s^2 e^{-4t}) / (1 + s^2 e^{-4t}), a lower bound for min Theta^2.
inline double angle_lower_bound(double a0, double eps, double t) {
  detail::require_time(t, "angle_lower_bound");
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("angle_lower_bound: eps must lie in [0, 1]");
  const double q = std::sinh(a0) * std::sinh(a0) * std::exp(-4.0 * t);
  return (eps + q) / (1.0 + q);
}

inline SampledCurve angle_ode_integrate(double a0, double phi0, double t_max, double dt = 1e-3) {
  if (!(phi0 > 0.0 && phi0 <= 1.0)) throw std::invalid_argument("angle_ode_integrate: phi0 must lie in (0, 1]");
  const double s2 = std::sinh(a0) * std::sinh(a0);
  return detail::rk4(
      [s2](double t, double phi) {
        const double q = s2 * std::exp(-4.0 * t);
        return -4.0 * (1.0 - phi) * q / (1.0 + q);
      },
      phi0, t_max, dt);
}

struct BarrierCurve {
  double a0 = 1.0;
  double operator()(double t) const { return umbilic_exact(a0, t); }
};

struct AngleBoundCurve {
  double a0 = 1.0;
  double eps = 0.0;
  double operator()(double t) const { return angle_lower_bound(a0, eps, t); }
};

}  // namespace fmcf

#endif  // FMCF_COMPARISON_ODE_HPP
