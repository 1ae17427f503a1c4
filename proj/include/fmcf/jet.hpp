/// \file jet.hpp
/// \brief Truncated bivariate Taylor polynomials ("jets") with exact arithmetic
///        on the coefficients.
///
/// A Jet2<K> stores the Taylor coefficients c(p, q) of a smooth function of two
/// variables (s1, s2) around a base point, for all p + q <= K.  Every operation
/// is the exact truncation of the corresponding operation on power series, so
/// the coefficients of total degree <= d of a result depend only on the
/// coefficients of total degree <= d of the inputs.  Differentiation lowers the
/// number of trustworthy degrees by one; callers track that budget.

#ifndef FMCF_JET_HPP
#define FMCF_JET_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace fmcf {

namespace detail {
constexpr double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}
}  // namespace detail

template <int K>
class Jet2 {
  static_assert(K >= 1, "Jet2 needs at least first-order terms");

 public:
  static constexpr int kOrder = K;
  static constexpr int kDim = K + 1;

  constexpr Jet2() = default;
  // Implicit: a plain number is a constant jet.
  constexpr Jet2(double v) { c_[0] = v; }  // NOLINT(google-explicit-constructor)

  /// The coordinate function s_axis around base value v.
  static Jet2 variable(double v, int axis) {
    Jet2 j(v);
    if (axis == 0)
      j(1, 0) = 1.0;
    else
      j(0, 1) = 1.0;
    return j;
  }

  double operator()(int p, int q) const { return c_[p * kDim + q]; }
  double& operator()(int p, int q) { return c_[p * kDim + q]; }

  double value() const { return c_[0]; }

  /// d^{p+q} f / ds1^p ds2^q at the base point.
  double partial(int p, int q) const {
    return detail::factorial(p) * detail::factorial(q) * (*this)(p, q);
  }

  Jet2 operator-() const {
    Jet2 r;
    for (std::size_t k = 0; k < c_.size(); ++k) r.c_[k] = -c_[k];
    return r;
  }
  Jet2& operator+=(const Jet2& o) {
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet2& operator-=(const Jet2& o) {
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet2& operator+=(double v) {
    c_[0] += v;
    return *this;
  }
  Jet2& operator-=(double v) {
    c_[0] -= v;
    return *this;
  }
  Jet2& operator*=(double v) {
    for (auto& x : c_) x *= v;
    return *this;
  }
  Jet2& operator/=(double v) {
    for (auto& x : c_) x /= v;
    return *this;
  }
  Jet2& operator*=(const Jet2& o) {
    *this = *this * o;
    return *this;
  }

  friend Jet2 operator*(const Jet2& a, const Jet2& b) {
    Jet2 r;
    for (int p1 = 0; p1 <= K; ++p1) {
      for (int q1 = 0; q1 <= K - p1; ++q1) {
        const double av = a(p1, q1);
        if (av == 0.0) continue;
        for (int p2 = 0; p2 <= K - p1 - q1; ++p2) {
          for (int q2 = 0; q2 <= K - p1 - q1 - p2; ++q2) {
            r(p1 + p2, q1 + q2) += av * b(p2, q2);
          }
        }
      }
    }
    return r;
  }

 private:
  std::array<double, kDim * kDim> c_{};
};

template <int K>
Jet2<K> operator+(Jet2<K> a, const Jet2<K>& b) {
  return a += b;
}
template <int K>
Jet2<K> operator-(Jet2<K> a, const Jet2<K>& b) {
  return a -= b;
}
template <int K>
Jet2<K> operator+(Jet2<K> a, double b) {
  return a += b;
}
template <int K>
Jet2<K> operator+(double a, Jet2<K> b) {
  return b += a;
}
template <int K>
Jet2<K> operator-(Jet2<K> a, double b) {
  return a -= b;
}
template <int K>
Jet2<K> operator-(double a, const Jet2<K>& b) {
  Jet2<K> r = -b;
  return r += a;
}
template <int K>
Jet2<K> operator*(Jet2<K> a, double b) {
  return a *= b;
}
template <int K>
Jet2<K> operator*(double a, Jet2<K> b) {
  return b *= a;
}
template <int K>
Jet2<K> operator/(Jet2<K> a, double b) {
  return a /= b;
}

/// Evaluates sum_k coeffs[k] * (j - j.value())^k, i.e. composes j with a
/// univariate function whose scaled derivatives at j.value() are given.
template <int K>
Jet2<K> apply_series(const Jet2<K>& j, const std::array<double, K + 1>& coeffs) {
  Jet2<K> h = j;
  h(0, 0) = 0.0;
  Jet2<K> r(coeffs[K]);
  for (int k = K - 1; k >= 0; --k) {
    r = r * h;
    r(0, 0) += coeffs[k];
  }
  return r;
}

template <int K>
Jet2<K> reciprocal(const Jet2<K>& j) {
  const double a = j.value();
  if (a == 0.0) throw std::domain_error("reciprocal of a jet with zero value");
  std::array<double, K + 1> c{};
  double inv = 1.0 / a;
  double pw = inv;
  for (int k = 0; k <= K; ++k) {
    c[k] = (k % 2 == 0 ? pw : -pw);
    pw *= inv;
  }
  return apply_series(j, c);
}

template <int K>
Jet2<K> operator/(const Jet2<K>& a, const Jet2<K>& b) {
  return a * reciprocal(b);
}
template <int K>
Jet2<K> operator/(double a, const Jet2<K>& b) {
  return a * reciprocal(b);
}

template <int K>
Jet2<K> sqrt(const Jet2<K>& j) {
  const double a = j.value();
  if (!(a > 0.0)) throw std::domain_error("sqrt of a jet with non-positive value");
  // binom(1/2, k) a^{1/2 - k}
  std::array<double, K + 1> c{};
  double binom = 1.0;
  double pw = std::sqrt(a);
  for (int k = 0; k <= K; ++k) {
    c[k] = binom * pw;
    binom *= (0.5 - k) / (k + 1);
    pw /= a;
  }
  return apply_series(j, c);
}

template <int K>
Jet2<K> exp(const Jet2<K>& j) {
  std::array<double, K + 1> c{};
  const double e = std::exp(j.value());
  for (int k = 0; k <= K; ++k) c[k] = e / detail::factorial(k);
  return apply_series(j, c);
}

namespace detail {
// Scaled derivatives of a function whose derivatives cycle with period 2
// (cosh/sinh) or 4 (sin/cos).
template <int K>
std::array<double, K + 1> cyclic_series(const std::array<double, 4>& cycle, int period) {
  std::array<double, K + 1> c{};
  for (int k = 0; k <= K; ++k) c[k] = cycle[k % period] / factorial(k);
  return c;
}
}  // namespace detail

template <int K>
Jet2<K> cosh(const Jet2<K>& j) {
  const double a = j.value();
  return apply_series(j, detail::cyclic_series<K>({std::cosh(a), std::sinh(a), 0, 0}, 2));
}
template <int K>
Jet2<K> sinh(const Jet2<K>& j) {
  const double a = j.value();
  return apply_series(j, detail::cyclic_series<K>({std::sinh(a), std::cosh(a), 0, 0}, 2));
}
template <int K>
Jet2<K> sin(const Jet2<K>& j) {
  const double a = j.value();
  const double s = std::sin(a), c = std::cos(a);
  return apply_series(j, detail::cyclic_series<K>({s, c, -s, -c}, 4));
}
template <int K>
Jet2<K> cos(const Jet2<K>& j) {
  const double a = j.value();
  const double s = std::sin(a), c = std::cos(a);
  return apply_series(j, detail::cyclic_series<K>({c, -s, -c, s}, 4));
}
template <int K>
Jet2<K> tanh(const Jet2<K>& j) {
  return sinh(j) / cosh(j);
}

/// Partial derivative with respect to s1.  The top-degree coefficients of the
/// result are zero and must not be trusted.
template <int K>
Jet2<K> d_dx(const Jet2<K>& j) {
  Jet2<K> r;
  for (int p = 0; p < K; ++p)
    for (int q = 0; q + p < K; ++q) r(p, q) = (p + 1) * j(p + 1, q);
  return r;
}
template <int K>
Jet2<K> d_dy(const Jet2<K>& j) {
  Jet2<K> r;
  for (int p = 0; p < K; ++p)
    for (int q = 0; q + p < K; ++q) r(p, q) = (q + 1) * j(p, q + 1);
  return r;
}

/// Substitution f(s* + d(b)): f is a jet in s around s*, (d1, d2) are jets in
/// b whose constant terms are treated as zero.
template <int K>
Jet2<K> compose(const Jet2<K>& f, Jet2<K> d1, Jet2<K> d2) {
  d1(0, 0) = 0.0;
  d2(0, 0) = 0.0;
  Jet2<K> outer;
  for (int p = K; p >= 0; --p) {
    Jet2<K> inner(f(p, K - p));
    for (int q = K - p - 1; q >= 0; --q) {
      inner = inner * d2;
      inner(0, 0) += f(p, q);
    }
    outer = outer * d1 + inner;
  }
  return outer;
}

/// Local inverse of the map (P1, P2) around its base point: returns jets
/// (d1, d2) in b with P(s* + d(b)) = P(s*) + b through degree K.
template <int K>
std::array<Jet2<K>, 2> inverse_map(const Jet2<K>& p1, const Jet2<K>& p2) {
  const double j11 = p1(1, 0), j12 = p1(0, 1), j21 = p2(1, 0), j22 = p2(0, 1);
  const double det = j11 * j22 - j12 * j21;
  if (det == 0.0 || !std::isfinite(det))
    throw std::domain_error("inverse_map: singular Jacobian");
  const Jet2<K> b1 = Jet2<K>::variable(0.0, 0);
  const Jet2<K> b2 = Jet2<K>::variable(0.0, 1);
  auto solve = [&](const Jet2<K>& r1, const Jet2<K>& r2) {
    return std::array<Jet2<K>, 2>{(j22 * r1 - j12 * r2) / det,
                                  (-j21 * r1 + j11 * r2) / det};
  };
  auto d = solve(b1, b2);
  // Each sweep fixes one more degree.
  for (int it = 0; it < K; ++it) {
    Jet2<K> e1 = compose(p1, d[0], d[1]) - p1.value() - b1;
    Jet2<K> e2 = compose(p2, d[0], d[1]) - p2.value() - b2;
    auto corr = solve(e1, e2);
    d[0] -= corr[0];
    d[1] -= corr[1];
  }
  return d;
}

}  // namespace fmcf

#endif  // FMCF_JET_HPP
