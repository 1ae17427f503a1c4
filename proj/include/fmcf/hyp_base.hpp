/// \file hyp_base.hpp
/// \brief Geometry of the hyperbolic base surface: Poincare-disk arithmetic,
///        the regular-octagon genus-2 Fuchsian group, and the Fermi chart on
///        which the flow is discretized.

#ifndef FMCF_HYP_BASE_HPP
#define FMCF_HYP_BASE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace fmcf {

using Complex = std::complex<double>;

/// A point of the open unit disk (Poincare model of the hyperbolic plane).
struct DiskPoint {
  double x = 0.0;
  double y = 0.0;

  Complex z() const { return {x, y}; }
  static DiskPoint from(Complex z) { return {z.real(), z.imag()}; }
  double norm() const { return std::hypot(x, y); }
};

inline void require_in_disk(const DiskPoint& p, const char* who) {
  if (!(p.x * p.x + p.y * p.y < 1.0))
    throw std::domain_error(std::string(who) + ": point is not inside the open unit disk");
}

/// Hyperbolic distance (curvature -1) between two points of the disk.
inline double hyperbolic_distance(const DiskPoint& a, const DiskPoint& b) {
  require_in_disk(a, "hyperbolic_distance");
  require_in_disk(b, "hyperbolic_distance");
  const Complex za = a.z(), zb = b.z();
  const double ratio = std::abs(za - zb) / std::abs(1.0 - std::conj(za) * zb);
  return 2.0 * std::atanh(std::min(ratio, 1.0 - std::numeric_limits<double>::epsilon()));
}

/// Disk automorphism z -> (alpha z + beta) / (conj(beta) z + conj(alpha)),
/// normalized so that |alpha|^2 - |beta|^2 = 1.
class MobiusMap {
 public:
  MobiusMap() = default;
  MobiusMap(Complex alpha, Complex beta) : alpha_(alpha), beta_(beta) {
    const double det = std::norm(alpha_) - std::norm(beta_);
    if (!(std::abs(det - 1.0) <= 1e-12))
      throw std::invalid_argument("MobiusMap: |alpha|^2 - |beta|^2 must equal 1");
  }

  static MobiusMap identity() { return {}; }

  /// Hyperbolic translation by `distance` along the geodesic through 0 in
  /// direction `angle`; maps 0 to tanh(distance/2) e^{i angle}.
  static MobiusMap translation(double angle, double distance) {
    const double h = 0.5 * distance;
    return {Complex(std::cosh(h), 0.0), std::polar(std::sinh(h), angle)};
  }

  Complex alpha() const { return alpha_; }
  Complex beta() const { return beta_; }
  double determinant() const { return std::norm(alpha_) - std::norm(beta_); }
  double trace() const { return 2.0 * alpha_.real(); }

  /// Translation length 2 arccosh(|trace| / 2); zero for elliptic/parabolic maps.
  double translation_length() const {
    const double half = std::abs(trace()) / 2.0;
    return half > 1.0 ? 2.0 * std::acosh(half) : 0.0;
  }

  DiskPoint apply(const DiskPoint& p) const {
    require_in_disk(p, "mobius_apply");
    const Complex z = p.z();
    const Complex w = (alpha_ * z + beta_) / (std::conj(beta_) * z + std::conj(alpha_));
    return DiskPoint::from(w);
  }

  MobiusMap inverse() const {
    MobiusMap m;
    m.alpha_ = std::conj(alpha_);
    m.beta_ = -beta_;
    return m;
  }

  friend MobiusMap operator*(const MobiusMap& a, const MobiusMap& b) {
    // [[a1, b1], [conj b1, conj a1]] [[a2, b2], [conj b2, conj a2]]
    MobiusMap m;
    m.alpha_ = a.alpha_ * b.alpha_ + a.beta_ * std::conj(b.beta_);
    m.beta_ = a.alpha_ * b.beta_ + a.beta_ * std::conj(b.alpha_);
    return m;
  }

  /// Coefficient-wise distance to the identity, modulo the sign ambiguity of
  /// SU(1,1) representatives.
  double distance_to_identity() const {
    const double plus = std::max(std::abs(alpha_ - 1.0), std::abs(beta_));
    const double minus = std::max(std::abs(alpha_ + 1.0), std::abs(beta_));
    return std::min(plus, minus);
  }

 private:
  Complex alpha_{1.0, 0.0};
  Complex beta_{0.0, 0.0};
};

inline DiskPoint mobius_apply(const MobiusMap& m, const DiskPoint& z) { return m.apply(z); }

/// The genus-2 surface group generated by the side pairings of the regular
/// hyperbolic octagon centered at 0 with all interior angles pi/4.
///
/// side_pairing(k), k = 0..7, is the translation along direction k pi/4 that
/// carries side k+4 onto side k; side_pairing(k + 4) = side_pairing(k)^{-1}.
/// symplectic_basis() returns four words g1..g4 in the side pairings with
/// g1 g2 g1^-1 g2^-1 g3 g4 g3^-1 g4^-1 = 1; they generate the same group.
class FuchsianGroupOctagon {
 public:
  static constexpr int kSides = 8;

  FuchsianGroupOctagon() {
    // Regular {8,8}: cosh(inradius) = cot(pi/8), cosh(circumradius) = cot^2(pi/8).
    const double cot8 = 1.0 / std::tan(std::numbers::pi / 8.0);
    inradius_ = std::acosh(cot8);
    circumradius_ = std::acosh(cot8 * cot8);
    for (int k = 0; k < kSides; ++k)
      pairings_[k] = MobiusMap::translation(k * std::numbers::pi / 4.0, 2.0 * inradius_);
  }

  const MobiusMap& side_pairing(int k) const { return pairings_.at(k); }
  const std::array<MobiusMap, kSides>& side_pairings() const { return pairings_; }

  double inradius() const { return inradius_; }
  double circumradius() const { return circumradius_; }

  /// Euclidean disk radius of the octagon's vertices.
  double vertex_disk_radius() const { return std::tanh(circumradius_ / 2.0); }

  /// Product of side pairings along a word of indices 0..7 (leftmost first).
  MobiusMap word_map(const std::vector<int>& word) const {
    MobiusMap m;
    for (int k : word) m = m * side_pairing(k);
    return m;
  }

  /// The defining relation of the side-pairing presentation.
  static std::vector<int> side_relator() { return {0, 3, 6, 1, 4, 7, 2, 5}; }

  std::array<MobiusMap, 4> symplectic_basis() const {
    return {word_map({0}), word_map({1}), word_map({1, 7, 4}), word_map({0, 2, 5})};
  }

  /// g1 g2 g1^-1 g2^-1 g3 g4 g3^-1 g4^-1 over the symplectic basis.
  MobiusMap relator_product() const {
    const auto g = symplectic_basis();
    return g[0] * g[1] * g[0].inverse() * g[1].inverse() * g[2] * g[3] * g[2].inverse() *
           g[3].inverse();
  }

  /// Closed Dirichlet domain at 0: no side pairing moves the point closer to 0.
  bool in_fundamental_domain(const DiskPoint& z, double slack = 1e-12) const {
    const double d0 = hyperbolic_distance(z, {});
    for (const auto& g : pairings_)
      if (hyperbolic_distance(g.apply(z), {}) < d0 - slack) return false;
    return true;
  }

 private:
  double inradius_ = 0.0;
  double circumradius_ = 0.0;
  std::array<MobiusMap, kSides> pairings_{};
};

inline FuchsianGroupOctagon octagon_generators() { return {}; }

struct ReducedPoint {
  DiskPoint point;
  /// Side-pairing indices; word_map(word) applied to `point` gives the input.
  std::vector<int> word;
};

/// Greedy reduction into the fundamental octagon: repeatedly apply the side
/// pairing that decreases the distance to the center the most (ties go to the
/// lowest index).
inline ReducedPoint reduce_to_fundamental_domain(const FuchsianGroupOctagon& group,
                                                 const DiskPoint& z, int max_steps = 1000) {
  require_in_disk(z, "reduce_to_fundamental_domain");
  ReducedPoint out{z, {}};
  constexpr double kGain = 1e-12;
  for (int step = 0; step < max_steps; ++step) {
    const double d0 = hyperbolic_distance(out.point, {});
    int best = -1;
    double best_d = d0 - kGain;
    DiskPoint best_p{};
    for (int k = 0; k < FuchsianGroupOctagon::kSides; ++k) {
      const DiskPoint p = group.side_pairing(k).apply(out.point);
      const double d = hyperbolic_distance(p, {});
      if (d < best_d) {
        best = k;
        best_d = d;
        best_p = p;
      }
    }
    if (best < 0) return out;
    out.point = best_p;
    // Applied g_best; recovering the input needs its inverse, index best +- 4.
    out.word.push_back((best + 4) % FuchsianGroupOctagon::kSides);
  }
  throw std::runtime_error("reduce_to_fundamental_domain: no convergence after " +
                           std::to_string(max_steps) + " steps from (" + std::to_string(z.x) +
                           ", " + std::to_string(z.y) + ")");
}

struct GroupCheckReport {
  double relator_error = 0.0;       // distance of the relator product to the identity
  double roundtrip_error = 0.0;     // max hyperbolic distance after reduce + word_map
  double translation_spread = 0.0;  // max - min translation length of the side pairings
  double translation_length = 0.0;
  int outside_domain = 0;           // reduced points failing the domain test
  int points = 0;
};

/// Relator, reduction round trip over `points` random points with |z| <= 0.99
/// and equality of the side-pairing translation lengths.
inline GroupCheckReport check_octagon_group(int points, std::uint64_t seed) {
  const FuchsianGroupOctagon G;
  GroupCheckReport r;
  r.points = points;
  r.relator_error = G.relator_product().distance_to_identity();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& g : G.side_pairings()) {
    lo = std::min(lo, g.translation_length());
    hi = std::max(hi, g.translation_length());
  }
  r.translation_spread = hi - lo;
  r.translation_length = hi;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < points; ++k) {
    const double rad = 0.99 * std::sqrt(unit(rng));
    const double ang = 2.0 * std::numbers::pi * unit(rng);
    const DiskPoint z{rad * std::cos(ang), rad * std::sin(ang)};
    const ReducedPoint red = reduce_to_fundamental_domain(G, z);
    r.roundtrip_error = std::max(r.roundtrip_error, hyperbolic_distance(G.word_map(red.word).apply(red.point), z));
    if (!G.in_fundamental_domain(red.point, 1e-9)) ++r.outside_domain;
  }
  return r;
}

/// Periodic Fermi chart around a closed geodesic: x in [0, L) periodic,
/// y in [-Y, Y], metric dy^2 + cosh^2(y) dx^2.  Grid nodes are
/// x_i = i L / Nx and cell-centred y_j = -Y + (j + 1/2) 2Y / Ny.
struct FermiChart {
  double L = 6.4;
  double Y = 1.6;
  int Nx = 128;
  int Ny = 64;

  void validate() const {
    if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("FermiChart: L must be > 0");
    if (!(Y > 0.0) || !std::isfinite(Y)) throw std::invalid_argument("FermiChart: Y must be > 0");
    if (Nx < 4 || Ny < 4) throw std::invalid_argument("FermiChart: need Nx, Ny >= 4");
  }

  double hx() const { return L / Nx; }
  double hy() const { return 2.0 * Y / Ny; }
  double x(int i) const { return i * hx(); }
  double y(int j) const { return -Y + (j + 0.5) * hy(); }
  std::size_t nodes() const { return static_cast<std::size_t>(Nx) * static_cast<std::size_t>(Ny); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(Nx) + static_cast<std::size_t>(i);
  }
  bool contains(double px, double py) const {
    return std::isfinite(px) && std::isfinite(py) && py >= -Y && py <= Y;
  }
  bool operator==(const FermiChart&) const = default;
};

/// Symmetric 2x2 matrix stored as (xx, xy, yy).
struct Sym2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
  double det() const { return xx * yy - xy * xy; }
};

/// Base metric diag(cosh^2 y, 1) in (x, y) ordering.
inline Sym2 fermi_metric(const FermiChart& chart, double x, double y) {
  if (!chart.contains(x, y)) throw std::domain_error("fermi_metric: point outside the chart");
  const double c = std::cosh(y);
  return {c * c, 0.0, 1.0};
}

}  // namespace fmcf

#endif  // FMCF_HYP_BASE_HPP
