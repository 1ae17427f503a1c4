#ifndef FMCF_REDUCE_HPP
#define FMCF_REDUCE_HPP

#include <cstddef>
#include <span>

namespace fmcf {

/// Pairwise (tree) summation in fixed index order.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

/// Index of the smallest entry; ties resolve to the lowest index.
inline std::size_t argmin_index(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < v.size(); ++k)
    if (v[k] < v[best]) best = k;
  return best;
}

}  // namespace fmcf

#endif  // FMCF_REDUCE_HPP
