#pragma once

#include <cstddef>
#include <span>

namespace chemo::detail {

// Recursive halving down to blocks of 64; error grows like log(n) * eps.
inline double pairwise_sum(std::span<const double> xs) {
  constexpr std::size_t kBlock = 64;
  if (xs.size() <= kBlock) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace chemo::detail
