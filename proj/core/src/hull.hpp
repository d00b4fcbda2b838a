#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace zero_atlas::detail {

/// Indices of the lower convex hull of points with strictly increasing x
/// (monotone chain). Collinear interior points are dropped.
inline std::vector<std::size_t> lower_hull(std::span<const double> x, std::span<const double> y) {
  std::vector<std::size_t> h;
  h.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (h.size() >= 2) {
      const std::size_t a = h[h.size() - 2];
      const std::size_t b = h[h.size() - 1];
      // keep b only if it lies strictly below the chord a -> i
      const double cross = (x[b] - x[a]) * (y[i] - y[a]) - (y[b] - y[a]) * (x[i] - x[a]);
      if (cross <= 0.0) {
        h.pop_back();
      } else {
        break;
      }
    }
    h.push_back(i);
  }
  return h;
}

/// Upper hull, same conventions.
inline std::vector<std::size_t> upper_hull(std::span<const double> x, std::span<const double> y) {
  std::vector<double> neg(y.begin(), y.end());
  for (double& v : neg) v = -v;
  return lower_hull(x, neg);
}

}  // namespace zero_atlas::detail
