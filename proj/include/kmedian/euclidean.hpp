#pragma once

// Real vectors with the Euclidean distance and segment interpolation.

#include <cmath>
#include <cstddef>
#include <vector>

#include "kmedian/core.hpp"

namespace kmedian {

using Point = std::vector<double>;

inline double dot(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw DataError("points differ in dimension");
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) s += a[d] * b[d];
  return s;
}

struct EuclideanAdapter {
  using object_type = Point;

  double distance(const Point& a, const Point& b) const {
    if (a.size() != b.size()) throw DataError("points differ in dimension");
    double s = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
    return std::sqrt(s);
  }

  /// (1 - t) a + t b
  Point weighted_mean(const Point& a, const Point& b, double t) const {
    if (a.size() != b.size()) throw DataError("points differ in dimension");
    Point m(a.size());
    for (std::size_t d = 0; d < a.size(); ++d) m[d] = (1.0 - t) * a[d] + t * b[d];
    return m;
  }
};

}  // namespace kmedian
