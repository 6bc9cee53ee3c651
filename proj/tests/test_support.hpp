#pragma once

#include "frechet/geometry.hpp"

#include <random>
#include <utility>
#include <vector>

namespace frechet::testing {

inline Curve curve(std::initializer_list<std::pair<std::int64_t, std::int64_t>> pts) {
  std::vector<std::pair<std::int64_t, std::int64_t>> v(pts);
  return Curve::from_integers(v);
}

/// Random integer curve with `size` vertices in [lo, hi]^2 and no consecutive duplicates.
inline Curve random_curve(std::mt19937_64& rng, std::size_t size, std::int64_t lo = 0, std::int64_t hi = 100) {
  std::uniform_int_distribution<std::int64_t> coord(lo, hi);
  std::vector<std::pair<std::int64_t, std::int64_t>> v;
  while (v.size() < size) {
    std::pair<std::int64_t, std::int64_t> p{coord(rng), coord(rng)};
    if (!v.empty() && v.back() == p) continue;
    v.push_back(p);
  }
  return Curve::from_integers(v);
}

inline Curve reversed(const Curve& c) {
  std::vector<Point> v(c.vertices().rbegin(), c.vertices().rend());
  return Curve::from_points(v);
}

/// Random walk with bounded steps, useful for long curves that stay close to each other.
inline Curve random_walk(std::mt19937_64& rng, std::size_t size, std::int64_t step, std::int64_t x0 = 0,
                         std::int64_t y0 = 0) {
  std::uniform_int_distribution<std::int64_t> d(-step, step);
  std::vector<std::pair<std::int64_t, std::int64_t>> v{{x0, y0}};
  while (v.size() < size) {
    std::pair<std::int64_t, std::int64_t> p{v.back().first + d(rng) + step / 2, v.back().second + d(rng)};
    if (p == v.back()) continue;
    v.push_back(p);
  }
  return Curve::from_integers(v);
}

}  // namespace frechet::testing
