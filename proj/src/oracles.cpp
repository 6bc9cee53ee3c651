#include "frechet/oracles.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace frechet {

SquaredDistance discrete_frechet(const Curve& pi, const Curve& sigma) {
  const std::size_t n = pi.size(), m = sigma.size();
  if (n == 0 || m == 0) throw std::invalid_argument("discrete_frechet: empty curve");
  std::vector<SquaredDistance> prev(m), cur(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const SquaredDistance d = squared_distance(pi[i], sigma[j]);
      if (i == 0 && j == 0) {
        cur[j] = d;
        continue;
      }
      std::optional<SquaredDistance> reach;
      auto take = [&](const SquaredDistance& v) {
        if (!reach || v < *reach) reach = v;
      };
      if (i > 0) take(prev[j]);
      if (j > 0) take(cur[j - 1]);
      if (i > 0 && j > 0) take(prev[j - 1]);
      cur[j] = std::max(d, *reach);
    }
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

namespace {

using Interval = std::optional<FreeInterval>;

const ExactRoot& max_root(const ExactRoot& a, const ExactRoot& b) { return a < b ? b : a; }

bool reaches_one(const Interval& iv) {
  return iv && compare_root_expressions(iv->hi, ExactRoot(IntFraction(1))) == Ordering::Equal;
}

bool starts_at_zero(const Interval& iv) {
  return iv && compare_root_expressions(iv->lo, ExactRoot(IntFraction(0))) == Ordering::Equal;
}

// Intersection of free interval `f` with [lo, 1].
Interval clip_from(const Interval& f, const ExactRoot& lo) {
  if (!f) return std::nullopt;
  FreeInterval r{max_root(f->lo, lo), f->hi};
  if (r.hi < r.lo) return std::nullopt;
  return r;
}

Interval point_curve_interval(const Curve& c, const Point& p, const SquaredDistance& delta2) {
  for (const Point& q : c.vertices())
    if (squared_distance(p, q) > delta2) return std::nullopt;
  return FreeInterval{ExactRoot(IntFraction(0)), ExactRoot(IntFraction(1))};
}

}  // namespace

bool decide_frechet(const Curve& pi, const Curve& sigma, const SquaredDistance& delta2) {
  const std::size_t n = pi.size(), m = sigma.size();
  if (n == 0 || m == 0) throw std::invalid_argument("decide_frechet: empty curve");
  if (n == 1) return point_curve_interval(sigma, pi[0], delta2).has_value();
  if (m == 1) return point_curve_interval(pi, sigma[0], delta2).has_value();
  if (squared_distance(pi[0], sigma[0]) > delta2) return false;
  if (squared_distance(pi[n - 1], sigma[m - 1]) > delta2) return false;

  // left[j]: reachable part of the vertical boundary x = i over sigma edge j.
  // bottom: reachable part of the horizontal boundary y = j over pi edge i.
  std::vector<Interval> left(m - 1);
  for (std::size_t j = 0; j + 1 < m; ++j) {
    const Interval f = free_interval_on_segment(sigma[j], sigma[j + 1], pi[0], delta2);
    const bool connected = j == 0 ? starts_at_zero(f) : reaches_one(left[j - 1]) && starts_at_zero(f);
    left[j] = connected ? f : std::nullopt;
  }
  bool bottom_open = true;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Interval fb = free_interval_on_segment(pi[i], pi[i + 1], sigma[0], delta2);
    Interval bottom = bottom_open && starts_at_zero(fb) ? fb : std::nullopt;
    bottom_open = reaches_one(bottom);
    std::vector<Interval> right(m - 1);
    for (std::size_t j = 0; j + 1 < m; ++j) {
      const Interval fr = free_interval_on_segment(sigma[j], sigma[j + 1], pi[i + 1], delta2);
      const Interval ft = free_interval_on_segment(pi[i], pi[i + 1], sigma[j + 1], delta2);
      if (bottom) {
        right[j] = fr;
      } else if (left[j]) {
        right[j] = clip_from(fr, left[j]->lo);
      }
      Interval top;
      if (left[j]) {
        top = ft;
      } else if (bottom) {
        top = clip_from(ft, bottom->lo);
      }
      bottom = top;
    }
    if (i + 2 == n && reaches_one(right[m - 2])) return true;
    left = std::move(right);
  }
  return false;
}

namespace {

void critical_values(const Curve& a, const Curve& b, std::vector<SquaredDistance>& out) {
  for (std::size_t j = 0; j + 1 < b.size(); ++j) {
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(nearest_parameter_on_segment(b[j], b[j + 1], a[i]).d2);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t k = i + 1; k < a.size(); ++k)
        if (auto e = equidistant_parameter(b[j], b[j + 1], a[i], a[k])) out.push_back(e->d2);
  }
}

}  // namespace

SquaredDistance brute_force_exact(const Curve& pi, const Curve& sigma) {
  if (pi.size() > kBruteForceLimit || sigma.size() > kBruteForceLimit)
    throw std::invalid_argument("brute_force_exact: curve too large");
  if (pi.size() == 0 || sigma.size() == 0) throw std::invalid_argument("brute_force_exact: empty curve");
  std::vector<SquaredDistance> cand{squared_distance(pi[0], sigma[0]),
                                    squared_distance(pi[pi.size() - 1], sigma[sigma.size() - 1])};
  for (const Point& p : pi.vertices())
    for (const Point& q : sigma.vertices()) cand.push_back(squared_distance(p, q));
  critical_values(pi, sigma, cand);
  critical_values(sigma, pi, cand);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  // Values below both endpoint distances cannot succeed.
  const SquaredDistance floor = std::max(cand.front(), std::max(squared_distance(pi[0], sigma[0]),
                                                                squared_distance(pi[pi.size() - 1], sigma[sigma.size() - 1])));
  std::size_t lo = static_cast<std::size_t>(std::lower_bound(cand.begin(), cand.end(), floor) - cand.begin());
  std::size_t hi = cand.size() - 1;
  if (!decide_frechet(pi, sigma, cand[hi])) throw std::logic_error("brute_force_exact: no feasible candidate");
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (decide_frechet(pi, sigma, cand[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return cand[lo];
}

}  // namespace frechet
