#include "frechet/geometry.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace frechet {

std::ostream& operator<<(std::ostream& os, const Point& p) {
  return os << '(' << p.x << ", " << p.y << ')';
}

Point operator-(const Point& a, const Point& b) { return {a.x - b.x, a.y - b.y}; }

IntFraction dot(const Point& u, const Point& v) { return u.x * v.x + u.y * v.y; }

Point lerp(const Point& a, const Point& b, const IntFraction& t) {
  return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

SquaredDistance squared_distance(const Point& p, const Point& q) {
  const Point d = p - q;
  return {dot(d, d)};
}

SegmentFrame::SegmentFrame(const Point& a_, const Point& b_) : a(a_), dir(b_ - a_), len2(dot(dir, dir)) {}

IntFraction SegmentFrame::projection(const Point& p) const {
  if (len2.is_zero()) return IntFraction(0);
  return dot(p - a, dir) / len2;
}

IntFraction SegmentFrame::line_distance2(const Point& p) const {
  const Point u = p - a;
  if (len2.is_zero()) return dot(u, u);
  const IntFraction cross = u.x * dir.y - u.y * dir.x;
  return cross * cross / len2;
}

IntFraction SegmentFrame::distance2_at(const Point& p, const IntFraction& t) const {
  const Point q{a.x + t * dir.x, a.y + t * dir.y};
  return squared_distance(p, q).value;
}

EdgeParameter nearest_parameter_on_segment(const Point& a, const Point& b, const Point& p) {
  const SegmentFrame f(a, b);
  if (f.len2.is_zero()) return {IntFraction(0), squared_distance(a, p)};
  IntFraction t = f.projection(p);
  if (t.sign() <= 0) return {IntFraction(0), squared_distance(a, p)};
  if (t >= IntFraction(1)) return {IntFraction(1), squared_distance(b, p)};
  return {t, {f.line_distance2(p)}};
}

std::optional<EdgeParameter> equidistant_parameter(const Point& a, const Point& b, const Point& s,
                                                   const Point& s2) {
  const SegmentFrame f(a, b);
  if (f.len2.is_zero()) throw std::invalid_argument("equidistant_parameter: degenerate segment");
  if (s == s2) return nearest_parameter_on_segment(a, b, s);
  const IntFraction denom = IntFraction(2) * dot(s - s2, f.dir);
  if (denom.is_zero()) return std::nullopt;
  const Point us = s - a, us2 = s2 - a;
  const IntFraction t = (dot(us, us) - dot(us2, us2)) / denom;
  if (t.sign() < 0 || t > IntFraction(1)) return std::nullopt;
  // Minimiser of the max only if t lies between the two unclamped projections.
  const IntFraction cs = f.projection(s), cs2 = f.projection(s2);
  if ((t - cs).sign() * (t - cs2).sign() > 0) return std::nullopt;
  return EdgeParameter{t, {f.distance2_at(s, t)}};
}

std::optional<FreeInterval> free_interval_on_segment(const Point& a, const Point& b, const Point& p,
                                                     const SquaredDistance& delta2) {
  const SegmentFrame f(a, b);
  if (f.len2.is_zero()) throw std::invalid_argument("free_interval_on_segment: degenerate segment");
  const IntFraction c = f.projection(p);
  const IntFraction rad = (delta2.value - f.line_distance2(p)) / f.len2;
  if (rad.sign() < 0) return std::nullopt;
  ExactRoot lo(c, rad, -1), hi(c, rad, +1);
  const ExactRoot zero(IntFraction(0)), one(IntFraction(1));
  if (compare_root_expressions(lo, one) == Ordering::Greater) return std::nullopt;
  if (compare_root_expressions(hi, zero) == Ordering::Less) return std::nullopt;
  if (compare_root_expressions(lo, zero) == Ordering::Less) lo = zero;
  if (compare_root_expressions(hi, one) == Ordering::Greater) hi = one;
  return FreeInterval{std::move(lo), std::move(hi)};
}

Curve Curve::from_points(std::span<const Point> pts) {
  Curve c;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!c.vertices_.empty() && c.vertices_.back() == pts[i]) continue;
    c.push_back(pts[i], i, false);
  }
  return c;
}

Curve Curve::from_integers(std::span<const std::pair<std::int64_t, std::int64_t>> pts) {
  std::vector<Point> p;
  p.reserve(pts.size());
  for (const auto& [x, y] : pts) p.push_back({IntFraction(x), IntFraction(y)});
  return from_points(p);
}

void Curve::push_back(Point p, std::size_t origin, bool inserted) {
  vertices_.push_back(std::move(p));
  origin_.push_back(origin);
  inserted_.push_back(inserted ? 1 : 0);
}

Point Curve::point_on_edge(std::size_t edge, const IntFraction& t) const {
  return lerp(vertices_.at(edge), vertices_.at(edge + 1), t);
}

Curve Curve::with_inserted(std::vector<std::pair<std::size_t, IntFraction>> params) const {
  std::sort(params.begin(), params.end());
  params.erase(std::unique(params.begin(), params.end()), params.end());
  Curve out;
  std::size_t k = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    out.push_back(vertices_[i], origin_[i], inserted_[i] != 0);
    for (; k < params.size() && params[k].first == i; ++k) {
      const auto& t = params[k].second;
      if (t.sign() <= 0 || t >= IntFraction(1) || i + 1 >= size())
        throw std::invalid_argument("with_inserted: parameter not strictly interior");
      out.push_back(point_on_edge(i, t), origin_[i], true);
    }
  }
  return out;
}

}  // namespace frechet
