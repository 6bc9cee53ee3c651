#pragma once

#include "frechet/exact_numbers.hpp"

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <optional>
#include <span>
#include <vector>

namespace frechet {

struct Point {
  IntFraction x;
  IntFraction y;

  friend bool operator==(const Point&, const Point&) = default;
};

std::ostream& operator<<(std::ostream& os, const Point& p);

/// Squared Euclidean length, always >= 0.
struct SquaredDistance {
  IntFraction value;

  double to_double() const { return value.to_double(); }
  ExactRoot root() const { return ExactRoot::sqrt_of(value); }

  friend bool operator==(const SquaredDistance&, const SquaredDistance&) = default;
  friend auto operator<=>(const SquaredDistance& a, const SquaredDistance& b) { return a.value <=> b.value; }
};

inline std::ostream& operator<<(std::ostream& os, const SquaredDistance& d) { return os << d.value; }

/// A polygonal curve. Input vertices have integer coordinates; refinement inserts
/// rational vertices on existing edges.
class Curve {
 public:
  Curve() = default;
  /// Collapses consecutive duplicates; origin indices refer to `pts`.
  static Curve from_points(std::span<const Point> pts);
  static Curve from_integers(std::span<const std::pair<std::int64_t, std::int64_t>> pts);

  std::size_t size() const { return vertices_.size(); }
  std::size_t edge_count() const { return vertices_.empty() ? 0 : vertices_.size() - 1; }
  const Point& operator[](std::size_t i) const { return vertices_[i]; }
  const std::vector<Point>& vertices() const { return vertices_; }

  /// Index of the input vertex this vertex came from (inserted vertices carry the
  /// index of the input vertex that starts their edge).
  std::size_t origin(std::size_t i) const { return origin_[i]; }
  bool inserted(std::size_t i) const { return inserted_[i] != 0; }

  /// Point at parameter t in [0,1] on edge i.
  Point point_on_edge(std::size_t edge, const IntFraction& t) const;

  /// New curve with `params` (strictly interior, sorted per edge) spliced into their edges.
  /// Each entry is (edge index, t).
  Curve with_inserted(std::vector<std::pair<std::size_t, IntFraction>> params) const;

  void push_back(Point p, std::size_t origin, bool inserted);

  friend bool operator==(const Curve& a, const Curve& b) { return a.vertices_ == b.vertices_; }

 private:
  std::vector<Point> vertices_;
  std::vector<std::size_t> origin_;
  std::vector<std::uint8_t> inserted_;
};

struct EdgeParameter {
  IntFraction t;
  SquaredDistance d2;
};

struct FreeInterval {
  ExactRoot lo;
  ExactRoot hi;
};

Point lerp(const Point& a, const Point& b, const IntFraction& t);
IntFraction dot(const Point& u, const Point& v);
Point operator-(const Point& a, const Point& b);

SquaredDistance squared_distance(const Point& p, const Point& q);

/// Clamped projection of p onto segment ab and the squared distance there (the eddy).
/// A degenerate segment yields t = 0.
EdgeParameter nearest_parameter_on_segment(const Point& a, const Point& b, const Point& p);

/// Point of segment ab minimising max(|.-s|, |.-s2|), when that minimum is attained where both
/// distances are equal. Returns nullopt when the minimum is a single distance's minimum.
std::optional<EdgeParameter> equidistant_parameter(const Point& a, const Point& b, const Point& s,
                                                   const Point& s2);

/// {t in [0,1] : |p - (a + t(b-a))|^2 <= delta2}; nullopt when empty.
std::optional<FreeInterval> free_interval_on_segment(const Point& a, const Point& b, const Point& p,
                                                     const SquaredDistance& delta2);

/// Per-segment quantities shared by many queries against the same segment.
struct SegmentFrame {
  Point a;
  Point dir;      // b - a
  IntFraction len2;

  SegmentFrame(const Point& a, const Point& b);
  /// Unclamped projection parameter of p.
  IntFraction projection(const Point& p) const;
  /// Squared distance from p to the supporting line.
  IntFraction line_distance2(const Point& p) const;
  /// Squared distance from p to a + t*dir.
  IntFraction distance2_at(const Point& p, const IntFraction& t) const;
};

}  // namespace frechet
