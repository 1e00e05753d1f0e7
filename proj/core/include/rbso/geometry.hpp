#pragma once

#include <algorithm>
#include <cmath>

namespace rbso {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// Axis-aligned rectangle; min_corner < max_corner component-wise.
struct Rectangle {
  Vec2 min_corner;
  Vec2 max_corner;

  double width() const { return max_corner.x - min_corner.x; }
  double height() const { return max_corner.y - min_corner.y; }

  /// Strict interior test; boundary points are outside.
  bool contains_interior(Vec2 p) const {
    return p.x > min_corner.x && p.x < max_corner.x && p.y > min_corner.y && p.y < max_corner.y;
  }
  bool contains_closed(Vec2 p) const {
    return p.x >= min_corner.x && p.x <= max_corner.x && p.y >= min_corner.y && p.y <= max_corner.y;
  }
  Rectangle inflated(double margin) const {
    return {{min_corner.x - margin, min_corner.y - margin},
            {max_corner.x + margin, max_corner.y + margin}};
  }
  double perimeter() const { return 2.0 * (width() + height()); }

  /// Euclidean distance from p to the closed rectangle (0 inside).
  double distance_to(Vec2 p) const {
    const double dx = std::max({min_corner.x - p.x, 0.0, p.x - max_corner.x});
    const double dy = std::max({min_corner.y - p.y, 0.0, p.y - max_corner.y});
    return std::hypot(dx, dy);
  }

  /// Gap between two rectangles along the separating axes (0 if they touch or overlap).
  double gap_to(const Rectangle& o) const {
    const double dx = std::max({o.min_corner.x - max_corner.x, 0.0, min_corner.x - o.max_corner.x});
    const double dy = std::max({o.min_corner.y - max_corner.y, 0.0, min_corner.y - o.max_corner.y});
    return std::hypot(dx, dy);
  }
};

/// True iff the open segment (a, b) meets the open interior of `rect`.
inline bool segment_hits_interior(Vec2 a, Vec2 b, const Rectangle& rect) {
  double lo = 0.0;
  double hi = 1.0;
  const auto clip = [&](double start, double delta, double lower, double upper) {
    if (delta == 0.0) {
      return start > lower && start < upper;
    }
    double t0 = (lower - start) / delta;
    double t1 = (upper - start) / delta;
    if (t0 > t1) std::swap(t0, t1);
    lo = std::max(lo, t0);
    hi = std::min(hi, t1);
    return lo < hi;
  };
  const Vec2 d = b - a;
  return clip(a.x, d.x, rect.min_corner.x, rect.max_corner.x) &&
         clip(a.y, d.y, rect.min_corner.y, rect.max_corner.y);
}

/// Parametric entry of the segment a->b into the closed rectangle, if any.
inline bool segment_entry(Vec2 a, Vec2 b, const Rectangle& rect, double& t_enter) {
  double lo = 0.0;
  double hi = 1.0;
  const Vec2 d = b - a;
  const auto clip = [&](double start, double delta, double lower, double upper) {
    if (delta == 0.0) return start >= lower && start <= upper;
    double t0 = (lower - start) / delta;
    double t1 = (upper - start) / delta;
    if (t0 > t1) std::swap(t0, t1);
    lo = std::max(lo, t0);
    hi = std::min(hi, t1);
    return lo <= hi;
  };
  if (!clip(a.x, d.x, rect.min_corner.x, rect.max_corner.x)) return false;
  if (!clip(a.y, d.y, rect.min_corner.y, rect.max_corner.y)) return false;
  t_enter = lo;
  return true;
}

}  // namespace rbso
