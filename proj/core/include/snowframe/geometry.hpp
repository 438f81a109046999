#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>

namespace snowframe {

struct Size {
  int width = 0;
  int height = 0;

  friend bool operator==(const Size&, const Size&) = default;
};

struct Point {
  int x = 0;
  int y = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Integer pixel rectangle, half-open: covers [x, x+w) x [y, y+h).
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  std::int64_t area() const noexcept {
    return static_cast<std::int64_t>(w) * static_cast<std::int64_t>(h);
  }
  bool empty() const noexcept { return w <= 0 || h <= 0; }
  int right() const noexcept { return x + w; }
  int bottom() const noexcept { return y + h; }

  friend bool operator==(const Rect&, const Rect&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Rect& r) {
  return os << "(" << r.x << "," << r.y << "," << r.w << "," << r.h << ")";
}

inline Rect intersect(const Rect& a, const Rect& b) noexcept {
  const int x0 = std::max(a.x, b.x);
  const int y0 = std::max(a.y, b.y);
  const int x1 = std::min(a.right(), b.right());
  const int y1 = std::min(a.bottom(), b.bottom());
  if (x1 <= x0 || y1 <= y0) return Rect{x0, y0, 0, 0};
  return Rect{x0, y0, x1 - x0, y1 - y0};
}

inline bool contains(const Rect& outer, const Rect& inner) noexcept {
  return inner.x >= outer.x && inner.y >= outer.y &&
         inner.right() <= outer.right() && inner.bottom() <= outer.bottom();
}

/// Intersection over union; 0 when both rectangles are empty.
inline double iou(const Rect& a, const Rect& b) noexcept {
  const std::int64_t inter = intersect(a, b).area();
  const std::int64_t uni = a.area() + b.area() - inter;
  return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

/// Sub-pixel rectangle used where values are smoothed over time.
struct RectF {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const noexcept { return w * h; }
  friend bool operator==(const RectF&, const RectF&) = default;
};

inline RectF to_rectf(const Rect& r) noexcept {
  return RectF{static_cast<double>(r.x), static_cast<double>(r.y),
               static_cast<double>(r.w), static_cast<double>(r.h)};
}

Rect round_rect(const RectF& r) noexcept;
double iou(const RectF& a, const RectF& b) noexcept;

}  // namespace snowframe
