#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scaledim {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }

/// Axis-aligned analysis region. The boundary size L is the larger side;
/// all scales are reported as log10(e/L).
struct Box2 {
  double x_min = -1.8;
  double x_max = 1.8;
  double y_min = -1.8;
  double y_max = 1.8;

  double span_x() const { return x_max - x_min; }
  double span_y() const { return y_max - y_min; }
  double boundary() const { return std::max(span_x(), span_y()); }

  bool contains(Point2 p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }

  void validate() const {
    if (!(x_max > x_min) || !(y_max > y_min))
      throw std::invalid_argument("box sides must have positive extent");
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(y_min) ||
        !std::isfinite(y_max))
      throw std::invalid_argument("box coordinates must be finite");
  }
};

inline bool operator==(const Box2& a, const Box2& b) {
  return a.x_min == b.x_min && a.x_max == b.x_max && a.y_min == b.y_min && a.y_max == b.y_max;
}

/// Default region trapping the Henon attractor at a=1.4, b=0.3 (L = 3.6).
inline Box2 henon_box() { return Box2{-1.8, 1.8, -1.8, 1.8}; }

inline Box2 unit_box() { return Box2{0.0, 1.0, 0.0, 1.0}; }

}  // namespace scaledim
