#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <span>
#include <vector>

namespace marp {

// A point in R^2 or R^3. Planar inputs leave z at zero.
struct Point {
  double x{0.0};
  double y{0.0};
  double z{0.0};

  friend bool operator==(const Point&, const Point&) = default;

  Point operator+(const Point& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Point operator-(const Point& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Point operator*(double s) const { return {x * s, y * s, z * s}; }

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  bool planar() const { return z == 0.0; }
};

inline double distance(const Point& a, const Point& b) { return (a - b).norm(); }

inline Point midpoint(const Point& a, const Point& b) {
  return {(a.x + b.x) * 0.5, (a.y + b.y) * 0.5, (a.z + b.z) * 0.5};
}

inline Point lerp(const Point& a, const Point& b, double s) { return a + (b - a) * s; }

inline std::ostream& operator<<(std::ostream& os, const Point& p) {
  os << '(' << p.x << ',' << p.y;
  if (!p.planar()) os << ',' << p.z;
  return os << ')';
}

// Stacked Euclidean distance between two multi-arm configurations.
inline double config_distance(std::span<const Point> a, std::span<const Point> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Point d = a[i] - b[i];
    sum += d.x * d.x + d.y * d.y + d.z * d.z;
  }
  return std::sqrt(sum);
}

// Minimum distance between two points moving linearly over normalized time
// [0,1]: p(s) = a0 + s(a1 - a0), q(s) = b0 + s(b1 - b0).
inline double min_distance_linear(const Point& a0, const Point& a1, const Point& b0,
                                  const Point& b1) {
  const Point w0 = a0 - b0;
  const Point dv = (a1 - a0) - (b1 - b0);
  const double dd = dv.x * dv.x + dv.y * dv.y + dv.z * dv.z;
  double s = 0.0;
  if (dd > 0.0) {
    s = -(w0.x * dv.x + w0.y * dv.y + w0.z * dv.z) / dd;
    s = std::clamp(s, 0.0, 1.0);
  }
  return (w0 + dv * s).norm();
}

}  // namespace marp
