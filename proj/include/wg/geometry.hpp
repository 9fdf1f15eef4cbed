// Planar geometry primitives shared by the mesh, quadrature and basis layers.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

namespace wg {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
inline Point operator*(Point p, double s) { return s * p; }

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

/// Rotate by -90 degrees; maps a CCW-walk direction to the outward side.
inline Point rotate_cw(Point p) { return {p.y, -p.x}; }

/// Shoelace signed area; positive for counter-clockwise loops.
inline double signed_area(std::span<const Point> poly) {
  double twice = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) twice += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * twice;
}

/// Area-weighted centroid of a simple polygon.
inline Point centroid(std::span<const Point> poly) {
  const std::size_t n = poly.size();
  double a = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point p = poly[i], q = poly[(i + 1) % n];
    const double w = cross(p, q);
    a += w;
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  if (a == 0.0) throw std::runtime_error("centroid: degenerate polygon");
  return {cx / (3.0 * a), cy / (3.0 * a)};
}

/// Largest pairwise vertex distance.
inline double diameter(std::span<const Point> poly) {
  double d = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    for (std::size_t j = i + 1; j < poly.size(); ++j)
      d = std::max(d, distance(poly[i], poly[j]));
  return d;
}

/// Distance from an interior point to the closest boundary segment. Used as a
/// conservative stand-in for the inscribed-circle radius in regularity checks.
inline double min_boundary_distance(std::span<const Point> poly, Point p) {
  double d = std::numeric_limits<double>::max();
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = poly[i], b = poly[(i + 1) % n];
    const Point ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    d = std::min(d, distance(p, a + t * ab));
  }
  return d;
}

}  // namespace wg
