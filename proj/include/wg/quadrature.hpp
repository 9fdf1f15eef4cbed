// Quadrature rules: Gauss-Legendre on segments, conical-product rules on
// triangles, and centroid-fan composites on general polygons.
#pragma once

#include <mutex>
#include <numbers>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wg/geometry.hpp"

namespace wg {

struct QuadratureRule {
  std::vector<Point> points;
  std::vector<double> weights;
  int degree = 0;  // every polynomial up to this total degree integrates exactly

  std::size_t size() const { return points.size(); }

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t q = 0; q < points.size(); ++q) s += weights[q] * f(points[q]);
    return s;
  }
};

/// Gauss-Legendre nodes and weights on [-1,1], exact to degree 2n-1.
/// Newton iteration on the three-term recurrence; nodes accurate to eps.
inline const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
  static std::mutex mtx;
  static std::unordered_map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  std::scoped_lock lock(mtx);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = t;
      if (n == 1) p1 = t;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      const double pn = (n == 1) ? t : p1;
      const double pn1 = (n == 1) ? 1.0 : p0;  // P_{n-1}
      dp = n * (t * pn - pn1) / (t * t - 1.0);
      const double dt = pn / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = -t;
    x[n - 1 - i] = t;
    const double wi = 2.0 / ((1.0 - t * t) * dp * dp);
    w[i] = wi;
    w[n - 1 - i] = wi;
  }
  return cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first->second;
}

/// Rule on the segment [a,b], exact for 1D polynomials of the arclength
/// parameter up to `degree`.
inline QuadratureRule edge_rule(Point a, Point b, int degree) {
  const int n = degree / 2 + 1;
  const auto& [x, w] = gauss_legendre(n);
  const double len = distance(a, b);
  QuadratureRule rule;
  rule.degree = 2 * n - 1;
  rule.points.reserve(n);
  rule.weights.reserve(n);
  for (int q = 0; q < n; ++q) {
    const double t = 0.5 * (1.0 + x[q]);
    rule.points.push_back(a + t * (b - a));
    rule.weights.push_back(0.5 * len * w[q]);
  }
  return rule;
}

/// Conical-product rule on the triangle (a,b,c). Collapsing the unit square
/// onto the reference triangle turns a degree-d integrand into one of degree
/// d+1 in the first Gauss direction, hence the extra point there.
inline QuadratureRule triangle_rule(Point a, Point b, Point c, int degree) {
  const int nu = (degree + 1) / 2 + 1;
  const int nv = degree / 2 + 1;
  const auto& [xu, wu] = gauss_legendre(nu);
  const auto& [xv, wv] = gauss_legendre(nv);
  const double jac = cross(b - a, c - a);  // 2*|T|, signed
  QuadratureRule rule;
  rule.degree = degree;
  rule.points.reserve(static_cast<std::size_t>(nu) * nv);
  rule.weights.reserve(static_cast<std::size_t>(nu) * nv);
  for (int i = 0; i < nu; ++i) {
    const double u = 0.5 * (1.0 + xu[i]);
    for (int j = 0; j < nv; ++j) {
      const double v = 0.5 * (1.0 + xv[j]) * (1.0 - u);
      rule.points.push_back(a + u * (b - a) + v * (c - a));
      rule.weights.push_back(0.25 * wu[i] * wv[j] * (1.0 - u) * jac);
    }
  }
  return rule;
}

/// Composite rule on a simple polygon, fan-triangulated from its centroid.
/// The polygon must be star-shaped with respect to the centroid; a fan
/// triangle of non-positive area signals that this failed (or that the cell
/// is degenerate) and is rejected.
inline QuadratureRule cell_rule(std::span<const Point> poly, int degree) {
  if (poly.size() == 3) return triangle_rule(poly[0], poly[1], poly[2], degree);
  const Point c = centroid(poly);
  const double scale = diameter(poly);
  QuadratureRule rule;
  rule.degree = degree;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point p = poly[i], q = poly[(i + 1) % n];
    const double area2 = cross(p - c, q - c);
    if (area2 <= 1e-14 * scale * scale)
      throw std::runtime_error("cell_rule: degenerate fan triangle at polygon vertex " +
                               std::to_string(i));
    QuadratureRule sub = triangle_rule(c, p, q, degree);
    rule.points.insert(rule.points.end(), sub.points.begin(), sub.points.end());
    rule.weights.insert(rule.weights.end(), sub.weights.begin(), sub.weights.end());
  }
  return rule;
}

}  // namespace wg
