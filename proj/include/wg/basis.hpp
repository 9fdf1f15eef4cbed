// Polynomial spaces: scaled monomials on cells, centered monomials in the
// arclength parameter on edges, Raviart-Thomas spaces on triangles, and Gram
// matrices under quadrature.
#pragma once

#include <memory>

#include <Eigen/Dense>

#include "wg/mesh.hpp"
#include "wg/quadrature.hpp"

namespace wg {

/// Scaled monomials ((x-xc)/hT)^a ((y-yc)/hT)^b, a+b <= k, graded ordering.
class CellBasis {
 public:
  CellBasis(int degree, Point center, double scale) : deg_(degree), c_(center), h_(scale) {
    for (int d = 0; d <= degree; ++d)
      for (int a = d; a >= 0; --a) exp_.push_back({a, d - a});
  }

  CellBasis(const Mesh& mesh, int cell, int degree)
      : CellBasis(degree, mesh.cell_centroid(cell), mesh.cell_diameter[cell]) {}

  static int dimension(int degree) { return (degree + 1) * (degree + 2) / 2; }

  int degree() const { return deg_; }
  int size() const { return static_cast<int>(exp_.size()); }
  Point center() const { return c_; }
  double scale() const { return h_; }
  std::pair<int, int> exponents(int i) const { return exp_[i]; }

  double value(int i, Point p) const {
    const auto [a, b] = exp_[i];
    return ipow((p.x - c_.x) / h_, a) * ipow((p.y - c_.y) / h_, b);
  }

  Point gradient(int i, Point p) const {
    const auto [a, b] = exp_[i];
    const double xs = (p.x - c_.x) / h_, ys = (p.y - c_.y) / h_;
    return {a == 0 ? 0.0 : a * ipow(xs, a - 1) * ipow(ys, b) / h_,
            b == 0 ? 0.0 : b * ipow(xs, a) * ipow(ys, b - 1) / h_};
  }

  Eigen::VectorXd values(Point p) const {
    Eigen::VectorXd v(size());
    for (int i = 0; i < size(); ++i) v[i] = value(i, p);
    return v;
  }

  /// Rows = quadrature points, columns = basis functions.
  Eigen::MatrixXd values_at(const QuadratureRule& rule) const {
    Eigen::MatrixXd V(rule.size(), size());
    for (std::size_t q = 0; q < rule.size(); ++q)
      for (int i = 0; i < size(); ++i) V(q, i) = value(i, rule.points[q]);
    return V;
  }

 private:
  static double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
  }

  int deg_;
  Point c_;
  double h_;
  std::vector<std::pair<int, int>> exp_;
};

/// Monomials tau^i in the normalized arclength parameter
/// tau = 2 (x - midpoint) . tangent / length, tau in [-1,1].
/// The tangent follows the canonical edge orientation, so the same
/// coefficients describe an edge polynomial from either incident cell.
class EdgeBasis {
 public:
  EdgeBasis(int degree, Point a, Point b)
      : deg_(degree), mid_(0.5 * (a + b)), len_(distance(a, b)) {
    tang_ = (1.0 / len_) * (b - a);
  }

  EdgeBasis(const Mesh& mesh, int edge, int degree)
      : EdgeBasis(degree, mesh.vertices[mesh.edges[edge].v0], mesh.vertices[mesh.edges[edge].v1]) {}

  int degree() const { return deg_; }
  int size() const { return deg_ + 1; }
  double length() const { return len_; }

  double parameter(Point p) const { return 2.0 * dot(p - mid_, tang_) / len_; }

  double value(int i, Point p) const {
    const double t = parameter(p);
    double r = 1.0;
    for (int j = 0; j < i; ++j) r *= t;
    return r;
  }

  Eigen::VectorXd values(Point p) const {
    Eigen::VectorXd v(size());
    const double t = parameter(p);
    v[0] = 1.0;
    for (int i = 1; i < size(); ++i) v[i] = v[i - 1] * t;
    return v;
  }

  Eigen::MatrixXd values_at(const QuadratureRule& rule) const {
    Eigen::MatrixXd V(rule.size(), size());
    for (std::size_t q = 0; q < rule.size(); ++q) V.row(q) = values(rule.points[q]).transpose();
    return V;
  }

 private:
  int deg_;
  Point mid_;
  Point tang_;
  double len_;
};

/// RT_k(T) = [P_k(T)]^2 + x~ P~_k(T) on a triangle, where x~ is the scaled
/// centered coordinate and P~_k the homogeneous degree-k monomials; the first
/// 2 dim(P_k) members are the Cartesian monomial vectors. dim = (k+1)(k+3).
class RTBasis {
 public:
  RTBasis(int order, Point center, double scale) : k_(order), scalar_(order, center, scale) {}

  RTBasis(const Mesh& mesh, int cell, int order)
      : RTBasis(order, mesh.cell_centroid(cell), mesh.cell_diameter[cell]) {}

  static int dimension(int order) { return (order + 1) * (order + 3); }

  int order() const { return k_; }
  int size() const { return dimension(k_); }

  Point value(int i, Point p) const {
    const int nk = scalar_.size();
    if (i < nk) return {scalar_.value(i, p), 0.0};
    if (i < 2 * nk) return {0.0, scalar_.value(i - nk, p)};
    const int j = i - 2 * nk;  // homogeneous monomial x~^(k-j) y~^j
    const double m = hom_value(j, p);
    const Point c = scalar_.center();
    const double h = scalar_.scale();
    return {(p.x - c.x) / h * m, (p.y - c.y) / h * m};
  }

  double divergence(int i, Point p) const {
    const int nk = scalar_.size();
    if (i < nk) return scalar_.gradient(i, p).x;
    if (i < 2 * nk) return scalar_.gradient(i - nk, p).y;
    // div(x~ m) = (2 + k) m / h for homogeneous m of degree k
    return (2.0 + k_) * hom_value(i - 2 * nk, p) / scalar_.scale();
  }

 private:
  double hom_value(int j, Point p) const {
    // index of exponent (k-j, j) within the graded scalar basis
    const int offset = CellBasis::dimension(k_ - 1);
    return scalar_.value(offset + j, p);
  }

  int k_;
  CellBasis scalar_;
};

/// Gradient space of the weak gradient: either [P_r]^2 as Cartesian monomial
/// vectors or RT_k, behind one evaluation interface.
class GradientBasis {
 public:
  static GradientBasis vector_pk(int r, Point center, double scale) {
    GradientBasis g;
    g.scalar_ = std::make_shared<CellBasis>(r, center, scale);
    return g;
  }

  static GradientBasis raviart_thomas(int k, Point center, double scale) {
    GradientBasis g;
    g.rt_ = std::make_shared<RTBasis>(k, center, scale);
    return g;
  }

  int size() const {
    return rt_ ? rt_->size() : 2 * scalar_->size();
  }

  Point value(int i, Point p) const {
    if (rt_) return rt_->value(i, p);
    const int n = scalar_->size();
    return i < n ? Point{scalar_->value(i, p), 0.0} : Point{0.0, scalar_->value(i - n, p)};
  }

  double divergence(int i, Point p) const {
    if (rt_) return rt_->divergence(i, p);
    const int n = scalar_->size();
    return i < n ? scalar_->gradient(i, p).x : scalar_->gradient(i - n, p).y;
  }

 private:
  std::shared_ptr<CellBasis> scalar_;
  std::shared_ptr<RTBasis> rt_;
};

inline Eigen::MatrixXd gram_matrix(const CellBasis& basis, const QuadratureRule& rule) {
  const Eigen::MatrixXd V = basis.values_at(rule);
  const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(), rule.weights.size());
  return V.transpose() * w.asDiagonal() * V;
}

inline Eigen::MatrixXd gram_matrix(const EdgeBasis& basis, const QuadratureRule& rule) {
  const Eigen::MatrixXd V = basis.values_at(rule);
  const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(), rule.weights.size());
  return V.transpose() * w.asDiagonal() * V;
}

template <class VectorBasis>
inline Eigen::MatrixXd vector_gram_matrix(const VectorBasis& basis, const QuadratureRule& rule) {
  const int n = basis.size();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    Eigen::MatrixXd V(2, n);
    for (int i = 0; i < n; ++i) {
      const Point v = basis.value(i, rule.points[q]);
      V(0, i) = v.x;
      V(1, i) = v.y;
    }
    M.noalias() += rule.weights[q] * V.transpose() * V;
  }
  return M;
}

}  // namespace wg
