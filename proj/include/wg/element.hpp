// Element-level weak Galerkin algebra: L2 projections onto cell and edge
// spaces, the discrete weak gradient, the boundary stabilizer, and the local
// stiffness/load pairs, for the {P_k, P_{k-1}} element with gradients in
// [P_{k-1}]^2 and the stabilizer-free {P_k, P_k} element with RT_k gradients.
#pragma once

#include <functional>

#include <Eigen/Dense>

#include "wg/basis.hpp"
#include "wg/mesh.hpp"
#include "wg/parallel.hpp"
#include "wg/quadrature.hpp"

namespace wg {

using ScalarField = std::function<double(Point)>;

enum class ElementKind { standard, superconvergent };

struct ElementFamily {
  ElementKind kind = ElementKind::standard;
  int degree = 1;  // k

  bool stabilized() const { return kind == ElementKind::standard; }
  int trace_degree() const { return kind == ElementKind::standard ? degree - 1 : degree; }
  int trace_size() const { return trace_degree() + 1; }

  // x~ P~_k terms raise RT products to degree 2k+2, hence the extra order.
  int cell_quadrature_degree() const {
    return kind == ElementKind::standard ? 2 * degree + 2 : 2 * degree + 3;
  }
  int edge_quadrature_degree() const { return 2 * degree + 1; }

  GradientBasis gradient_basis(Point center, double scale) const {
    return kind == ElementKind::standard ? GradientBasis::vector_pk(degree - 1, center, scale)
                                         : GradientBasis::raviart_thomas(degree, center, scale);
  }

  GradientBasis gradient_basis(const Mesh& mesh, int cell) const {
    return gradient_basis(mesh.cell_centroid(cell), mesh.cell_diameter[cell]);
  }
};

inline ElementFamily standard_family(int k) { return {ElementKind::standard, k}; }
inline ElementFamily superconvergent_family(int k) { return {ElementKind::superconvergent, k}; }

/// A discrete weak function: one interior coefficient vector per cell and one
/// trace coefficient vector per edge (single-valued across cells).
struct WeakFunction {
  ElementFamily family;
  std::vector<Eigen::VectorXd> cell;
  std::vector<Eigen::VectorXd> edge;
};

/// Element-wise L2 projection Q_0 onto P_degree(cell).
inline Eigen::VectorXd project_onto_cell(const Mesh& mesh, int cell, int degree,
                                         const ScalarField& f) {
  const CellBasis basis(mesh, cell, degree);
  const QuadratureRule rule = cell_rule(mesh.cell_vertices(cell), 2 * degree + 2);
  const Eigen::MatrixXd V = basis.values_at(rule);
  const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(), rule.weights.size());
  Eigen::VectorXd fv(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) fv[q] = f(rule.points[q]);
  const Eigen::MatrixXd M = V.transpose() * w.asDiagonal() * V;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("project_onto_cell: singular Gram matrix on cell " +
                             std::to_string(cell));
  return ldlt.solve(V.transpose() * (w.asDiagonal() * fv));
}

/// Edge-wise L2 projection Q_b onto P_degree(edge).
inline Eigen::VectorXd project_onto_edge(const Mesh& mesh, int edge, int degree,
                                         const ScalarField& g) {
  const EdgeBasis basis(mesh, edge, degree);
  const QuadratureRule rule =
      edge_rule(mesh.vertices[mesh.edges[edge].v0], mesh.vertices[mesh.edges[edge].v1],
                2 * degree + 1);
  const Eigen::MatrixXd V = basis.values_at(rule);
  const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(), rule.weights.size());
  Eigen::VectorXd gv(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) gv[q] = g(rule.points[q]);
  const Eigen::MatrixXd M = V.transpose() * w.asDiagonal() * V;
  return Eigen::LDLT<Eigen::MatrixXd>(M).solve(V.transpose() * (w.asDiagonal() * gv));
}

/// Local operators of one cell. Degrees of freedom are ordered interior
/// first, then the trace block of each edge in cell_edges order.
struct LocalOperators {
  int cell = -1;
  int n0 = 0;      // interior dofs
  int nb = 0;      // trace dofs per edge
  int nedges = 0;
  double hT = 0.0;
  Eigen::MatrixXd G;   // weak-gradient matrix: (v0, vb) -> gradient coefficients
  Eigen::MatrixXd Mg;  // gradient-space Gram, unweighted
  Eigen::MatrixXd S;   // stabilizer form (zero when the family drops it)
  Eigen::MatrixXd A;   // stiffness: G^T M_a G + c-mass + stabilizer
  Eigen::MatrixXd M0;  // interior mass, unweighted
  Eigen::VectorXd b;   // load moments against the interior basis

  int local_dim() const { return n0 + nedges * nb; }
  int edge_offset(int slot) const { return n0 + slot * nb; }
};

namespace detail {

inline void check_coefficient_bounds(const ScalarField& a, const ScalarField& c,
                                     const QuadratureRule& rule) {
  for (const Point& p : rule.points) {
    if (!(a(p) > 0.0))
      throw std::runtime_error("coefficient a(x) is not strictly positive at (" +
                               std::to_string(p.x) + "," + std::to_string(p.y) + ")");
    if (c(p) < 0.0)
      throw std::runtime_error("coefficient c(x) is negative at (" + std::to_string(p.x) + "," +
                               std::to_string(p.y) + ")");
  }
}

/// Moments of the interior basis against the trace basis of one edge,
/// N(i,j) = <psi_i, phi_j>_e.
inline Eigen::MatrixXd trace_moments(const CellBasis& interior, const EdgeBasis& trace,
                                     const QuadratureRule& rule) {
  const Eigen::MatrixXd Vi = interior.values_at(rule);
  const Eigen::MatrixXd Vt = trace.values_at(rule);
  const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(), rule.weights.size());
  return Vt.transpose() * w.asDiagonal() * Vi;
}

}  // namespace detail

/// Weak-gradient matrix G_T: applied to local coefficients (v0, vb per edge)
/// it returns the gradient-space coefficients of the unique solution of
///   (grad_w v, q)_T = -(v0, div q)_T + <vb, q.n>_dT   for all q.
inline Eigen::MatrixXd weak_gradient_matrix(const Mesh& mesh, int cell,
                                            const ElementFamily& family) {
  const CellBasis interior(mesh, cell, family.degree);
  const GradientBasis grad = family.gradient_basis(mesh, cell);
  const int ng = grad.size(), n0 = interior.size(), nb = family.trace_size();
  const int nedges = static_cast<int>(mesh.cell_edges[cell].size());

  const QuadratureRule crule = cell_rule(mesh.cell_vertices(cell), family.cell_quadrature_degree());
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(ng, n0 + nedges * nb);
  for (std::size_t q = 0; q < crule.size(); ++q) {
    const Point p = crule.points[q];
    Eigen::VectorXd dv(ng);
    for (int m = 0; m < ng; ++m) dv[m] = grad.divergence(m, p);
    B.leftCols(n0).noalias() -= crule.weights[q] * dv * interior.values(p).transpose();
  }
  for (int slot = 0; slot < nedges; ++slot) {
    const int e = mesh.cell_edges[cell][slot];
    const EdgeBasis trace(mesh, e, family.trace_degree());
    const QuadratureRule erule = edge_rule(mesh.vertices[mesh.edges[e].v0],
                                           mesh.vertices[mesh.edges[e].v1],
                                           family.edge_quadrature_degree());
    const Point n = mesh.outward_normal(cell, slot);
    for (std::size_t q = 0; q < erule.size(); ++q) {
      const Point p = erule.points[q];
      Eigen::VectorXd qn(ng);
      for (int m = 0; m < ng; ++m) qn[m] = dot(grad.value(m, p), n);
      B.middleCols(n0 + slot * nb, nb).noalias() +=
          erule.weights[q] * qn * trace.values(p).transpose();
    }
  }

  const Eigen::MatrixXd Mg = vector_gram_matrix(grad, crule);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(Mg);
  if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0.0 ||
      ldlt.vectorD().minCoeff() < 1e-15 * ldlt.vectorD().maxCoeff())
    throw std::runtime_error("weak_gradient_matrix: singular gradient Gram on cell " +
                             std::to_string(cell));
  return ldlt.solve(B);
}

/// Boundary penalty form of one cell at the given trace degree,
///   h_T^{-1} sum_e <Q_b v0 - vb, Q_b u0 - ub>_e,
/// independent of whether the scheme keeps it.
inline Eigen::MatrixXd stabilizer_form(const Mesh& mesh, int cell, int degree, int trace_degree) {
  const CellBasis interior(mesh, cell, degree);
  const int n0 = interior.size(), nb = trace_degree + 1;
  const int nedges = static_cast<int>(mesh.cell_edges[cell].size());
  const double hT = mesh.cell_diameter[cell];
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n0 + nedges * nb, n0 + nedges * nb);
  for (int slot = 0; slot < nedges; ++slot) {
    const int e = mesh.cell_edges[cell][slot];
    const EdgeBasis trace(mesh, e, trace_degree);
    const QuadratureRule erule =
        edge_rule(mesh.vertices[mesh.edges[e].v0], mesh.vertices[mesh.edges[e].v1],
                  2 * degree + 1);
    const Eigen::MatrixXd Me = gram_matrix(trace, erule);
    const Eigen::MatrixXd Ne = detail::trace_moments(interior, trace, erule);
    const Eigen::MatrixXd Pe = Eigen::LDLT<Eigen::MatrixXd>(Me).solve(Ne);  // Q_b of v0
    // D maps local dofs to the edge-space coefficients of Q_b v0 - vb
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(nb, n0 + nedges * nb);
    D.leftCols(n0) = Pe;
    D.middleCols(n0 + slot * nb, nb) = -Eigen::MatrixXd::Identity(nb, nb);
    S.noalias() += (1.0 / hT) * D.transpose() * Me * D;
  }
  return S;
}

/// Stabilizer of the scheme: the penalty form for the standard element, the
/// zero matrix for the stabilizer-free superconvergent element.
inline Eigen::MatrixXd stabilizer_matrix(const Mesh& mesh, int cell, const ElementFamily& family) {
  const int n = CellBasis::dimension(family.degree) +
                static_cast<int>(mesh.cell_edges[cell].size()) * family.trace_size();
  if (!family.stabilized()) return Eigen::MatrixXd::Zero(n, n);
  return stabilizer_form(mesh, cell, family.degree, family.trace_degree());
}

/// Full local build: weak gradient, stabilizer, stiffness and load.
inline LocalOperators build_local_operators(const Mesh& mesh, int cell,
                                            const ElementFamily& family, const ScalarField& a,
                                            const ScalarField& c, const ScalarField& f) {
  LocalOperators ops;
  ops.cell = cell;
  ops.n0 = CellBasis::dimension(family.degree);
  ops.nb = family.trace_size();
  ops.nedges = static_cast<int>(mesh.cell_edges[cell].size());
  ops.hT = mesh.cell_diameter[cell];

  const CellBasis interior(mesh, cell, family.degree);
  const GradientBasis grad = family.gradient_basis(mesh, cell);
  const QuadratureRule crule = cell_rule(mesh.cell_vertices(cell), family.cell_quadrature_degree());
  detail::check_coefficient_bounds(a, c, crule);

  ops.G = weak_gradient_matrix(mesh, cell, family);
  ops.Mg = vector_gram_matrix(grad, crule);
  ops.S = stabilizer_matrix(mesh, cell, family);

  const int ng = grad.size();
  Eigen::MatrixXd Mga = Eigen::MatrixXd::Zero(ng, ng);
  for (std::size_t q = 0; q < crule.size(); ++q) {
    Eigen::MatrixXd V(2, ng);
    for (int m = 0; m < ng; ++m) {
      const Point v = grad.value(m, crule.points[q]);
      V(0, m) = v.x;
      V(1, m) = v.y;
    }
    Mga.noalias() += crule.weights[q] * a(crule.points[q]) * V.transpose() * V;
  }

  const Eigen::MatrixXd Vi = interior.values_at(crule);
  Eigen::VectorXd wc(crule.size()), wf(crule.size());
  for (std::size_t q = 0; q < crule.size(); ++q) {
    wc[q] = crule.weights[q] * c(crule.points[q]);
    wf[q] = crule.weights[q] * f(crule.points[q]);
  }
  ops.M0 = gram_matrix(interior, crule);
  ops.b = Vi.transpose() * wf;

  ops.A = ops.G.transpose() * Mga * ops.G + ops.S;
  ops.A.topLeftCorner(ops.n0, ops.n0).noalias() += Vi.transpose() * wc.asDiagonal() * Vi;
  ops.A = 0.5 * (ops.A + ops.A.transpose().eval());  // enforce exact symmetry
  return ops;
}

/// Whole-mesh operator set plus the canonical per-edge trace Gram matrices.
struct WgOperators {
  ElementFamily family;
  std::vector<LocalOperators> cell_ops;
  std::vector<Eigen::MatrixXd> edge_mass;
  int nb = 0;
};

inline WgOperators build_operators(const Mesh& mesh, const ElementFamily& family,
                                   const ScalarField& a, const ScalarField& c,
                                   const ScalarField& f) {
  WgOperators ops;
  ops.family = family;
  ops.nb = family.trace_size();
  ops.cell_ops.resize(mesh.cell_count());
  parallel_for(mesh.cell_count(), [&](std::size_t cell) {
    ops.cell_ops[cell] = build_local_operators(mesh, static_cast<int>(cell), family, a, c, f);
  });
  ops.edge_mass.resize(mesh.edge_count());
  parallel_for(mesh.edge_count(), [&](std::size_t e) {
    const EdgeBasis trace(mesh, static_cast<int>(e), family.trace_degree());
    const QuadratureRule rule =
        edge_rule(mesh.vertices[mesh.edges[e].v0], mesh.vertices[mesh.edges[e].v1],
                  family.edge_quadrature_degree());
    ops.edge_mass[e] = gram_matrix(trace, rule);
  });
  return ops;
}

}  // namespace wg
