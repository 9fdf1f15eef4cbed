// Monolithic weak Galerkin reference solver: global dof map with single-valued
// edge traces, sparse symmetric assembly and a direct SPD solve, Dirichlet
// trace dofs eliminated with right-hand-side lifting.
#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "wg/element.hpp"
#include "wg/exceptions.hpp"
#include "wg/mesh.hpp"

namespace wg {

/// Interior dofs cell-major first, then trace dofs edge-major. Trace dofs on
/// boundary edges carry the Dirichlet mask.
struct DofMap {
  int n0 = 0, nb = 0;
  int ncells = 0, nedges = 0;
  std::vector<std::uint8_t> edge_fixed;
  std::vector<int> free_index;  // dof -> position among free dofs, -1 if fixed
  std::vector<int> free_dofs;

  int cell_offset(int c) const { return c * n0; }
  int edge_offset(int e) const { return ncells * n0 + e * nb; }
  int total() const { return ncells * n0 + nedges * nb; }
  int free_count() const { return static_cast<int>(free_dofs.size()); }

  static DofMap build(const Mesh& mesh, const ElementFamily& family) {
    DofMap map;
    map.n0 = CellBasis::dimension(family.degree);
    map.nb = family.trace_size();
    map.ncells = mesh.cell_count();
    map.nedges = mesh.edge_count();
    map.edge_fixed.resize(mesh.edge_count());
    for (int e = 0; e < mesh.edge_count(); ++e) map.edge_fixed[e] = mesh.is_boundary_edge(e);
    map.free_index.assign(map.total(), -1);
    for (int c = 0; c < map.ncells; ++c)
      for (int i = 0; i < map.n0; ++i) {
        map.free_index[map.cell_offset(c) + i] = static_cast<int>(map.free_dofs.size());
        map.free_dofs.push_back(map.cell_offset(c) + i);
      }
    for (int e = 0; e < map.nedges; ++e) {
      if (map.edge_fixed[e]) continue;
      for (int i = 0; i < map.nb; ++i) {
        map.free_index[map.edge_offset(e) + i] = static_cast<int>(map.free_dofs.size());
        map.free_dofs.push_back(map.edge_offset(e) + i);
      }
    }
    return map;
  }
};

struct GlobalSystem {
  ElementFamily family;
  DofMap dofs;
  Eigen::SparseMatrix<double> A;  // all dofs, symmetric
  Eigen::VectorXd b;              // load moments, all dofs
  Eigen::VectorXd dirichlet;      // Q_b g on fixed trace dofs, zero elsewhere
};

/// Scatter the local operators into the global system and project the
/// Dirichlet data onto the boundary trace dofs.
inline GlobalSystem assemble(const Mesh& mesh, const WgOperators& ops, const ScalarField& g) {
  GlobalSystem sys;
  sys.family = ops.family;
  sys.dofs = DofMap::build(mesh, ops.family);
  const DofMap& map = sys.dofs;
  sys.b = Eigen::VectorXd::Zero(map.total());
  sys.dirichlet = Eigen::VectorXd::Zero(map.total());

  std::vector<Eigen::Triplet<double>> trips;
  for (int c = 0; c < mesh.cell_count(); ++c) {
    const LocalOperators& lo = ops.cell_ops[c];
    std::vector<int> gidx(lo.local_dim());
    for (int i = 0; i < lo.n0; ++i) gidx[i] = map.cell_offset(c) + i;
    for (int slot = 0; slot < lo.nedges; ++slot) {
      const int e = mesh.cell_edges[c][slot];
      for (int i = 0; i < lo.nb; ++i) gidx[lo.edge_offset(slot) + i] = map.edge_offset(e) + i;
    }
    for (int i = 0; i < lo.local_dim(); ++i) {
      sys.b[gidx[i]] += i < lo.n0 ? lo.b[i] : 0.0;
      for (int j = 0; j < lo.local_dim(); ++j)
        if (lo.A(i, j) != 0.0) trips.emplace_back(gidx[i], gidx[j], lo.A(i, j));
    }
  }
  sys.A.resize(map.total(), map.total());
  sys.A.setFromTriplets(trips.begin(), trips.end());

  for (int e = 0; e < mesh.edge_count(); ++e) {
    if (!map.edge_fixed[e]) continue;
    const Eigen::VectorXd ge = project_onto_edge(mesh, e, ops.family.trace_degree(), g);
    sys.dirichlet.segment(map.edge_offset(e), map.nb) = ge;
  }
  return sys;
}

inline GlobalSystem assemble(const Mesh& mesh, const ElementFamily& family, const ScalarField& a,
                             const ScalarField& c, const ScalarField& f, const ScalarField& g) {
  return assemble(mesh, build_operators(mesh, family, a, c, f), g);
}

/// Reduce to free dofs, factor, and back-substitute. One sweep of iterative
/// refinement keeps the relative residual at the spec'd 1e-10.
inline WeakFunction solve(const GlobalSystem& sys) {
  const DofMap& map = sys.dofs;
  const int nf = map.free_count();

  Eigen::SparseMatrix<double> Aff(nf, nf);
  {
    std::vector<Eigen::Triplet<double>> trips;
    for (int k = 0; k < sys.A.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(sys.A, k); it; ++it) {
        const int fi = map.free_index[it.row()], fj = map.free_index[it.col()];
        if (fi >= 0 && fj >= 0) trips.emplace_back(fi, fj, it.value());
      }
    Aff.setFromTriplets(trips.begin(), trips.end());
  }
  Eigen::VectorXd lifted = sys.b - sys.A * sys.dirichlet;
  Eigen::VectorXd rhs(nf);
  for (int i = 0; i < nf; ++i) rhs[i] = lifted[map.free_dofs[i]];

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(Aff);
  if (ldlt.info() != Eigen::Success)
    throw SolverError("solve: sparse factorization failed (system not SPD?)");
  Eigen::VectorXd x = ldlt.solve(rhs);
  const double scale = std::max(rhs.norm(), 1e-300);
  for (int sweep = 0; sweep < 2 && (rhs - Aff * x).norm() > 1e-10 * scale; ++sweep)
    x += ldlt.solve(rhs - Aff * x);
  if ((rhs - Aff * x).norm() > 1e-10 * scale)
    throw SolverError("solve: residual exceeds 1e-10 of the right-hand side");

  Eigen::VectorXd full = sys.dirichlet;
  for (int i = 0; i < nf; ++i) full[map.free_dofs[i]] = x[i];

  WeakFunction u;
  u.family = sys.family;
  u.cell.resize(map.ncells);
  u.edge.resize(map.nedges);
  for (int c = 0; c < map.ncells; ++c) u.cell[c] = full.segment(map.cell_offset(c), map.n0);
  for (int e = 0; e < map.nedges; ++e) u.edge[e] = full.segment(map.edge_offset(e), map.nb);
  return u;
}

}  // namespace wg
