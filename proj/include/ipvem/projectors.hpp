#pragma once

#include <vector>

#include <Eigen/Core>

#include "ipvem/basis.hpp"
#include "ipvem/mesh.hpp"

namespace ipvem {

/// Only the lowest-order space is implemented end to end.
inline constexpr int kSupportedOrder = 2;

/// Local DoFs of V_k(K), in canonical order: vertex values (CCW), interior
/// Gauss-Lobatto values edge by edge (CCW), then interior moments
/// |K|^{-1} (m, v)_K for m in M_{k-2}(K).
struct DofLayout {
  int order = kSupportedOrder;
  int n_vertex = 0;
  int n_edge = 0;     ///< interior edge nodes, (k-1) per edge
  int n_moment = 0;   ///< dim P_{k-2}
  std::vector<Point> nodes;  ///< vertex and edge-node positions
  std::vector<int> global;   ///< local -> global DoF, empty until numbered

  int size() const { return n_vertex + n_edge + n_moment; }
  int vertex_dof(int i) const { return i; }
  int edge_dof(int edge, int node = 0) const { return n_vertex + edge * (order - 1) + node; }
  int moment_dof(int j = 0) const { return n_vertex + n_edge + j; }
};

/// Throws UnsupportedOrder unless k == 2.
DofLayout build_dof_layout(const CellGeometry& cell, int k);

/// Values of the local DoFs for one element (or restricted from a global vector).
using VirtualDofVector = Eigen::VectorXd;

/// DoFs of a polynomial given on the element's scaled monomial basis.
VirtualDofVector dofs_of_polynomial(const PolyCoeffs& c, const ScaledMonomials& basis, const CellGeometry& cell,
                                    const DofLayout& layout);

/// Projector matrices of one element. Coefficient forms map DoF vectors to
/// coefficients on M_k(K) (dim P_k rows); DoF forms are D * coefficient form.
struct ProjectorSet {
  Eigen::MatrixXd basis_dofs;  ///< D: n_dof x dim P_k, column alpha = chi(m_alpha)
  Eigen::MatrixXd h1;          ///< Pi^nabla
  Eigen::MatrixXd h1_dof;
  Eigen::MatrixXd h1_gram;     ///< G with the vertex-average row in place of row 0
  Eigen::MatrixXd h1_rhs;      ///< B with the vertex-average row in place of row 0
  Eigen::MatrixXd h2;          ///< Pi^Delta
  Eigen::MatrixXd h2_dof;
  Eigen::MatrixXd h2_gram;
  Eigen::MatrixXd h2_rhs;
  Eigen::MatrixXd l2;          ///< Pi^0
  Eigen::RowVectorXd quasi_average;       ///< DoFs -> (1/|dK|) int_dK v ds
  Eigen::MatrixXd grad_quasi_average;     ///< 2 x n_dof, DoFs -> (1/|dK|) int_dK grad v ds
};

/// Per-element polynomial integrals used by the projectors and forms.
struct ElementMoments {
  Eigen::MatrixXd mass;        ///< (m_a, m_b)_K
  Eigen::MatrixXd h1_stiff;    ///< (grad m_a, grad m_b)_K
  Eigen::MatrixXd h2_stiff;    ///< (hess m_a : hess m_b)_K
};

ElementMoments element_moments(const ScaledMonomials& basis, const CellGeometry& cell);

/// Modified elliptic projector: edge integrals replaced by Gauss-Lobatto sums
/// over vertex and edge-node DoFs, kernel closed by the vertex average.
void build_h1_projector(const CellGeometry& cell, const ScaledMonomials& basis, const DofLayout& layout,
                        const ElementMoments& moments, ProjectorSet& out);

/// H^2 projector for k = 2: a^K(v, q) from vertex values and the normal
/// derivative moments of Pi^nabla v, kernel closed by quasi-averages of v and grad v.
void build_h2_projector(const CellGeometry& cell, const ScaledMonomials& basis, const DofLayout& layout,
                        const ElementMoments& moments, ProjectorSet& out);

/// L^2 projector: the P_{k-2} moments come from the moment DoFs, the
/// remaining moments from Pi^nabla.
void build_l2_projector(const CellGeometry& cell, const ScaledMonomials& basis, const DofLayout& layout,
                        const ElementMoments& moments, ProjectorSet& out);

ProjectorSet build_projectors(const CellGeometry& cell, const ScaledMonomials& basis, const DofLayout& layout,
                              const ElementMoments& moments);

/// (1/|dK|) int_dK w ds for w given by its per-edge traces (edge i of the cell).
double quasi_average(const std::vector<PolyCoeffs>& traces, const CellGeometry& cell);

}  // namespace ipvem
