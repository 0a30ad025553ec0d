#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ipvem/basis.hpp"
#include "ipvem/dofmap.hpp"
#include "ipvem/mesh.hpp"
#include "ipvem/projectors.hpp"

namespace ipvem {

using ScalarField = std::function<double(const Point&)>;

/// Everything the assembly needs from one cell, computed once per mesh.
struct ElementContext {
  int cell = -1;
  const CellGeometry* geometry = nullptr;
  ScaledMonomials basis;
  DofLayout layout;
  ElementMoments moments;
  ProjectorSet projectors;
  Eigen::MatrixXd a_form;  ///< a_h^K
  Eigen::MatrixXd b_form;  ///< b_h^K
};

/// a^K(Pi^D v, Pi^D w) + h_K^{-2} chi(v - Pi^D v) . chi(w - Pi^D w)
Eigen::MatrixXd local_a_form(const CellGeometry& cell, const ElementMoments& moments, const ProjectorSet& p);

/// (grad Pi^N v, grad Pi^N w) + chi(v - Pi^N v) . chi(w - Pi^N w)
Eigen::MatrixXd local_b_form(const ElementMoments& moments, const ProjectorSet& p);

/// F_K[i] = int_K f Pi^0 e_i, by centroid-fan quadrature of the given order.
Eigen::VectorXd local_load(const CellGeometry& cell, const ScaledMonomials& basis, const ProjectorSet& p,
                           const ScalarField& f, int quadrature_order = 8);

/// Geometry, basis, layout (with global numbering), projectors and local forms of one cell.
ElementContext build_element(const PolygonalMesh& mesh, const GlobalDofMap& dofs, int cell);

struct PenaltyConfig {
  double a = 2.0;      ///< must exceed 1
  int max_edges = 0;   ///< N_K over the whole mesh
};

/// Automated penalty: a N_K k(k-1) h_e^2 / 4 (1/|T+| + 1/|T-|) on interior
/// edges and a N_K k(k-1) h_e^2 / (2 |T+|) on boundary edges.
double penalty_parameter(double edge_length, std::span<const double> triangle_areas, const PenaltyConfig& config,
                         int k = kSupportedOrder);
double penalty_parameter(const PolygonalMesh& mesh, int edge, const PenaltyConfig& config, int k = kSupportedOrder);

/// Interior-penalty coupling of one edge over the stacked DoFs of its
/// incident cells (left cell first). All traces are of Pi^nabla.
struct EdgeStencil {
  int edge = -1;
  double lambda = 0.0;
  std::vector<int> cells;          ///< left, then right when interior
  std::vector<int> column_offset;  ///< first stacked column of each cell
  std::vector<int> global;         ///< stacked column -> global DoF
  Eigen::MatrixXd j1;              ///< (lambda/|e|) int [d_n v][d_n w]
  Eigen::MatrixXd j2;              ///< -int {d_nn v}[d_n w], as (row w, column v)
  Eigen::MatrixXd j3() const { return j2.transpose(); }
  Eigen::MatrixXd combined() const { return j1 + j2 + j2.transpose(); }
};

/// `left` and `right` are the contexts of the edge's incident cells; pass
/// nullptr for `right` on boundary edges.
EdgeStencil edge_stencil(const PolygonalMesh& mesh, int edge, const ElementContext& left,
                         const ElementContext* right, double lambda);

}  // namespace ipvem
