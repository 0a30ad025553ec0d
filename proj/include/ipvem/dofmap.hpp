#pragma once

#include <vector>

#include "ipvem/mesh.hpp"

namespace ipvem {

/// Global numbering: vertices, then edge nodes edge by edge, then cell moments.
struct GlobalDofMap {
  int order = 2;
  int n_vertex_dofs = 0;
  int n_edge_dofs = 0;
  int n_cell_dofs = 0;
  std::vector<bool> boundary;   ///< per global DoF
  std::vector<int> free_index;  ///< global -> index among free DoFs, -1 on the boundary
  int n_free = 0;

  int size() const { return n_vertex_dofs + n_edge_dofs + n_cell_dofs; }
  int vertex(int v) const { return v; }
  int edge(int e, int node = 0) const { return n_vertex_dofs + e * (order - 1) + node; }
  int cell(int c, int j = 0) const { return n_vertex_dofs + n_edge_dofs + c * (order - 1) * order / 2 + j; }
  int n_boundary() const { return size() - n_free; }
};

/// Deterministic numbering; boundary vertices and boundary-edge nodes are constrained.
GlobalDofMap number_dofs(const PolygonalMesh& mesh, int k);

/// Local -> global map of one cell in canonical local order.
std::vector<int> cell_dofs(const GlobalDofMap& map, const PolygonalMesh& mesh, int cell);

}  // namespace ipvem
