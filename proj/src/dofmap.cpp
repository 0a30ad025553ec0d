#include "ipvem/dofmap.hpp"

#include "ipvem/errors.hpp"
#include "ipvem/projectors.hpp"

namespace ipvem {

GlobalDofMap number_dofs(const PolygonalMesh& mesh, int k) {
  if (k != kSupportedOrder) throw UnsupportedOrder("number_dofs: only k = 2 is implemented");
  GlobalDofMap map;
  map.order = k;
  map.n_vertex_dofs = mesh.n_vertices();
  map.n_edge_dofs = (k - 1) * mesh.n_edges();
  map.n_cell_dofs = (k - 1) * k / 2 * mesh.n_cells();
  map.boundary.assign(map.size(), false);
  for (int v = 0; v < mesh.n_vertices(); ++v) map.boundary[map.vertex(v)] = mesh.boundary_vertex(v);
  for (int e = 0; e < mesh.n_edges(); ++e)
    for (int j = 0; j < k - 1; ++j) map.boundary[map.edge(e, j)] = mesh.boundary_edge(e);
  map.free_index.assign(map.size(), -1);
  for (int i = 0; i < map.size(); ++i)
    if (!map.boundary[i]) map.free_index[i] = map.n_free++;
  return map;
}

std::vector<int> cell_dofs(const GlobalDofMap& map, const PolygonalMesh& mesh, int cell) {
  const auto loop = mesh.cell(cell);
  const auto edges = mesh.cell_edges(cell);
  std::vector<int> g;
  for (int v : loop) g.push_back(map.vertex(v));
  // Gauss-Lobatto interior nodes of an edge are listed along the cell's own walk
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const bool forward = mesh.edge(edges[i]).v[0] == loop[i];
    for (int j = 0; j < map.order - 1; ++j)
      g.push_back(map.edge(edges[i], forward ? j : map.order - 2 - j));
  }
  const int n_moment = (map.order - 1) * map.order / 2;
  for (int j = 0; j < n_moment; ++j) g.push_back(map.cell(cell, j));
  return g;
}

}  // namespace ipvem
