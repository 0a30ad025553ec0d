#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ipvem/quadrature.hpp"

namespace ipvem {

inline constexpr int kBoundary = -1;

/// Undirected mesh edge stored with the orientation of its left cell: the
/// loop of `left` traverses v[0] -> v[1]. `right` is kBoundary on the boundary.
struct Edge {
  std::array<int, 2> v{};
  int left = kBoundary;
  int right = kBoundary;
  bool on_boundary() const { return right == kBoundary; }
};

struct CellGeometry {
  std::vector<Point> vertices;  ///< CCW loop
  double diameter = 0.0;
  double area = 0.0;
  Point centroid = Point::Zero();
  double perimeter = 0.0;
  std::vector<double> edge_length;  ///< edge i runs vertices[i] -> vertices[i+1]
  std::vector<Point> normal;        ///< unit outward
  std::vector<Point> tangent;       ///< unit, along the CCW loop
  int n_edges() const { return static_cast<int>(vertices.size()); }
};

/// Geometry of a free-standing polygon; the loop must be CCW.
CellGeometry polygon_geometry(std::span<const Point> loop);

/// Polygonal mesh of a simply connected planar domain. Immutable once built.
class PolygonalMesh {
 public:
  /// Validates and builds edges, adjacency and geometry caches. Cells must be
  /// CCW vertex loops. Throws MeshError on any invariant violation.
  static PolygonalMesh from_cells(std::vector<Point> vertices, std::vector<std::vector<int>> cells);

  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  int n_cells() const { return static_cast<int>(cells_.size()); }
  int n_edges() const { return static_cast<int>(edges_.size()); }

  const Point& vertex(int i) const { return vertices_[i]; }
  std::span<const Point> vertices() const { return vertices_; }
  std::span<const int> cell(int c) const { return cells_[c]; }
  const Edge& edge(int e) const { return edges_[e]; }
  std::span<const Edge> edges() const { return edges_; }
  /// Global edge id of local edge i of cell c (vertex i -> vertex i+1).
  std::span<const int> cell_edges(int c) const { return cell_edges_[c]; }
  const CellGeometry& geometry(int c) const { return geometry_[c]; }

  bool boundary_vertex(int v) const { return boundary_vertex_[v]; }
  bool boundary_edge(int e) const { return edges_[e].on_boundary(); }
  /// N_K: largest number of edges of any cell.
  int max_edges_per_cell() const { return max_edges_; }
  double max_diameter() const;
  double total_area() const;
  /// Area enclosed by the boundary edge loop(s).
  double domain_area() const;

 private:
  PolygonalMesh() = default;

  std::vector<Point> vertices_;
  std::vector<std::vector<int>> cells_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> cell_edges_;
  std::vector<CellGeometry> geometry_;
  std::vector<bool> boundary_vertex_;
  int max_edges_ = 0;
};

const CellGeometry& cell_geometry(const PolygonalMesh& mesh, int cell);

/// Triangle spanned by an edge and the centroid of one incident cell.
struct VirtualTriangle {
  int edge = -1;
  int cell = -1;
  std::array<Point, 3> vertices;
  double area = 0.0;
};

/// One triangle per incident cell (left first). Throws MeshError on a zero-area triangle.
std::vector<VirtualTriangle> virtual_triangles(const PolygonalMesh& mesh, int edge);

struct MeshQualityReport {
  double min_diameter = 0.0;
  double max_diameter = 0.0;
  double min_edge_ratio = 0.0;      ///< min over cells of shortest edge / diameter
  double min_fan_aspect = 0.0;      ///< 4 sqrt(3) |T| / sum |edges|^2, 1 for equilateral
  int max_edges = 0;
  std::vector<bool> star_shaped;    ///< w.r.t. the centroid, per cell
  int non_star_shaped_cells() const;
};

MeshQualityReport quality_report(const PolygonalMesh& mesh);
/// True when every centroid fan triangle has positive signed area.
bool star_shaped_about_centroid(const CellGeometry& g);

/// n x n tiling of (0,1)^2 by axis-aligned squares.
PolygonalMesh generate_uniform_squares(int n);

struct MeshImport {
  PolygonalMesh mesh;
  std::vector<std::string> warnings;
};

/// Parses the "vem-mesh 1" text format. Clockwise cells are reversed with a
/// warning; malformed input throws ParseError.
MeshImport import_mesh(std::string_view text);
std::string export_mesh(const PolygonalMesh& mesh);

}  // namespace ipvem
