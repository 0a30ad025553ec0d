#include "ipvem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "ipvem/errors.hpp"

namespace ipvem {
namespace {

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

double signed_area(std::span<const Point> loop) {
  double a = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) a += cross(loop[i], loop[(i + 1) % loop.size()]);
  return 0.5 * a;
}

bool segments_cross(const Point& a, const Point& b, const Point& c, const Point& d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

bool is_simple(std::span<const Point> loop) {
  const std::size_t m = loop.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1) continue;  // adjacent through the wrap
      if (segments_cross(loop[i], loop[(i + 1) % m], loop[j], loop[(j + 1) % m])) return false;
    }
  }
  return true;
}

double triangle_aspect(const Point& a, const Point& b, const Point& c) {
  const double area = 0.5 * cross(b - a, c - a);
  const double s = (b - a).squaredNorm() + (c - b).squaredNorm() + (a - c).squaredNorm();
  return 4.0 * std::sqrt(3.0) * area / s;
}

}  // namespace

CellGeometry polygon_geometry(std::span<const Point> loop) {
  CellGeometry g;
  g.vertices.assign(loop.begin(), loop.end());
  const std::size_t m = loop.size();
  double a2 = 0.0;
  Point c = Point::Zero();
  for (std::size_t i = 0; i < m; ++i) {
    const Point& p = loop[i];
    const Point& q = loop[(i + 1) % m];
    const double w = cross(p, q);
    a2 += w;
    c += w * (p + q);
  }
  g.area = 0.5 * a2;
  g.centroid = c / (3.0 * a2);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) g.diameter = std::max(g.diameter, (loop[i] - loop[j]).norm());
  g.edge_length.resize(m);
  g.normal.resize(m);
  g.tangent.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Point d = loop[(i + 1) % m] - loop[i];
    const double len = d.norm();
    g.edge_length[i] = len;
    g.perimeter += len;
    g.tangent[i] = d / len;
    g.normal[i] = Point(g.tangent[i].y(), -g.tangent[i].x());
  }
  return g;
}

PolygonalMesh PolygonalMesh::from_cells(std::vector<Point> vertices, std::vector<std::vector<int>> cells) {
  PolygonalMesh mesh;
  const int nv = static_cast<int>(vertices.size());
  if (cells.empty()) throw MeshError("mesh has no cells");

  std::vector<bool> used(nv, false);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& loop = cells[c];
    if (loop.size() < 3) throw MeshError("cell " + std::to_string(c) + " has fewer than 3 vertices");
    for (int v : loop) {
      if (v < 0 || v >= nv) throw MeshError("cell " + std::to_string(c) + " references vertex " + std::to_string(v));
      used[v] = true;
    }
    std::vector<int> sorted = loop;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw MeshError("cell " + std::to_string(c) + " repeats a vertex");
  }
  for (int v = 0; v < nv; ++v)
    if (!used[v]) throw MeshError("vertex " + std::to_string(v) + " is not used by any cell");

  mesh.vertices_ = std::move(vertices);
  mesh.cells_ = std::move(cells);
  const int nc = mesh.n_cells();

  mesh.geometry_.reserve(nc);
  for (int c = 0; c < nc; ++c) {
    std::vector<Point> loop;
    for (int v : mesh.cells_[c]) loop.push_back(mesh.vertices_[v]);
    if (!(signed_area(loop) > 0.0))
      throw MeshError("cell " + std::to_string(c) + " is not counter-clockwise or has zero area");
    if (!is_simple(loop)) throw MeshError("cell " + std::to_string(c) + " is not a simple polygon");
    mesh.geometry_.push_back(polygon_geometry(loop));
    mesh.max_edges_ = std::max(mesh.max_edges_, static_cast<int>(loop.size()));
  }

  // key (lo, hi) -> edge id; forward means the cell walks lo -> hi
  struct Incidence {
    int fwd = kBoundary;
    int bwd = kBoundary;
    int id = -1;
  };
  std::map<std::pair<int, int>, Incidence> table;
  std::vector<std::pair<int, int>> order;
  for (int c = 0; c < nc; ++c) {
    const auto& loop = mesh.cells_[c];
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const int a = loop[i];
      const int b = loop[(i + 1) % loop.size()];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = table.try_emplace({key.first, key.second});
      if (inserted) order.emplace_back(key.first, key.second);
      int& slot = (a < b) ? it->second.fwd : it->second.bwd;
      if (slot != kBoundary)
        throw MeshError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                        ") is traversed twice in the same direction");
      slot = c;
    }
  }
  mesh.edges_.reserve(order.size());
  for (const auto& key : order) {
    Incidence& inc = table[key];
    Edge e;
    if (inc.fwd != kBoundary) {
      e.v = {key.first, key.second};
      e.left = inc.fwd;
      e.right = inc.bwd;
    } else {
      e.v = {key.second, key.first};
      e.left = inc.bwd;
      e.right = kBoundary;
    }
    inc.id = static_cast<int>(mesh.edges_.size());
    mesh.edges_.push_back(e);
  }
  mesh.cell_edges_.resize(nc);
  for (int c = 0; c < nc; ++c) {
    const auto& loop = mesh.cells_[c];
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const auto key = std::minmax(loop[i], loop[(i + 1) % loop.size()]);
      mesh.cell_edges_[c].push_back(table[{key.first, key.second}].id);
    }
  }

  mesh.boundary_vertex_.assign(nv, false);
  for (const Edge& e : mesh.edges_) {
    if (e.on_boundary()) mesh.boundary_vertex_[e.v[0]] = mesh.boundary_vertex_[e.v[1]] = true;
  }

  const long euler = static_cast<long>(nv) - mesh.n_edges() + nc;
  if (euler != 1)
    throw MeshError("Euler characteristic V - E + F = " + std::to_string(euler) +
                    ", expected 1 for a simply connected domain");

  const double total = mesh.total_area();
  const double domain = mesh.domain_area();
  if (std::abs(total - domain) > 1e-12 * std::abs(domain))
    throw MeshError("cell areas do not tile the domain");
  return mesh;
}

double PolygonalMesh::max_diameter() const {
  double h = 0.0;
  for (const auto& g : geometry_) h = std::max(h, g.diameter);
  return h;
}

double PolygonalMesh::total_area() const {
  double a = 0.0;
  for (const auto& g : geometry_) a += g.area;
  return a;
}

double PolygonalMesh::domain_area() const {
  double a = 0.0;
  for (const Edge& e : edges_)
    if (e.on_boundary()) a += cross(vertices_[e.v[0]], vertices_[e.v[1]]);
  return 0.5 * a;
}

const CellGeometry& cell_geometry(const PolygonalMesh& mesh, int cell) { return mesh.geometry(cell); }

std::vector<VirtualTriangle> virtual_triangles(const PolygonalMesh& mesh, int edge) {
  const Edge& e = mesh.edge(edge);
  std::vector<VirtualTriangle> out;
  for (int c : {e.left, e.right}) {
    if (c == kBoundary) continue;
    VirtualTriangle t;
    t.edge = edge;
    t.cell = c;
    const Point& apex = mesh.geometry(c).centroid;
    // keep the triangle CCW: the right cell walks the edge backwards
    const Point a = mesh.vertex(c == e.left ? e.v[0] : e.v[1]);
    const Point b = mesh.vertex(c == e.left ? e.v[1] : e.v[0]);
    t.vertices = {a, b, apex};
    t.area = 0.5 * cross(b - a, apex - a);
    if (!(t.area > 0.0))
      throw MeshError("virtual triangle of edge " + std::to_string(edge) + " in cell " + std::to_string(c) +
                      " has non-positive area");
    out.push_back(t);
  }
  return out;
}

bool star_shaped_about_centroid(const CellGeometry& g) {
  const int m = g.n_edges();
  for (int i = 0; i < m; ++i) {
    const Point& a = g.vertices[i];
    const Point& b = g.vertices[(i + 1) % m];
    if (!(cross(a - g.centroid, b - g.centroid) > 0.0)) return false;
  }
  return true;
}

int MeshQualityReport::non_star_shaped_cells() const {
  return static_cast<int>(std::count(star_shaped.begin(), star_shaped.end(), false));
}

MeshQualityReport quality_report(const PolygonalMesh& mesh) {
  MeshQualityReport r;
  r.min_diameter = std::numeric_limits<double>::infinity();
  r.min_edge_ratio = std::numeric_limits<double>::infinity();
  r.min_fan_aspect = std::numeric_limits<double>::infinity();
  r.max_edges = mesh.max_edges_per_cell();
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellGeometry& g = mesh.geometry(c);
    r.min_diameter = std::min(r.min_diameter, g.diameter);
    r.max_diameter = std::max(r.max_diameter, g.diameter);
    const double shortest = *std::min_element(g.edge_length.begin(), g.edge_length.end());
    r.min_edge_ratio = std::min(r.min_edge_ratio, shortest / g.diameter);
    for (int i = 0; i < g.n_edges(); ++i)
      r.min_fan_aspect =
          std::min(r.min_fan_aspect, triangle_aspect(g.vertices[i], g.vertices[(i + 1) % g.n_edges()], g.centroid));
    r.star_shaped.push_back(star_shaped_about_centroid(g));
  }
  return r;
}

PolygonalMesh generate_uniform_squares(int n) {
  if (n < 1) throw MeshError("generate_uniform_squares: n must be >= 1");
  std::vector<Point> vertices;
  vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
  std::vector<std::vector<int>> cells;
  cells.reserve(n * n);
  const auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
  return PolygonalMesh::from_cells(std::move(vertices), std::move(cells));
}

}  // namespace ipvem
