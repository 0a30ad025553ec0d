#include "ipvem/forms.hpp"

#include "ipvem/errors.hpp"

namespace ipvem {

Eigen::MatrixXd local_a_form(const CellGeometry& cell, const ElementMoments& moments, const ProjectorSet& p) {
  const int n = static_cast<int>(p.h2_dof.rows());
  const Eigen::MatrixXd r = Eigen::MatrixXd::Identity(n, n) - p.h2_dof;
  const double h = cell.diameter;
  Eigen::MatrixXd A = p.h2.transpose() * moments.h2_stiff * p.h2 + (r.transpose() * r) / (h * h);
  return 0.5 * (A + A.transpose());
}

Eigen::MatrixXd local_b_form(const ElementMoments& moments, const ProjectorSet& p) {
  const int n = static_cast<int>(p.h1_dof.rows());
  const Eigen::MatrixXd r = Eigen::MatrixXd::Identity(n, n) - p.h1_dof;
  Eigen::MatrixXd B = p.h1.transpose() * moments.h1_stiff * p.h1 + r.transpose() * r;
  return 0.5 * (B + B.transpose());
}

Eigen::VectorXd local_load(const CellGeometry& cell, const ScaledMonomials& basis, const ProjectorSet& p,
                           const ScalarField& f, int quadrature_order) {
  const TriangleRule rule = triangle_quadrature(quadrature_order);
  const Eigen::VectorXd fm = integrate_fan_vector(cell.vertices, cell.centroid, rule, basis.size(),
                                                  [&](const Point& x) { return Eigen::VectorXd(f(x) * basis.values(x)); });
  return p.l2.transpose() * fm;
}

ElementContext build_element(const PolygonalMesh& mesh, const GlobalDofMap& dofs, int cell) {
  ElementContext ctx;
  ctx.cell = cell;
  ctx.geometry = &mesh.geometry(cell);
  const CellGeometry& g = *ctx.geometry;
  ctx.basis = ScaledMonomials(g.centroid, g.diameter, dofs.order);
  ctx.layout = build_dof_layout(g, dofs.order);
  ctx.layout.global = cell_dofs(dofs, mesh, cell);
  ctx.moments = element_moments(ctx.basis, g);
  ctx.projectors = build_projectors(g, ctx.basis, ctx.layout, ctx.moments);
  ctx.a_form = local_a_form(g, ctx.moments, ctx.projectors);
  ctx.b_form = local_b_form(ctx.moments, ctx.projectors);
  return ctx;
}

double penalty_parameter(double edge_length, std::span<const double> triangle_areas, const PenaltyConfig& config,
                         int k) {
  if (!(config.a > 1.0)) throw ConfigError("penalty constant a must exceed 1");
  if (config.max_edges < 3) throw ConfigError("penalty N_K must be at least 3");
  if (triangle_areas.empty() || triangle_areas.size() > 2) throw MeshError("an edge has one or two virtual triangles");
  for (double t : triangle_areas)
    if (!(t > 0.0)) throw MeshError("degenerate virtual triangle in penalty parameter");
  const double scale = config.a * config.max_edges * k * (k - 1.0) * edge_length * edge_length;
  if (triangle_areas.size() == 2) return scale / 4.0 * (1.0 / triangle_areas[0] + 1.0 / triangle_areas[1]);
  return scale / (2.0 * triangle_areas[0]);
}

double penalty_parameter(const PolygonalMesh& mesh, int edge, const PenaltyConfig& config, int k) {
  const auto tris = virtual_triangles(mesh, edge);
  std::vector<double> areas;
  for (const auto& t : tris) areas.push_back(t.area);
  const Edge& e = mesh.edge(edge);
  return penalty_parameter((mesh.vertex(e.v[1]) - mesh.vertex(e.v[0])).norm(), areas, config, k);
}

EdgeStencil edge_stencil(const PolygonalMesh& mesh, int edge, const ElementContext& left,
                         const ElementContext* right, double lambda) {
  const Edge& e = mesh.edge(edge);
  if (left.cell != e.left || (right ? right->cell : kBoundary) != e.right)
    throw Error("edge_stencil: element contexts do not match the edge's incident cells");

  const Point a = mesh.vertex(e.v[0]);
  const Point b = mesh.vertex(e.v[1]);
  const double len = (b - a).norm();
  const Point t = (b - a) / len;
  const Point n(t.y(), -t.x());  // outward from the left cell

  EdgeStencil s;
  s.edge = edge;
  s.lambda = lambda;
  const int nl = left.layout.size();
  const int nr = right ? right->layout.size() : 0;
  const int total = nl + nr;
  s.cells.push_back(left.cell);
  s.column_offset.push_back(0);
  s.global = left.layout.global;
  if (right) {
    s.cells.push_back(right->cell);
    s.column_offset.push_back(nl);
    s.global.insert(s.global.end(), right->layout.global.begin(), right->layout.global.end());
  }

  // traces of d_n Pi^nabla and d_nn Pi^nabla at point x, as rows over one cell's DoFs
  const auto normal_row = [&](const ElementContext& c, const Point& x) -> Eigen::RowVectorXd {
    return (c.basis.gradients(x) * n).transpose() * c.projectors.h1;
  };
  const auto second_row = [&](const ElementContext& c, const Point& x) -> Eigen::RowVectorXd {
    const Eigen::MatrixX3d H = c.basis.hessians(x);
    const Eigen::VectorXd nn = H.col(0) * (n.x() * n.x()) + H.col(1) * (2.0 * n.x() * n.y()) + H.col(2) * (n.y() * n.y());
    return nn.transpose() * c.projectors.h1;
  };

  const EdgeRule gauss = gauss_legendre(2);  // exact for the product of two linear traces
  s.j1 = Eigen::MatrixXd::Zero(total, total);
  s.j2 = Eigen::MatrixXd::Zero(total, total);
  for (std::size_t g = 0; g < gauss.nodes.size(); ++g) {
    const Point x = a + gauss.nodes[g] * (b - a);
    Eigen::RowVectorXd jump(total), avg(total);
    jump.head(nl) = normal_row(left, x);
    avg.head(nl) = second_row(left, x);
    if (right) {
      jump.tail(nr) = -normal_row(*right, x);
      avg.head(nl) *= 0.5;
      avg.tail(nr) = 0.5 * second_row(*right, x);
    }
    const double w = gauss.weights[g] * len;
    s.j1 += (lambda / len) * w * jump.transpose() * jump;
    s.j2 -= w * jump.transpose() * avg;
  }
  return s;
}

}  // namespace ipvem
