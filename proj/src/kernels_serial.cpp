#include "ipvem/kernels.hpp"

#include "ipvem/errors.hpp"

namespace ipvem {
namespace detail {

EdgeStencil stencil_for_edge(const PolygonalMesh& mesh, const std::vector<ElementContext>& elements,
                             const PenaltyConfig& penalty, int edge) {
  const Edge& e = mesh.edge(edge);
  const double lambda = penalty_parameter(mesh, edge, penalty, elements[e.left].layout.order);
  const ElementContext* right = e.on_boundary() ? nullptr : &elements[e.right];
  return edge_stencil(mesh, edge, elements[e.left], right, lambda);
}

CellError error_for_cell(const ElementContext& element, const Eigen::VectorXd& solution,
                         const ManufacturedSolution& exact, int order) {
  const int n = element.layout.size();
  Eigen::VectorXd local(n);
  for (int i = 0; i < n; ++i) local[i] = solution[element.layout.global[i]];
  const Eigen::VectorXd c1 = element.projectors.h1 * local;
  const Eigen::VectorXd c2 = element.projectors.h2 * local;
  const CellGeometry& g = *element.geometry;
  const TriangleRule rule = triangle_quadrature(order);
  const Eigen::VectorXd sums = integrate_fan_vector(g.vertices, g.centroid, rule, 2, [&](const Point& x) {
    const Point du = exact.gradient(x) - element.basis.gradients(x).transpose() * c1;
    const Eigen::Vector3d d2 = exact.hessian(x) - element.basis.hessians(x).transpose() * c2;
    Eigen::VectorXd r(2);
    r[0] = du.squaredNorm();
    r[1] = d2[0] * d2[0] + 2.0 * d2[1] * d2[1] + d2[2] * d2[2];
    return r;
  });
  return {sums[0], sums[1]};
}

std::vector<std::size_t> entry_offsets(const std::vector<ElementContext>& elements,
                                       const std::vector<EdgeStencil>& stencils) {
  std::vector<std::size_t> off(elements.size() + stencils.size() + 1, 0);
  std::size_t k = 0;
  for (const auto& e : elements) {
    off[k + 1] = off[k] + static_cast<std::size_t>(e.layout.size()) * e.layout.size();
    ++k;
  }
  for (const auto& s : stencils) {
    off[k + 1] = off[k] + s.global.size() * s.global.size();
    ++k;
  }
  return off;
}

void write_element_entries(const GlobalDofMap& dofs, const ElementContext& e, const BlockWeights& w,
                           MatrixEntry* out) {
  const int n = e.layout.size();
  for (int j = 0; j < n; ++j) {
    const int cj = dofs.free_index[e.layout.global[j]];
    for (int i = 0; i < n; ++i) {
      const int ri = dofs.free_index[e.layout.global[i]];
      const bool keep = ri >= 0 && cj >= 0;
      *out++ = {keep ? ri : -1, keep ? cj : -1, w.a * e.a_form(i, j) + w.b * e.b_form(i, j)};
    }
  }
}

void write_stencil_entries(const GlobalDofMap& dofs, const EdgeStencil& s, const BlockWeights& w, MatrixEntry* out) {
  const int n = static_cast<int>(s.global.size());
  const Eigen::MatrixXd block = w.j1_only ? s.j1 : s.combined();
  for (int j = 0; j < n; ++j) {
    const int cj = dofs.free_index[s.global[j]];
    for (int i = 0; i < n; ++i) {
      const int ri = dofs.free_index[s.global[i]];
      const bool keep = ri >= 0 && cj >= 0;
      *out++ = {keep ? ri : -1, keep ? cj : -1, w.j * block(i, j)};
    }
  }
}

}  // namespace detail

namespace serial {

std::vector<ElementContext> build_elements(const PolygonalMesh& mesh, const GlobalDofMap& dofs) {
  std::vector<ElementContext> out(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) out[c] = build_element(mesh, dofs, c);
  return out;
}

std::vector<EdgeStencil> build_stencils(const PolygonalMesh& mesh, const std::vector<ElementContext>& elements,
                                        const PenaltyConfig& penalty) {
  std::vector<EdgeStencil> out(mesh.n_edges());
  for (int e = 0; e < mesh.n_edges(); ++e) out[e] = detail::stencil_for_edge(mesh, elements, penalty, e);
  return out;
}

std::vector<Eigen::VectorXd> build_loads(const std::vector<ElementContext>& elements, const ScalarField& f,
                                         int order) {
  std::vector<Eigen::VectorXd> out(elements.size());
  for (std::size_t c = 0; c < elements.size(); ++c) {
    const auto& e = elements[c];
    out[c] = local_load(*e.geometry, e.basis, e.projectors, f, order);
  }
  return out;
}

std::vector<MatrixEntry> matrix_entries(const GlobalDofMap& dofs, const std::vector<ElementContext>& elements,
                                        const std::vector<EdgeStencil>& stencils, const BlockWeights& w) {
  const auto off = detail::entry_offsets(elements, stencils);
  std::vector<MatrixEntry> out(off.back());
  for (std::size_t c = 0; c < elements.size(); ++c)
    detail::write_element_entries(dofs, elements[c], w, out.data() + off[c]);
  for (std::size_t s = 0; s < stencils.size(); ++s)
    detail::write_stencil_entries(dofs, stencils[s], w, out.data() + off[elements.size() + s]);
  return out;
}

std::vector<CellError> cell_errors(const std::vector<ElementContext>& elements, const Eigen::VectorXd& solution,
                                   const ManufacturedSolution& exact, int order) {
  std::vector<CellError> out(elements.size());
  for (std::size_t c = 0; c < elements.size(); ++c) out[c] = detail::error_for_cell(elements[c], solution, exact, order);
  return out;
}

}  // namespace serial
}  // namespace ipvem
