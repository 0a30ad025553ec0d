#include <omp.h>

#include <exception>
#include <mutex>

#include "ipvem/errors.hpp"
#include "ipvem/kernels.hpp"

namespace ipvem {
namespace {

// Runs body(i) for i in [0, n) across threads; the first exception thrown by
// any iteration is rethrown on the calling thread.
template <typename Body>
void parallel_for(int n, Body&& body) {
  std::exception_ptr error;
  std::mutex guard;
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

Exec parse_exec(std::string_view name) {
  if (name == "serial") return Exec::serial;
  if (name == "parallel" || name == "omp") return Exec::parallel;
  throw ConfigError("unknown execution policy '" + std::string(name) + "'");
}

int max_threads() { return omp_get_max_threads(); }

namespace omp {

std::vector<ElementContext> build_elements(const PolygonalMesh& mesh, const GlobalDofMap& dofs) {
  std::vector<ElementContext> out(mesh.n_cells());
  parallel_for(mesh.n_cells(), [&](int c) { out[c] = build_element(mesh, dofs, c); });
  return out;
}

std::vector<EdgeStencil> build_stencils(const PolygonalMesh& mesh, const std::vector<ElementContext>& elements,
                                        const PenaltyConfig& penalty) {
  std::vector<EdgeStencil> out(mesh.n_edges());
  parallel_for(mesh.n_edges(), [&](int e) { out[e] = detail::stencil_for_edge(mesh, elements, penalty, e); });
  return out;
}

std::vector<Eigen::VectorXd> build_loads(const std::vector<ElementContext>& elements, const ScalarField& f,
                                         int order) {
  std::vector<Eigen::VectorXd> out(elements.size());
  parallel_for(static_cast<int>(elements.size()), [&](int c) {
    const auto& e = elements[c];
    out[c] = local_load(*e.geometry, e.basis, e.projectors, f, order);
  });
  return out;
}

std::vector<MatrixEntry> matrix_entries(const GlobalDofMap& dofs, const std::vector<ElementContext>& elements,
                                        const std::vector<EdgeStencil>& stencils, const BlockWeights& w) {
  const auto off = detail::entry_offsets(elements, stencils);
  std::vector<MatrixEntry> out(off.back());
  const int ne = static_cast<int>(elements.size());
  parallel_for(ne + static_cast<int>(stencils.size()), [&](int k) {
    if (k < ne)
      detail::write_element_entries(dofs, elements[k], w, out.data() + off[k]);
    else
      detail::write_stencil_entries(dofs, stencils[k - ne], w, out.data() + off[k]);
  });
  return out;
}

std::vector<CellError> cell_errors(const std::vector<ElementContext>& elements, const Eigen::VectorXd& solution,
                                   const ManufacturedSolution& exact, int order) {
  std::vector<CellError> out(elements.size());
  parallel_for(static_cast<int>(elements.size()),
               [&](int c) { out[c] = detail::error_for_cell(elements[c], solution, exact, order); });
  return out;
}

}  // namespace omp

std::vector<ElementContext> build_elements(const PolygonalMesh& mesh, const GlobalDofMap& dofs, Exec exec) {
  return exec == Exec::serial ? serial::build_elements(mesh, dofs) : omp::build_elements(mesh, dofs);
}

std::vector<EdgeStencil> build_stencils(const PolygonalMesh& mesh, const std::vector<ElementContext>& elements,
                                        const PenaltyConfig& penalty, Exec exec) {
  return exec == Exec::serial ? serial::build_stencils(mesh, elements, penalty)
                              : omp::build_stencils(mesh, elements, penalty);
}

std::vector<Eigen::VectorXd> build_loads(const std::vector<ElementContext>& elements, const ScalarField& f, int order,
                                         Exec exec) {
  return exec == Exec::serial ? serial::build_loads(elements, f, order) : omp::build_loads(elements, f, order);
}

std::vector<MatrixEntry> matrix_entries(const GlobalDofMap& dofs, const std::vector<ElementContext>& elements,
                                        const std::vector<EdgeStencil>& stencils, const BlockWeights& w, Exec exec) {
  return exec == Exec::serial ? serial::matrix_entries(dofs, elements, stencils, w)
                              : omp::matrix_entries(dofs, elements, stencils, w);
}

std::vector<CellError> cell_errors(const std::vector<ElementContext>& elements, const Eigen::VectorXd& solution,
                                   const ManufacturedSolution& exact, int order, Exec exec) {
  return exec == Exec::serial ? serial::cell_errors(elements, solution, exact, order)
                              : omp::cell_errors(elements, solution, exact, order);
}

}  // namespace ipvem
