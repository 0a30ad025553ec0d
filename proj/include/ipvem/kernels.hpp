#pragma once

#include <vector>

#include <Eigen/Core>

#include "ipvem/dofmap.hpp"
#include "ipvem/exec.hpp"
#include "ipvem/forms.hpp"
#include "ipvem/manufactured.hpp"

namespace ipvem {

/// Squared broken-seminorm error contributions of one cell.
struct CellError {
  double h1_sq = 0.0;  ///< |u - Pi^nabla u_h|_{1,K}^2
  double h2_sq = 0.0;  ///< |u - Pi^Delta u_h|_{2,K}^2
};

/// Row/column already mapped to free DoF indices; -1 marks an eliminated entry.
struct MatrixEntry {
  int row;
  int col;
  double value;
};

/// Scale factors of each block family in the assembled matrix.
struct BlockWeights {
  double a = 1.0;  ///< a_h
  double j = 1.0;  ///< J1 + J2 + J3
  double b = 1.0;  ///< b_h
  bool j1_only = false;
};

// Each kernel maps items (cells or edges) independently; outputs are stored
// per item, so serial and parallel variants produce identical results.
namespace serial {
std::vector<ElementContext> build_elements(const PolygonalMesh& mesh, const GlobalDofMap& dofs);
std::vector<EdgeStencil> build_stencils(const PolygonalMesh& mesh, const std::vector<ElementContext>& elements,
                                        const PenaltyConfig& penalty);
std::vector<Eigen::VectorXd> build_loads(const std::vector<ElementContext>& elements, const ScalarField& f, int order);
std::vector<MatrixEntry> matrix_entries(const GlobalDofMap& dofs, const std::vector<ElementContext>& elements,
                                        const std::vector<EdgeStencil>& stencils, const BlockWeights& w);
std::vector<CellError> cell_errors(const std::vector<ElementContext>& elements, const Eigen::VectorXd& solution,
                                   const ManufacturedSolution& exact, int order);
}  // namespace serial

namespace omp {
std::vector<ElementContext> build_elements(const PolygonalMesh& mesh, const GlobalDofMap& dofs);
std::vector<EdgeStencil> build_stencils(const PolygonalMesh& mesh, const std::vector<ElementContext>& elements,
                                        const PenaltyConfig& penalty);
std::vector<Eigen::VectorXd> build_loads(const std::vector<ElementContext>& elements, const ScalarField& f, int order);
std::vector<MatrixEntry> matrix_entries(const GlobalDofMap& dofs, const std::vector<ElementContext>& elements,
                                        const std::vector<EdgeStencil>& stencils, const BlockWeights& w);
std::vector<CellError> cell_errors(const std::vector<ElementContext>& elements, const Eigen::VectorXd& solution,
                                   const ManufacturedSolution& exact, int order);
}  // namespace omp

std::vector<ElementContext> build_elements(const PolygonalMesh& mesh, const GlobalDofMap& dofs, Exec exec);
std::vector<EdgeStencil> build_stencils(const PolygonalMesh& mesh, const std::vector<ElementContext>& elements,
                                        const PenaltyConfig& penalty, Exec exec);
std::vector<Eigen::VectorXd> build_loads(const std::vector<ElementContext>& elements, const ScalarField& f, int order,
                                         Exec exec);
std::vector<MatrixEntry> matrix_entries(const GlobalDofMap& dofs, const std::vector<ElementContext>& elements,
                                        const std::vector<EdgeStencil>& stencils, const BlockWeights& w, Exec exec);
std::vector<CellError> cell_errors(const std::vector<ElementContext>& elements, const Eigen::VectorXd& solution,
                                   const ManufacturedSolution& exact, int order, Exec exec);

/// Per-item work shared by both variants.
namespace detail {
/// Elements are looked up by cell id, so `elements` must be indexed by cell.
EdgeStencil stencil_for_edge(const PolygonalMesh& mesh, const std::vector<ElementContext>& elements,
                             const PenaltyConfig& penalty, int edge);
CellError error_for_cell(const ElementContext& element, const Eigen::VectorXd& solution,
                         const ManufacturedSolution& exact, int order);
/// Offsets of each element's and each stencil's entry block in the flat entry array.
std::vector<std::size_t> entry_offsets(const std::vector<ElementContext>& elements,
                                       const std::vector<EdgeStencil>& stencils);
void write_element_entries(const GlobalDofMap& dofs, const ElementContext& e, const BlockWeights& w,
                           MatrixEntry* out);
void write_stencil_entries(const GlobalDofMap& dofs, const EdgeStencil& s, const BlockWeights& w, MatrixEntry* out);
}  // namespace detail

}  // namespace ipvem
