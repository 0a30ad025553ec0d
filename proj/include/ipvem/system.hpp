#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "ipvem/dofmap.hpp"
#include "ipvem/exec.hpp"
#include "ipvem/forms.hpp"
#include "ipvem/kernels.hpp"

namespace ipvem {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct SolverDiagnostics {
  std::string method;             ///< "ldlt" or "cg"
  bool factorized = false;        ///< LDLT succeeded with positive pivots
  double min_pivot = 0.0;
  double relative_residual = 0.0;
  int iterations = 0;
};

/// eps^2 (A + J) + B restricted to the free DoFs, with its load vector.
struct SparseSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  double eps = 1.0;
  SolverDiagnostics diagnostics;
};

struct DiscreteSolution {
  Eigen::VectorXd values;  ///< full DoF vector, zero on the boundary
  double eps = 1.0;
  SolverDiagnostics diagnostics;
};

/// Sums duplicate (row, col) triplets in the order given, dropping eliminated entries.
SparseMatrix assemble_matrix(int n, const std::vector<MatrixEntry>& entries);

/// Restricts a full-length vector to the free DoFs.
Eigen::VectorXd restrict_to_free(const GlobalDofMap& dofs, const Eigen::VectorXd& full);
Eigen::VectorXd extend_from_free(const GlobalDofMap& dofs, const Eigen::VectorXd& free);

/// Scatters per-cell load vectors into a free-DoF load vector.
Eigen::VectorXd assemble_load(const GlobalDofMap& dofs, const std::vector<ElementContext>& elements,
                              const std::vector<Eigen::VectorXd>& loads);

SparseSystem assemble(const GlobalDofMap& dofs, const std::vector<ElementContext>& elements,
                      const std::vector<EdgeStencil>& stencils, const std::vector<Eigen::VectorXd>& loads, double eps,
                      Exec exec = Exec::parallel);

/// Full-DoF matrix of a weighted combination of blocks, without eliminating boundary DoFs.
SparseMatrix assemble_full(const GlobalDofMap& dofs, const std::vector<ElementContext>& elements,
                           const std::vector<EdgeStencil>& stencils, double weight_a, double weight_j,
                           double weight_b, bool j1_only = false);

/// ||M x - b|| / ||b|| with the residual accumulated in extended precision.
double relative_residual(const SparseMatrix& m, const Eigen::VectorXd& x, const Eigen::VectorXd& b);

struct SolveOptions {
  double tolerance = 1e-10;
  bool force_cg = false;
  int max_cg_iterations = 0;  ///< 0 means 10 * n
};

/// Solves M x = b for symmetric positive definite M. LDLT when the pivots are
/// positive, otherwise Jacobi-preconditioned CG. Throws SingularSystem when
/// neither path works and SolveError when the residual target is missed.
Eigen::VectorXd solve_spd(const SparseMatrix& m, const Eigen::VectorXd& b, const SolveOptions& opts,
                          SolverDiagnostics& diag);

DiscreteSolution solve(const GlobalDofMap& dofs, SparseSystem& system, const SolveOptions& opts = {});

/// "row col value" lines, 0-based, one per stored entry.
std::string export_coo(const SparseMatrix& m);

}  // namespace ipvem
