#include "ipvem/system.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "ipvem/errors.hpp"

namespace ipvem {

SparseMatrix assemble_matrix(int n, const std::vector<MatrixEntry>& entries) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.row < 0 || e.col < 0) continue;
    if (e.row >= n || e.col >= n) throw Error("matrix entry outside the system dimension");
    triplets.emplace_back(e.row, e.col, e.value);
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

Eigen::VectorXd restrict_to_free(const GlobalDofMap& dofs, const Eigen::VectorXd& full) {
  if (full.size() != dofs.size()) throw Error("vector length does not match the DoF map");
  Eigen::VectorXd out(dofs.n_free);
  for (int i = 0; i < dofs.size(); ++i)
    if (dofs.free_index[i] >= 0) out[dofs.free_index[i]] = full[i];
  return out;
}

Eigen::VectorXd extend_from_free(const GlobalDofMap& dofs, const Eigen::VectorXd& free) {
  if (free.size() != dofs.n_free) throw Error("vector length does not match the free DoF count");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dofs.size());
  for (int i = 0; i < dofs.size(); ++i)
    if (dofs.free_index[i] >= 0) out[i] = free[dofs.free_index[i]];
  return out;
}

Eigen::VectorXd assemble_load(const GlobalDofMap& dofs, const std::vector<ElementContext>& elements,
                              const std::vector<Eigen::VectorXd>& loads) {
  if (loads.size() != elements.size()) throw Error("one load vector per element is required");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dofs.n_free);
  for (std::size_t c = 0; c < elements.size(); ++c) {
    const auto& global = elements[c].layout.global;
    if (loads[c].size() != static_cast<Eigen::Index>(global.size())) throw Error("load vector size mismatch");
    for (std::size_t i = 0; i < global.size(); ++i) {
      const int r = dofs.free_index[global[i]];
      if (r >= 0) rhs[r] += loads[c][i];
    }
  }
  return rhs;
}

SparseSystem assemble(const GlobalDofMap& dofs, const std::vector<ElementContext>& elements,
                      const std::vector<EdgeStencil>& stencils, const std::vector<Eigen::VectorXd>& loads, double eps,
                      Exec exec) {
  SparseSystem s;
  s.eps = eps;
  const double e2 = eps * eps;
  const SparseMatrix raw =
      assemble_matrix(dofs.n_free, matrix_entries(dofs, elements, stencils, {e2, e2, 1.0, false}, exec));
  s.matrix = 0.5 * (raw + SparseMatrix(raw.transpose()));
  s.matrix.makeCompressed();
  s.rhs = assemble_load(dofs, elements, loads);
  return s;
}

SparseMatrix assemble_full(const GlobalDofMap& dofs, const std::vector<ElementContext>& elements,
                           const std::vector<EdgeStencil>& stencils, double weight_a, double weight_j,
                           double weight_b, bool j1_only) {
  GlobalDofMap all = dofs;
  all.n_free = all.size();
  for (int i = 0; i < all.size(); ++i) all.free_index[i] = i;
  return assemble_matrix(all.n_free,
                         serial::matrix_entries(all, elements, stencils, {weight_a, weight_j, weight_b, j1_only}));
}

namespace {

// r = M x - b accumulated in extended precision; the double-precision
// residual of a well-solved stiff system is dominated by its own rounding.
Eigen::VectorXd residual(const SparseMatrix& m, const Eigen::VectorXd& x, const Eigen::VectorXd& b, double& norm) {
  std::vector<long double> r(b.size());
  for (Eigen::Index i = 0; i < b.size(); ++i) r[i] = -static_cast<long double>(b[i]);
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      r[it.row()] += static_cast<long double>(it.value()) * static_cast<long double>(x[it.col()]);
  long double sq = 0;
  Eigen::VectorXd out(b.size());
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    sq += r[i] * r[i];
    out[i] = static_cast<double>(r[i]);
  }
  norm = static_cast<double>(std::sqrt(sq));
  return out;
}

}  // namespace

double relative_residual(const SparseMatrix& m, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  double norm = 0;
  residual(m, x, b, norm);
  const double bnorm = b.norm();
  return bnorm > 0 ? norm / bnorm : norm;
}

Eigen::VectorXd solve_spd(const SparseMatrix& m, const Eigen::VectorXd& b, const SolveOptions& opts,
                          SolverDiagnostics& diag) {
  if (m.rows() != m.cols() || m.rows() != b.size()) throw Error("system dimensions do not match");
  diag = {};
  const double bnorm = b.norm();
  if (b.size() == 0 || bnorm == 0.0) {
    diag.method = "trivial";
    diag.factorized = true;
    return Eigen::VectorXd::Zero(b.size());
  }

  if (!opts.force_cg) {
    Eigen::SimplicialLDLT<SparseMatrix> ldlt(m);
    if (ldlt.info() == Eigen::Success) {
      diag.min_pivot = ldlt.vectorD().minCoeff();
      if (diag.min_pivot > 0.0) {
        diag.method = "ldlt";
        diag.factorized = true;
        Eigen::VectorXd x = ldlt.solve(b);
        double rnorm = 0;
        Eigen::VectorXd r = residual(m, x, b, rnorm);
        diag.relative_residual = rnorm / bnorm;
        for (int step = 0; step < 4 && diag.relative_residual > 0.01 * opts.tolerance; ++step) {
          const Eigen::VectorXd y = x - ldlt.solve(r);
          const Eigen::VectorXd ry = residual(m, y, b, rnorm);
          if (rnorm / bnorm >= diag.relative_residual) break;
          x = y;
          r = ry;
          diag.relative_residual = rnorm / bnorm;
        }
        if (diag.relative_residual <= opts.tolerance) return x;
      }
    }
  }

  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
  cg.setTolerance(opts.tolerance * 0.5);
  cg.setMaxIterations(opts.max_cg_iterations > 0 ? opts.max_cg_iterations : 10 * static_cast<int>(m.rows()));
  cg.compute(m);
  Eigen::VectorXd x = cg.solve(b);
  diag.method = "cg";
  diag.iterations = static_cast<int>(cg.iterations());
  diag.relative_residual = relative_residual(m, x, b);
  if (!x.allFinite() || cg.info() == Eigen::NumericalIssue) {
    char msg[128];
    std::snprintf(msg, sizeof msg, "system is not positive definite (smallest LDLT pivot %.3e)", diag.min_pivot);
    throw SingularSystem(msg);
  }
  if (diag.relative_residual > opts.tolerance) {
    char msg[128];
    std::snprintf(msg, sizeof msg, "relative residual %.3e misses the target %.1e", diag.relative_residual,
                  opts.tolerance);
    throw SolveError(msg);
  }
  return x;
}

DiscreteSolution solve(const GlobalDofMap& dofs, SparseSystem& system, const SolveOptions& opts) {
  if (system.matrix.rows() != dofs.n_free) throw Error("system does not match the DoF map");
  DiscreteSolution sol;
  sol.eps = system.eps;
  const Eigen::VectorXd x = solve_spd(system.matrix, system.rhs, opts, system.diagnostics);
  sol.diagnostics = system.diagnostics;
  sol.values = extend_from_free(dofs, x);
  return sol;
}

std::string export_coo(const SparseMatrix& m) {
  std::ostringstream out;
  char line[96];
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      std::snprintf(line, sizeof line, "%d %d %.17g\n", static_cast<int>(it.row()), static_cast<int>(it.col()),
                    it.value());
      out << line;
    }
  return out.str();
}

}  // namespace ipvem
