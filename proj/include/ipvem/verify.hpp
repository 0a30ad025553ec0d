#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "ipvem/exec.hpp"
#include "ipvem/forms.hpp"
#include "ipvem/manufactured.hpp"
#include "ipvem/system.hpp"

namespace ipvem {

struct ErrorRecord {
  double eps = 1.0;
  int n_cells = 0;
  double h_max = 0.0;
  double h_equiv = 0.0;   ///< N^{-1/2}
  double E_I = 0.0;       ///< sqrt(eps^2 h2_part^2 + h1_part^2)
  double h2_part = 0.0;   ///< (sum_K |u - Pi^D u_h|_{2,K}^2)^{1/2}
  double h1_part = 0.0;   ///< (sum_K |u - Pi^N u_h|_{1,K}^2)^{1/2}
  double j1_energy = 0.0;
};

/// Fills the error parts of a record from per-cell projection errors.
ErrorRecord energy_error(const std::vector<ElementContext>& elements, const Eigen::VectorXd& solution,
                         const ManufacturedSolution& exact, double eps, int quadrature_order = 8,
                         Exec exec = Exec::parallel);

/// x^T J1 x for a full DoF vector and the full (non-eliminated) J1 matrix.
double j1_energy(const SparseMatrix& j1, const Eigen::VectorXd& solution);
SparseMatrix assemble_j1(const GlobalDofMap& dofs, const std::vector<ElementContext>& elements,
                         const std::vector<EdgeStencil>& stencils);

/// Minimal record count for a reported rate.
inline constexpr int kMinRateRecords = 3;

/// Least-squares slope of log(error) against log(h). h must be strictly
/// decreasing and errors positive; at least kMinRateRecords points.
double fit_rate(const std::vector<double>& h, const std::vector<double>& errors);

struct RateSeries {
  double eps = 1.0;
  std::vector<ErrorRecord> records;  ///< decreasing h_max
  std::optional<double> rate;        ///< against h_max, only with >= 3 records
  std::optional<double> rate_equiv;  ///< against N^{-1/2}
};

struct ConvergenceReport {
  std::vector<RateSeries> series;  ///< in order of first appearance of each eps
  std::uint64_t seed = 0;
  double penalty_a = 2.0;
  int k = 2;
};

/// Groups records by eps, sorts each group by decreasing h_max and fits rates.
ConvergenceReport make_report(const std::vector<ErrorRecord>& records, std::uint64_t seed, double penalty_a, int k);


}  // namespace ipvem
