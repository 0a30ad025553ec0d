#include "ipvem/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/QR>

#include "ipvem/errors.hpp"
#include "ipvem/kernels.hpp"

namespace ipvem {

ManufacturedSolution::ManufacturedSolution(std::string id, Derivative d, bool clamped)
    : id_(std::move(id)), d_(std::move(d)), clamped_(clamped) {}

ManufacturedSolution ManufacturedSolution::separable(std::string id, double scale, Factor x, Factor y,
                                                     bool clamped) {
  auto d = [scale, x = std::move(x), y = std::move(y)](int i, int j, const Point& p) {
    return scale * x(i, p.x()) * y(j, p.y());
  };
  return ManufacturedSolution(std::move(id), std::move(d), clamped);
}

namespace {

constexpr double kPi = std::numbers::pi;

// g(t) = t^2 (1-t)^2 and its derivatives
double bump(int n, double t) {
  switch (n) {
    case 0: return t * t * (1 - t) * (1 - t);
    case 1: return 2 * t - 6 * t * t + 4 * t * t * t;
    case 2: return 2 - 12 * t + 12 * t * t;
    case 3: return -12 + 24 * t;
    case 4: return 24;
    default: return 0;
  }
}

double sine(int n, double t) { return std::pow(kPi, n) * std::sin(kPi * t + n * kPi / 2); }

// (g s)^(n) by the Leibniz rule
double bump_sine(int n, double t) {
  static constexpr std::array<std::array<int, 5>, 5> binom{{{1}, {1, 1}, {1, 2, 1}, {1, 3, 3, 1}, {1, 4, 6, 4, 1}}};
  double sum = 0;
  for (int k = 0; k <= n; ++k) sum += binom[n][k] * bump(k, t) * sine(n - k, t);
  return sum;
}

// sin(pi t)^2 = (1 - cos(2 pi t)) / 2
double sine_squared(int n, double t) {
  if (n == 0) return std::sin(kPi * t) * std::sin(kPi * t);
  return -0.5 * std::pow(2 * kPi, n) * std::cos(2 * kPi * t + n * kPi / 2);
}

}  // namespace

ManufacturedSolution example1() { return ManufacturedSolution::separable("example1", 10.0, bump_sine, bump, true); }

ManufacturedSolution example2() {
  return ManufacturedSolution::separable("example2", 1.0, sine_squared, sine_squared, true);
}

ManufacturedSolution example_by_id(int id) {
  if (id == 1) return example1();
  if (id == 2) return example2();
  throw ConfigError("unknown example id " + std::to_string(id));
}

double forcing(const ManufacturedSolution& u, double eps, const Point& p) {
  return eps * eps * u.bilaplacian(p) - u.laplacian(p);
}

ErrorRecord energy_error(const std::vector<ElementContext>& elements, const Eigen::VectorXd& solution,
                         const ManufacturedSolution& exact, double eps, int quadrature_order, Exec exec) {
  const auto cells = cell_errors(elements, solution, exact, quadrature_order, exec);
  double h1 = 0, h2 = 0;
  for (const auto& c : cells) {
    h1 += c.h1_sq;
    h2 += c.h2_sq;
  }
  ErrorRecord r;
  r.eps = eps;
  r.n_cells = static_cast<int>(elements.size());
  for (const auto& e : elements) r.h_max = std::max(r.h_max, e.geometry->diameter);
  r.h_equiv = r.n_cells > 0 ? 1.0 / std::sqrt(static_cast<double>(r.n_cells)) : 0.0;
  r.h1_part = std::sqrt(h1);
  r.h2_part = std::sqrt(h2);
  r.E_I = std::sqrt(eps * eps * h2 + h1);
  return r;
}

SparseMatrix assemble_j1(const GlobalDofMap& dofs, const std::vector<ElementContext>& elements,
                         const std::vector<EdgeStencil>& stencils) {
  return assemble_full(dofs, elements, stencils, 0.0, 1.0, 0.0, true);
}

double j1_energy(const SparseMatrix& j1, const Eigen::VectorXd& solution) {
  if (j1.rows() != solution.size()) throw Error("J1 matrix and solution sizes differ");
  return std::max(0.0, solution.dot(j1 * solution));
}

double fit_rate(const std::vector<double>& h, const std::vector<double>& errors) {
  if (h.size() != errors.size()) throw Error("fit_rate: h and error counts differ");
  if (h.size() < static_cast<std::size_t>(kMinRateRecords)) throw Error("fit_rate: at least three records are required");
  for (std::size_t i = 1; i < h.size(); ++i)
    if (!(h[i] < h[i - 1])) throw Error("fit_rate: h must be strictly decreasing");
  const int n = static_cast<int>(h.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    if (!(h[i] > 0) || !(errors[i] > 0)) throw Error("fit_rate: h and errors must be positive");
    A(i, 0) = 1.0;
    A(i, 1) = std::log(h[i]);
    y[i] = std::log(errors[i]);
  }
  return A.colPivHouseholderQr().solve(y)[1];
}

ConvergenceReport make_report(const std::vector<ErrorRecord>& records, std::uint64_t seed, double penalty_a, int k) {
  ConvergenceReport report;
  report.seed = seed;
  report.penalty_a = penalty_a;
  report.k = k;
  for (const auto& r : records) {
    auto it = std::find_if(report.series.begin(), report.series.end(),
                           [&](const RateSeries& s) { return s.eps == r.eps; });
    if (it == report.series.end()) {
      report.series.push_back({r.eps, {}, {}, {}});
      it = report.series.end() - 1;
    }
    it->records.push_back(r);
  }
  for (auto& s : report.series) {
    std::stable_sort(s.records.begin(), s.records.end(),
                     [](const ErrorRecord& a, const ErrorRecord& b) { return a.h_max > b.h_max; });
    if (static_cast<int>(s.records.size()) < kMinRateRecords) continue;
    std::vector<double> h, he, e;
    for (const auto& r : s.records) {
      h.push_back(r.h_max);
      e.push_back(r.E_I);
    }
    try {
      s.rate = fit_rate(h, e);
    } catch (const Error&) {
      s.rate.reset();
    }
    auto by_n = s.records;
    std::stable_sort(by_n.begin(), by_n.end(),
                     [](const ErrorRecord& a, const ErrorRecord& b) { return a.h_equiv > b.h_equiv; });
    e.clear();
    for (const auto& r : by_n) {
      he.push_back(r.h_equiv);
      e.push_back(r.E_I);
    }
    try {
      s.rate_equiv = fit_rate(he, e);
    } catch (const Error&) {
      s.rate_equiv.reset();
    }
  }
  return report;
}

}  // namespace ipvem
