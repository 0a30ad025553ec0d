#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Cholesky>

#include "ipvem/cvt.hpp"
#include "ipvem/errors.hpp"
#include "ipvem/system.hpp"
#include "ipvem/verify.hpp"

using namespace ipvem;

namespace {

struct Pipeline {
  PolygonalMesh mesh;
  GlobalDofMap dofs;
  std::vector<ElementContext> elements;
  std::vector<EdgeStencil> stencils;

  explicit Pipeline(PolygonalMesh m, double a = 2.0) : mesh(std::move(m)), dofs(number_dofs(mesh, 2)) {
    elements = build_elements(mesh, dofs, Exec::serial);
    stencils = build_stencils(mesh, elements, PenaltyConfig{a, mesh.max_edges_per_cell()}, Exec::serial);
  }
  SparseSystem system(const ScalarField& f, double eps) const {
    return assemble(dofs, elements, stencils, build_loads(elements, f, 8, Exec::serial), eps, Exec::serial);
  }
  DiscreteSolution solve_for(const ScalarField& f, double eps) const {
    auto s = system(f, eps);
    return solve(dofs, s);
  }
};

ScalarField forcing_of(const ManufacturedSolution& u, double eps) {
  return [u, eps](const Point& p) { return forcing(u, eps, p); };
}

}  // namespace

TEST_CASE("DoF counts") {
  const auto one = number_dofs(generate_uniform_squares(1), 2);
  CHECK(one.size() == 9);
  CHECK(one.n_boundary() == 8);
  CHECK(one.n_free == 1);
  const auto two = number_dofs(generate_uniform_squares(2), 2);
  CHECK(two.size() == 25);
  CHECK(two.n_boundary() == 16);
  CHECK(two.n_free == 9);
  const auto cvt = generate_cvt(64, 2, 20);
  const auto d = number_dofs(cvt, 2);
  int boundary_edges = 0;
  for (int e = 0; e < cvt.n_edges(); ++e) boundary_edges += cvt.boundary_edge(e);
  CHECK(d.size() == cvt.n_vertices() + cvt.n_edges() + cvt.n_cells());
  CHECK(d.n_boundary() == 2 * boundary_edges);
  CHECK(cvt.n_vertices() - cvt.n_edges() + cvt.n_cells() == 1);
  // the free index is a bijection onto [0, n_free)
  std::vector<int> seen;
  for (int i = 0; i < d.size(); ++i) {
    CHECK((d.free_index[i] < 0) == d.boundary[i]);
    if (d.free_index[i] >= 0) seen.push_back(d.free_index[i]);
  }
  std::sort(seen.begin(), seen.end());
  CHECK(static_cast<int>(seen.size()) == d.n_free);
  for (int i = 0; i < d.n_free; ++i) CHECK(seen[i] == i);
  CHECK_THROWS_AS(number_dofs(cvt, 3), UnsupportedOrder);
}

TEST_CASE("restriction and extension") {
  const auto dofs = number_dofs(generate_uniform_squares(3), 2);
  Eigen::VectorXd full = Eigen::VectorXd::LinSpaced(dofs.size(), 1, dofs.size());
  const Eigen::VectorXd free = restrict_to_free(dofs, full);
  const Eigen::VectorXd back = extend_from_free(dofs, free);
  for (int i = 0; i < dofs.size(); ++i) CHECK(back[i] == (dofs.boundary[i] ? 0.0 : full[i]));
  CHECK_THROWS_AS(restrict_to_free(dofs, free), Error);
  CHECK_THROWS_AS(extend_from_free(dofs, full), Error);
}

TEST_CASE("assembled matrix is symmetric and the sum of its blocks") {
  const Pipeline p(generate_cvt(32, 4, 30));
  const double eps = 0.3;
  const auto s = p.system([](const Point&) { return 1.0; }, eps);
  const SparseMatrix sym = s.matrix - SparseMatrix(s.matrix.transpose());
  CHECK(sym.norm() == 0.0);

  const SparseMatrix full = assemble_full(p.dofs, p.elements, p.stencils, eps * eps, eps * eps, 1.0);
  Eigen::MatrixXd restricted(p.dofs.n_free, p.dofs.n_free);
  const Eigen::MatrixXd dense = full;
  for (int i = 0; i < p.dofs.size(); ++i)
    for (int j = 0; j < p.dofs.size(); ++j)
      if (p.dofs.free_index[i] >= 0 && p.dofs.free_index[j] >= 0)
        restricted(p.dofs.free_index[i], p.dofs.free_index[j]) = dense(i, j);
  CHECK((Eigen::MatrixXd(s.matrix) - restricted).norm() <= 1e-12 * restricted.norm());
}

TEST_CASE("b_h assembled two ways") {
  const Pipeline p(generate_uniform_squares(2));
  Eigen::MatrixXd manual = Eigen::MatrixXd::Zero(p.dofs.size(), p.dofs.size());
  for (const auto& e : p.elements)
    for (int i = 0; i < e.layout.size(); ++i)
      for (int j = 0; j < e.layout.size(); ++j) manual(e.layout.global[i], e.layout.global[j]) += e.b_form(i, j);
  const Eigen::MatrixXd lib = assemble_full(p.dofs, p.elements, p.stencils, 0, 0, 1);
  CHECK((lib - manual).norm() <= 1e-14 * manual.norm());
  // constants are in the kernel of the unconstrained b_h
  CHECK((manual * Eigen::VectorXd::Ones(p.dofs.size())).norm() <= 1e-13);
}

TEST_CASE("zero load gives the zero solution") {
  const Pipeline p(generate_cvt(32, 5, 30));
  const auto sol = p.solve_for([](const Point&) { return 0.0; }, 1e-2);
  CHECK(sol.values.norm() == 0.0);
  CHECK(sol.values.size() == p.dofs.size());
}

TEST_CASE("solve_spd on a random SPD matrix") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  Eigen::MatrixXd r(50, 50);
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) r(i, j) = g(rng);
  const Eigen::MatrixXd dense = r * r.transpose() + 50 * Eigen::MatrixXd::Identity(50, 50);
  const SparseMatrix m = dense.sparseView();
  Eigen::VectorXd b(50);
  for (int i = 0; i < 50; ++i) b[i] = g(rng);
  const Eigen::VectorXd ref = dense.llt().solve(b);

  SolverDiagnostics diag;
  const Eigen::VectorXd x = solve_spd(m, b, {}, diag);
  CHECK(diag.method == "ldlt");
  CHECK(diag.factorized);
  CHECK(diag.min_pivot > 0);
  CHECK(diag.relative_residual <= 1e-10);
  CHECK((x - ref).norm() <= 1e-10 * ref.norm());

  SolveOptions cg;
  cg.force_cg = true;
  const Eigen::VectorXd y = solve_spd(m, b, cg, diag);
  CHECK(diag.method == "cg");
  CHECK(diag.iterations > 0);
  CHECK(relative_residual(m, y, b) <= 1e-10);

  CHECK(solve_spd(m, Eigen::VectorXd::Zero(50), {}, diag).norm() == 0.0);
  CHECK(diag.method == "trivial");
}

TEST_CASE("solve_spd rejects singular and mismatched systems") {
  SparseMatrix zero(4, 4);
  SolverDiagnostics diag;
  CHECK_THROWS_AS(solve_spd(zero, Eigen::VectorXd::Ones(4), {}, diag), Error);
  CHECK_THROWS_AS(solve_spd(zero, Eigen::VectorXd::Ones(3), {}, diag), Error);
  SparseMatrix id(3, 3);
  id.setIdentity();
  SolveOptions few;
  few.force_cg = true;
  few.max_cg_iterations = 1;
  Eigen::MatrixXd d = Eigen::MatrixXd::Identity(3, 3);
  d(0, 1) = d(1, 0) = 0.9;
  d(1, 2) = d(2, 1) = 0.05;
  const SparseMatrix m = d.sparseView();
  CHECK_THROWS_AS(solve_spd(m, Eigen::Vector3d(1, 2, 3), few, diag), SolveError);
}

TEST_CASE("assemble_matrix sums duplicates and skips eliminated entries") {
  const std::vector<MatrixEntry> entries{{0, 0, 1.0}, {0, 0, 2.0}, {1, 0, 4.0}, {-1, 0, 9.0}, {0, -1, 9.0}};
  const Eigen::MatrixXd m = assemble_matrix(2, entries);
  CHECK(m(0, 0) == 3.0);
  CHECK(m(1, 0) == 4.0);
  CHECK(m(0, 1) == 0.0);
  CHECK_THROWS_AS(assemble_matrix(1, entries), Error);
}

TEST_CASE("Example 2 on a coarse CVT mesh") {
  const Pipeline p(generate_cvt(32, 7, 100));
  const auto u = example2();
  for (double eps : {1.0, 1e-3, 1e-10}) {
    auto s = p.system(forcing_of(u, eps), eps);
    const auto sol = solve(p.dofs, s);
    CHECK(sol.diagnostics.method == "ldlt");
    CHECK(sol.diagnostics.min_pivot > 0);
    CHECK(sol.diagnostics.relative_residual <= 1e-10);
    for (int i = 0; i < p.dofs.size(); ++i)
      if (p.dofs.boundary[i]) CHECK(sol.values[i] == 0.0);
    const auto err = energy_error(p.elements, sol.values, u, eps, 8, Exec::serial);
    CHECK(std::isfinite(err.E_I));
    CHECK(err.E_I > 0);
    const auto zero = energy_error(p.elements, Eigen::VectorXd::Zero(p.dofs.size()), u, eps, 8, Exec::serial);
    CHECK(err.E_I < zero.E_I);
  }
}

TEST_CASE("linearity in the load") {
  const Pipeline p(generate_cvt(32, 8, 30));
  const ScalarField f1 = [](const Point& x) { return std::sin(3 * x.x()) + x.y(); };
  const ScalarField f2 = [](const Point& x) { return x.x() * x.y(); };
  const double eps = 0.1;
  const auto u1 = p.solve_for(f1, eps).values;
  const auto u2 = p.solve_for(f2, eps).values;
  const auto u12 = p.solve_for([&](const Point& x) { return f1(x) + 2 * f2(x); }, eps).values;
  CHECK((u12 - u1 - 2 * u2).norm() <= 1e-9 * u12.norm());
}

TEST_CASE("solution does not depend on cell numbering") {
  const auto base = generate_cvt(32, 9, 50);
  std::vector<Point> verts(base.vertices().begin(), base.vertices().end());
  std::vector<std::vector<int>> cells;
  for (int c = base.n_cells() - 1; c >= 0; --c) {
    std::vector<int> loop(base.cell(c).begin(), base.cell(c).end());
    std::rotate(loop.begin(), loop.begin() + 1, loop.end());
    cells.push_back(loop);
  }
  const Pipeline a(base);
  const Pipeline b(PolygonalMesh::from_cells(verts, cells));
  const auto u = example1();
  const double eps = 1e-2;
  const auto ea = energy_error(a.elements, a.solve_for(forcing_of(u, eps), eps).values, u, eps, 8, Exec::serial);
  const auto eb = energy_error(b.elements, b.solve_for(forcing_of(u, eps), eps).values, u, eps, 8, Exec::serial);
  CHECK(ea.E_I == doctest::Approx(eb.E_I).epsilon(1e-9));
  CHECK(ea.h1_part == doctest::Approx(eb.h1_part).epsilon(1e-9));
  CHECK(ea.h2_part == doctest::Approx(eb.h2_part).epsilon(1e-9));
}

TEST_CASE("COO export") {
  Eigen::MatrixXd d(2, 2);
  d << 1.0, 0.0, 0.25, 1.0 / 3.0;
  const SparseMatrix m = d.sparseView();
  std::istringstream in(export_coo(m));
  int r, c;
  double v;
  Eigen::MatrixXd back = Eigen::MatrixXd::Zero(2, 2);
  int lines = 0;
  while (in >> r >> c >> v) {
    back(r, c) = v;
    ++lines;
  }
  CHECK(lines == 3);
  CHECK(back == d);
}
