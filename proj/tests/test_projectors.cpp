#include <doctest.h>

#include <cmath>
#include <random>

#include "bridge.hpp"
#include "ipvem/cvt.hpp"
#include "ipvem/errors.hpp"
#include "ipvem/projectors.hpp"

using namespace ipvem;

namespace {

struct Cell {
  CellGeometry g;
  ScaledMonomials basis;
  DofLayout layout;
  ElementMoments moments;
  ProjectorSet p;

  explicit Cell(const std::vector<Point>& loop)
      : g(polygon_geometry(loop)),
        basis(g.centroid, g.diameter, 2),
        layout(build_dof_layout(g, 2)),
        moments(element_moments(basis, g)),
        p(build_projectors(g, basis, layout, moments)) {}
};

/// DoFs of p computed without the library: nodal values and a Duffy-fan moment.
Eigen::VectorXd oracle_dofs(const oracle::Poly& q, const Cell& c) {
  Eigen::VectorXd d(c.layout.size());
  for (std::size_t i = 0; i < c.layout.nodes.size(); ++i) d[i] = q(c.layout.nodes[i]);
  d[c.layout.moment_dof()] = oracle::integrate(q, c.g) / c.g.area;
  return d;
}

std::vector<std::vector<Point>> test_cells() {
  std::vector<std::vector<Point>> cells{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 0}, {1, 0}, {0, 1}}};
  std::vector<Point> hex;
  for (int i = 0; i < 6; ++i) hex.emplace_back(0.5 + 0.3 * std::cos(i * M_PI / 3), 0.5 + 0.3 * std::sin(i * M_PI / 3));
  cells.push_back(hex);
  const auto m = generate_cvt(40, 17, 30);
  for (int c = 0; c < 20; ++c) cells.push_back(m.geometry(c).vertices);
  return cells;
}

}  // namespace

TEST_CASE("DoF layout counts and node placement") {
  CHECK(Cell({{0, 0}, {1, 0}, {1, 1}, {0, 1}}).layout.size() == 9);
  CHECK(Cell({{0, 0}, {1, 0}, {0, 1}}).layout.size() == 7);
  std::vector<Point> hex;
  for (int i = 0; i < 6; ++i) hex.emplace_back(std::cos(i * M_PI / 3), std::sin(i * M_PI / 3));
  const Cell h(hex);
  CHECK(h.layout.size() == 13);
  CHECK(h.layout.n_vertex == 6);
  CHECK(h.layout.n_edge == 6);
  CHECK(h.layout.n_moment == 1);
  for (int e = 0; e < 6; ++e)
    CHECK((h.layout.nodes[h.layout.edge_dof(e)] - 0.5 * (hex[e] + hex[(e + 1) % 6])).norm() < 1e-15);
  CHECK_THROWS_AS(build_dof_layout(h.g, 3), UnsupportedOrder);
  CHECK_THROWS_AS(build_dof_layout(h.g, 1), UnsupportedOrder);
}

TEST_CASE("DoFs of simple polynomials") {
  const Cell c({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  PolyCoeffs one = PolyCoeffs::Zero(6);
  one[0] = 1;
  const auto d1 = dofs_of_polynomial(one, c.basis, c.g, c.layout);
  for (int i = 0; i < d1.size(); ++i) CHECK(d1[i] == doctest::Approx(1.0));
  PolyCoeffs xi = PolyCoeffs::Zero(6);
  xi[1] = 1;
  CHECK(std::abs(dofs_of_polynomial(xi, c.basis, c.g, c.layout)[c.layout.moment_dof()]) < 1e-15);

  std::mt19937_64 rng(8);
  for (const auto& loop : test_cells()) {
    const Cell k(loop);
    const auto q = oracle::Poly::random(2, rng);
    const auto lib = dofs_of_polynomial(oracle::to_scaled(q, k.basis), k.basis, k.g, k.layout);
    CHECK((lib - oracle_dofs(q, k)).norm() < 1e-12 * std::max(1.0, lib.norm()));
  }
}

TEST_CASE("projectors reproduce quadratics") {
  std::mt19937_64 rng(9);
  for (const auto& loop : test_cells()) {
    const Cell c(loop);
    for (int t = 0; t < 10; ++t) {
      const auto q = oracle::Poly::random(2, rng);
      const PolyCoeffs coeffs = oracle::to_scaled(q, c.basis);
      const Eigen::VectorXd d = oracle_dofs(q, c);
      const double scale = coeffs.cwiseAbs().maxCoeff();
      CHECK((c.p.h1 * d - coeffs).cwiseAbs().maxCoeff() <= 1e-11 * scale);
      CHECK((c.p.h2 * d - coeffs).cwiseAbs().maxCoeff() <= 1e-11 * scale);
      CHECK((c.p.l2 * d - coeffs).cwiseAbs().maxCoeff() <= 1e-11 * scale);
    }
  }
}

TEST_CASE("projectors are idempotent in DoF form") {
  for (const auto& loop : test_cells()) {
    const Cell c(loop);
    const auto& P1 = c.p.h1_dof;
    const auto& P2 = c.p.h2_dof;
    CHECK((P1 * P1 - P1).norm() <= 1e-10 * P1.norm());
    CHECK((P2 * P2 - P2).norm() <= 1e-10 * P2.norm());
  }
}

TEST_CASE("elliptic projection of a basis vector satisfies its defining equations") {
  for (const auto& loop : test_cells()) {
    const Cell c(loop);
    const int n = c.layout.size();
    const int m = c.g.n_edges();
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
      e[i] = 1;
      const PolyCoeffs pi = c.p.h1 * e;
      // rhs(q) = -(v, lap q) + sum_e |e| (1/6 v0 dq0 + 4/6 vm dqm + 1/6 v1 dq1)
      for (int a = 1; a < 6; ++a) {
        const Eigen::RowVector3d hq = c.basis.hessians(c.g.centroid).row(a);
        double rhs = -(hq[0] + hq[2]) * c.g.area * e[c.layout.moment_dof()];
        for (int k = 0; k < m; ++k) {
          const Point p0 = c.g.vertices[k], p1 = c.g.vertices[(k + 1) % m], pm = 0.5 * (p0 + p1);
          auto dq = [&](const Point& x) { return c.basis.gradients(x).row(a).dot(c.g.normal[k]); };
          rhs += c.g.edge_length[k] * (e[k] * dq(p0) / 6 + 4 * e[c.layout.edge_dof(k)] * dq(pm) / 6 +
                                       e[(k + 1) % m] * dq(p1) / 6);
        }
        const double lhs = (c.moments.h1_stiff.row(a) * pi)(0);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
      }
      double vsum = 0, psum = 0;
      for (int k = 0; k < m; ++k) {
        vsum += e[k];
        psum += c.basis.evaluate(pi, c.g.vertices[k]);
      }
      CHECK(std::abs(vsum - psum) < 1e-12);
    }
  }
}

TEST_CASE("H2 projection matches the quasi-averages of the DoF vector") {
  for (const auto& loop : test_cells()) {
    const Cell c(loop);
    const int n = c.layout.size();
    const int m = c.g.n_edges();
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
      e[i] = 1;
      const PolyCoeffs pd = c.p.h2 * e;
      // Simpson boundary mean of the DoF values
      double hat = 0;
      for (int k = 0; k < m; ++k)
        hat += c.g.edge_length[k] * (e[k] + 4 * e[c.layout.edge_dof(k)] + e[(k + 1) % m]) / 6;
      hat /= c.g.perimeter;
      // exact boundary mean of the polynomial and of its gradient
      double phat = 0;
      Point ghat = Point::Zero();
      const auto [xs, ws] = oracle::gauss_legendre(3);
      for (int k = 0; k < m; ++k) {
        const Point a = c.g.vertices[k], b = c.g.vertices[(k + 1) % m];
        for (std::size_t g = 0; g < xs.size(); ++g) {
          const Point x = a + xs[g] * (b - a);
          phat += c.g.edge_length[k] * ws[g] * c.basis.evaluate(pd, x);
          ghat += c.g.edge_length[k] * ws[g] * (c.basis.gradients(x).transpose() * pd);
        }
      }
      phat /= c.g.perimeter;
      ghat /= c.g.perimeter;
      CHECK(std::abs(phat - hat) < 1e-12);
      CHECK(std::abs(c.p.quasi_average * e - hat) < 1e-12);
      const Eigen::Vector2d gdof = c.p.grad_quasi_average * e;
      CHECK((ghat - gdof).norm() <= 1e-12 * std::max(1.0, gdof.norm()));
    }
  }
}

TEST_CASE("H2 projection of a constant") {
  const Cell c({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(c.layout.size());
  const PolyCoeffs p = c.p.h2 * one;
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p.tail(5).norm() < 1e-14);
  CHECK((c.p.h2_rhs.bottomRows(3) * one).norm() < 1e-13);
}

TEST_CASE("a^K on polynomial inputs is symmetric and matches the exact Hessian product") {
  std::mt19937_64 rng(10);
  for (const auto& loop : test_cells()) {
    const Cell c(loop);
    const Eigen::MatrixXd ak = c.p.h2_rhs.bottomRows(3) * c.p.basis_dofs;  // rows q in {xi^2, xi eta, eta^2}
    const Eigen::MatrixXd sub = ak.rightCols(3);
    CHECK((sub - sub.transpose()).norm() <= 1e-11 * sub.norm());
    CHECK((ak - c.moments.h2_stiff.bottomRows(3)).norm() <= 1e-11 * ak.norm());
  }
}

TEST_CASE("Simpson edge sums equal exact integrals of p d_n q") {
  std::mt19937_64 rng(12);
  for (const auto& loop : test_cells()) {
    const Cell c(loop);
    const auto p = oracle::Poly::random(2, rng);
    const auto gl = gauss_lobatto(2);
    const auto [xs, ws] = oracle::gauss_legendre(4);
    for (int a = 0; a < 6; ++a)
      for (int k = 0; k < c.g.n_edges(); ++k) {
        const Point s = c.g.vertices[k], t = c.g.vertices[(k + 1) % c.g.n_edges()];
        auto f = [&](double u) {
          const Point x = s + u * (t - s);
          return p(x) * c.basis.gradients(x).row(a).dot(c.g.normal[k]);
        };
        double simpson = 0, exact = 0;
        for (int j = 0; j < 3; ++j) simpson += gl.weights[j] * f(gl.nodes[j]);
        for (std::size_t j = 0; j < xs.size(); ++j) exact += ws[j] * f(xs[j]);
        CHECK(std::abs(simpson - exact) <= 1e-12 * std::max(1.0, std::abs(exact)));
      }
  }
}

TEST_CASE("quasi_average of polynomial traces") {
  const CellGeometry g = polygon_geometry(std::vector<Point>{{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  ScaledMonomials b(g.centroid, g.diameter, 2);
  auto traces = [&](const PolyCoeffs& c) {
    std::vector<PolyCoeffs> t;
    for (int e = 0; e < 4; ++e) t.push_back(edge_trace(b, c, EdgeMonomials(g.vertices[e], g.vertices[(e + 1) % 4], 2)));
    return t;
  };
  CHECK(quasi_average(traces(oracle::to_scaled(oracle::Poly::monomial(0, 0), b)), g) == doctest::Approx(1.0));
  CHECK(quasi_average(traces(oracle::to_scaled(oracle::Poly::monomial(1, 0), b)), g) == doctest::Approx(0.5));
  CHECK(quasi_average(traces(oracle::to_scaled(oracle::Poly::monomial(2, 0), b)), g) == doctest::Approx(5.0 / 12));
}

TEST_CASE("L2 projector uses the moment DoF for constants") {
  const Cell c({{0, 0}, {1, 0}, {0.6, 0.9}});
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(c.layout.size());
  const PolyCoeffs p = c.p.l2 * one;
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p.tail(5).norm() < 1e-13);
  // (Pi^0 v, 1) equals |K| times the moment DoF for any DoF vector
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::VectorXd v(c.layout.size());
  for (int i = 0; i < v.size(); ++i) v[i] = u(rng);
  const double mean = integrate_basis(c.g.vertices, c.basis).dot(c.p.l2 * v);
  CHECK(mean == doctest::Approx(c.g.area * v[c.layout.moment_dof()]).epsilon(1e-13));
}
