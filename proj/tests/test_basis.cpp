#include <doctest.h>

#include <cmath>
#include <random>

#include "bridge.hpp"
#include "ipvem/basis.hpp"
#include "ipvem/mesh.hpp"

using namespace ipvem;

namespace {

const std::vector<Point> kUnitSquare{{0, 0}, {1, 0}, {1, 1}, {0, 1}};

}  // namespace

TEST_CASE("scaled monomial ordering and dimension") {
  for (int r = 0; r <= 5; ++r) {
    ScaledMonomials b(Point(0.3, 0.2), 0.7, r);
    CHECK(b.size() == (r + 1) * (r + 2) / 2);
    CHECK(b.exponents()[0].degree() == 0);
    for (int i = 1; i < b.size(); ++i) {
      const auto p = b.exponents()[i - 1], q = b.exponents()[i];
      CHECK((p.degree() < q.degree() || (p.degree() == q.degree() && p.px > q.px)));
    }
  }
  ScaledMonomials b(Point(0, 0), 1, 2);
  CHECK(b.index_of(1, 1) == 4);
  CHECK(b.index_of(0, 2) == 5);
  CHECK(b.index_of(3, 0) == -1);
}

TEST_CASE("values, gradients and hessians against the global-coordinate oracle") {
  std::mt19937_64 rng(1);
  const Point c(0.4, 0.6);
  const double h = 0.37;
  ScaledMonomials b(c, h, 4);
  for (int i = 0; i < b.size(); ++i) {
    const auto e = b.exponents()[i];
    // ((x - cx)/h)^px ((y - cy)/h)^py in global coordinates
    oracle::Poly px, py;
    px.c[{0, 0}] = 1;
    py.c[{0, 0}] = 1;
    oracle::Poly lx, ly;
    lx.c[{1, 0}] = 1 / h;
    lx.c[{0, 0}] = -c.x() / h;
    ly.c[{0, 1}] = 1 / h;
    ly.c[{0, 0}] = -c.y() / h;
    for (int k = 0; k < e.px; ++k) px = px * lx;
    for (int k = 0; k < e.py; ++k) py = py * ly;
    const oracle::Poly m = px * py;
    const Point x(0.1 + 0.8 * std::uniform_real_distribution<double>(0, 1)(rng), 0.3);
    CHECK(b.values(x)[i] == doctest::Approx(m(x)).epsilon(1e-12));
    CHECK(b.gradients(x)(i, 0) == doctest::Approx(m.dx()(x)).epsilon(1e-12));
    CHECK(b.gradients(x)(i, 1) == doctest::Approx(m.dy()(x)).epsilon(1e-12));
    CHECK(b.hessians(x)(i, 0) == doctest::Approx(m.dx().dx()(x)).epsilon(1e-12));
    CHECK(b.hessians(x)(i, 1) == doctest::Approx(m.dx().dy()(x)).epsilon(1e-12));
    CHECK(b.hessians(x)(i, 2) == doctest::Approx(m.dy().dy()(x)).epsilon(1e-12));
  }
}

TEST_CASE("polynomial derivatives") {
  ScaledMonomials b(Point(0.5, 0.5), 2.0, 4);
  PolyCoeffs one = PolyCoeffs::Zero(b.size());
  one[0] = 1;
  CHECK(poly_derivative(b, one, Direction::x).norm() == 0.0);

  PolyCoeffs r2 = PolyCoeffs::Zero(b.size());
  r2[b.index_of(2, 0)] = 1;
  r2[b.index_of(0, 2)] = 1;
  const PolyCoeffs lap = poly_laplacian(b, r2);
  CHECK(lap[0] == doctest::Approx(4.0 / 4.0));
  CHECK(lap.tail(b.size() - 1).norm() < 1e-15);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 10; ++t) {
    PolyCoeffs c(b.size());
    for (int i = 0; i < b.size(); ++i) c[i] = u(rng);
    const PolyCoeffs xy = poly_derivative(b, poly_derivative(b, c, Direction::x), Direction::y);
    const PolyCoeffs yx = poly_derivative(b, poly_derivative(b, c, Direction::y), Direction::x);
    CHECK((xy - yx).norm() < 1e-13);
    const Point p(0.3, 0.8);
    CHECK(b.evaluate(poly_derivative(b, c, Direction::x), p) ==
          doctest::Approx(b.gradients(p).col(0).dot(c)).epsilon(1e-12));
  }
}

TEST_CASE("edge traces") {
  ScaledMonomials b(Point(0.5, 0.5), std::sqrt(2.0), 2);
  EdgeMonomials e(Point(0, 0), Point(1, 0), 2);
  PolyCoeffs one = PolyCoeffs::Zero(b.size());
  one[0] = 1;
  const PolyCoeffs t1 = edge_trace(b, one, e);
  CHECK(t1[0] == doctest::Approx(1.0));
  CHECK(t1.tail(2).norm() < 1e-15);

  // x = 0.5 + sqrt2 xi; on the bottom edge x = 0.5 + sigma, slope 1 in arclength
  PolyCoeffs x = PolyCoeffs::Zero(b.size());
  x[0] = 0.5;
  x[b.index_of(1, 0)] = std::sqrt(2.0);
  const PolyCoeffs tx = edge_trace(b, x, e);
  CHECK(tx[0] == doctest::Approx(0.5));
  CHECK(tx[1] == doctest::Approx(1.0));
  CHECK(std::abs(tx[2]) < 1e-15);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  EdgeMonomials slanted(Point(0.1, 0.2), Point(0.9, 0.7), 2);
  for (int t = 0; t < 10; ++t) {
    PolyCoeffs c(b.size());
    for (int i = 0; i < b.size(); ++i) c[i] = u(rng);
    const PolyCoeffs tr = edge_trace(b, c, slanted);
    const auto [xs, ws] = oracle::gauss_legendre(4);
    double ref = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) ref += ws[i] * b.evaluate(c, slanted.point_at(xs[i] - 0.5));
    ref *= slanted.length();
    CHECK(slanted.integrate(tr) == doctest::Approx(ref).epsilon(1e-13));
    for (double s : {-0.5, -0.1, 0.3, 0.5})
      CHECK(slanted.evaluate(tr, s) == doctest::Approx(b.evaluate(c, slanted.point_at(s))).epsilon(1e-13));
  }
}

TEST_CASE("monomial integrals on the unit square") {
  const Point c(0.5, 0.5);
  const double h = std::sqrt(2.0);
  CHECK(integrate_monomial(kUnitSquare, c, h, {0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(integrate_monomial(kUnitSquare, c, h, {1, 0})) < 1e-15);
  CHECK(integrate_monomial(kUnitSquare, c, h, {2, 0}) == doctest::Approx(1.0 / 24).epsilon(1e-14));
}

TEST_CASE("monomial integration agrees with the fan oracle on random polygons") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto poly = oracle::random_star_polygon(rng, 3 + trial % 8);
    const auto [area, centroid] = oracle::area_centroid(poly);
    const double h = 0.45;
    for (int d = 0; d <= 6; ++d)
      for (int px = d; px >= 0; --px) {
        const int py = d - px;
        const double ref = oracle::fan_integral(
            poly, Point(0.5, 0.5),
            [&](const Point& x) {
              return std::pow((x.x() - centroid.x()) / h, px) * std::pow((x.y() - centroid.y()) / h, py);
            },
            6);
        const double got = integrate_monomial(poly, centroid, h, {px, py});
        CHECK(std::abs(got - ref) <= 1e-11 * std::max(std::abs(ref), area));
      }
  }
}

TEST_CASE("divergence theorem: integral of the Laplacian equals the boundary flux") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto loop = oracle::random_star_polygon(rng, 4 + trial % 5);
    const CellGeometry g = polygon_geometry(loop);
    ScaledMonomials b(g.centroid, g.diameter, 4);
    PolyCoeffs c(b.size());
    for (int i = 0; i < b.size(); ++i) c[i] = u(rng);
    const double lhs = integrate_basis(g.vertices, b).dot(poly_laplacian(b, c));
    double rhs = 0;
    const auto [xs, ws] = oracle::gauss_legendre(4);
    for (int e = 0; e < g.n_edges(); ++e) {
      const Point a = g.vertices[e], z = g.vertices[(e + 1) % g.n_edges()];
      for (std::size_t i = 0; i < xs.size(); ++i)
        rhs += ws[i] * g.edge_length[e] * b.gradients(a + xs[i] * (z - a)).transpose().operator*(c).dot(g.normal[e]);
    }
    CHECK(std::abs(lhs - rhs) <= 1e-11 * std::max(1.0, std::abs(lhs)));
  }
}
