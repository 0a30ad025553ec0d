#include "ipvem/basis.hpp"

#include <cmath>

#include "ipvem/errors.hpp"

namespace ipvem {
namespace {

// t^n with t^(negative) reported as 0; callers multiply by the falling
// factorial, which already vanishes in that case.
double ipow(double t, int n) {
  if (n < 0) return 0.0;
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= t;
  return r;
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

}  // namespace

ScaledMonomials::ScaledMonomials(const Point& center, double diameter, int degree)
    : center_(center), h_(diameter), degree_(degree) {
  if (degree < 0) throw UnsupportedOrder("ScaledMonomials: negative degree");
  if (!(diameter > 0.0)) throw MeshError("ScaledMonomials: diameter must be positive");
  for (int d = 0; d <= degree; ++d)
    for (int px = d; px >= 0; --px) exponents_.push_back({px, d - px});
}

int ScaledMonomials::index_of(int px, int py) const {
  if (px < 0 || py < 0) return -1;
  const int d = px + py;
  if (d > degree_) return -1;
  return d * (d + 1) / 2 + (d - px);
}

Eigen::VectorXd ScaledMonomials::values(const Point& x) const {
  const Point s = scaled(x);
  Eigen::VectorXd v(size());
  for (int a = 0; a < size(); ++a) v[a] = ipow(s.x(), exponents_[a].px) * ipow(s.y(), exponents_[a].py);
  return v;
}

Eigen::MatrixX2d ScaledMonomials::gradients(const Point& x) const {
  const Point s = scaled(x);
  Eigen::MatrixX2d g(size(), 2);
  for (int a = 0; a < size(); ++a) {
    const auto [px, py] = exponents_[a];
    g(a, 0) = px * ipow(s.x(), px - 1) * ipow(s.y(), py) / h_;
    g(a, 1) = py * ipow(s.x(), px) * ipow(s.y(), py - 1) / h_;
  }
  return g;
}

Eigen::MatrixX3d ScaledMonomials::hessians(const Point& x) const {
  const Point s = scaled(x);
  const double h2 = h_ * h_;
  Eigen::MatrixX3d H(size(), 3);
  for (int a = 0; a < size(); ++a) {
    const auto [px, py] = exponents_[a];
    H(a, 0) = px * (px - 1) * ipow(s.x(), px - 2) * ipow(s.y(), py) / h2;
    H(a, 1) = px * py * ipow(s.x(), px - 1) * ipow(s.y(), py - 1) / h2;
    H(a, 2) = py * (py - 1) * ipow(s.x(), px) * ipow(s.y(), py - 2) / h2;
  }
  return H;
}

Eigen::MatrixXd ScaledMonomials::derivative_matrix(Direction d) const {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(size(), size());
  for (int a = 0; a < size(); ++a) {
    const auto [px, py] = exponents_[a];
    if (d == Direction::x && px > 0) D(index_of(px - 1, py), a) = px / h_;
    if (d == Direction::y && py > 0) D(index_of(px, py - 1), a) = py / h_;
  }
  return D;
}

Eigen::MatrixXd ScaledMonomials::laplacian_matrix() const {
  const Eigen::MatrixXd dx = derivative_matrix(Direction::x);
  const Eigen::MatrixXd dy = derivative_matrix(Direction::y);
  return dx * dx + dy * dy;
}

PolyCoeffs poly_derivative(const ScaledMonomials& basis, const PolyCoeffs& c, Direction d) {
  return basis.derivative_matrix(d) * c;
}

PolyCoeffs poly_laplacian(const ScaledMonomials& basis, const PolyCoeffs& c) {
  return basis.laplacian_matrix() * c;
}

EdgeMonomials::EdgeMonomials(const Point& start, const Point& end, int degree)
    : mid_(0.5 * (start + end)), length_((end - start).norm()), degree_(degree) {
  if (!(length_ > 0.0)) throw MeshError("EdgeMonomials: zero-length edge");
  tangent_ = (end - start) / length_;
}

double EdgeMonomials::evaluate(const PolyCoeffs& c, double sigma) const {
  double r = 0.0;
  for (int j = static_cast<int>(c.size()) - 1; j >= 0; --j) r = r * sigma + c[j];
  return r;
}

double EdgeMonomials::integrate(const PolyCoeffs& c) const {
  // int_{-1/2}^{1/2} sigma^j dsigma = 2 (1/2)^{j+1} / (j+1) for even j
  double r = 0.0;
  for (int j = 0; j < c.size(); j += 2) r += c[j] * 2.0 * ipow(0.5, j + 1) / (j + 1);
  return r * length_;
}

Eigen::MatrixXd edge_trace_matrix(const ScaledMonomials& cell, const EdgeMonomials& edge) {
  // xi(sigma) = xi0 + rx sigma, eta(sigma) = eta0 + ry sigma
  const Point s0 = cell.scaled(edge.midpoint());
  const Point r = edge.tangent() * (edge.length() / cell.diameter());
  const std::vector<double> xi = {s0.x(), r.x()};
  const std::vector<double> eta = {s0.y(), r.y()};

  const int deg = cell.degree();
  std::vector<std::vector<double>> xi_pow(deg + 1), eta_pow(deg + 1);
  xi_pow[0] = eta_pow[0] = {1.0};
  for (int p = 1; p <= deg; ++p) {
    xi_pow[p] = poly_mul(xi_pow[p - 1], xi);
    eta_pow[p] = poly_mul(eta_pow[p - 1], eta);
  }
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(deg + 1, cell.size());
  for (int a = 0; a < cell.size(); ++a) {
    const auto [px, py] = cell.exponents()[a];
    const std::vector<double> t = poly_mul(xi_pow[px], eta_pow[py]);
    for (std::size_t j = 0; j < t.size(); ++j) T(static_cast<int>(j), a) = t[j];
  }
  return T;
}

PolyCoeffs edge_trace(const ScaledMonomials& cell, const PolyCoeffs& c, const EdgeMonomials& edge) {
  return edge_trace_matrix(cell, edge) * c;
}

double integrate_monomial(std::span<const Point> polygon, const Point& center, double h, Exponent e) {
  // For f homogeneous of degree q in xi: div(xi f) = (2 + q) f, so
  //   int_K f dx = h / (2 + q) * sum_e (xi_e . n_e) int_e f ds.
  const int q = e.degree();
  const EdgeRule rule = gauss_legendre(q / 2 + 1);
  const std::size_t m = polygon.size();
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Point a = (polygon[i] - center) / h;
    const Point b = (polygon[(i + 1) % m] - center) / h;
    const Point d = b - a;
    const double len = (polygon[(i + 1) % m] - polygon[i]).norm();
    if (len == 0.0) continue;
    // outward normal of a CCW loop, times dimensionless edge length
    const double xn = (a.x() * d.y() - a.y() * d.x()) / d.norm();
    double edge_sum = 0.0;
    for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
      const Point p = a + rule.nodes[g] * d;
      edge_sum += rule.weights[g] * ipow(p.x(), e.px) * ipow(p.y(), e.py);
    }
    total += xn * edge_sum * len;
  }
  return total * h / (2.0 + q);
}

Eigen::VectorXd integrate_basis(std::span<const Point> polygon, const ScaledMonomials& basis) {
  Eigen::VectorXd r(basis.size());
  for (int a = 0; a < basis.size(); ++a)
    r[a] = integrate_monomial(polygon, basis.center(), basis.diameter(), basis.exponents()[a]);
  return r;
}

}  // namespace ipvem
