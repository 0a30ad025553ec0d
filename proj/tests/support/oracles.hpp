#pragma once
// Reference computations for tests. Nothing here calls the library's
// quadrature or polynomial code, so agreement is a genuine cross-check.

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Point = Eigen::Vector2d;

/// n-point Gauss-Legendre on [0,1] by Golub-Welsch.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) J(i, i - 1) = J(i - 1, i) = i / std::sqrt(4.0 * i * i - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    x[i] = 0.5 * (es.eigenvalues()[i] + 1.0);
    w[i] = es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
  }
  return {x, w};
}

/// Integral of f over a polygon fanned from `apex`, collapsed Gauss-Legendre with n^2 points per triangle.
inline double fan_integral(const std::vector<Point>& poly, const Point& apex, const std::function<double(const Point&)>& f,
                           int n = 12) {
  const auto [x, w] = gauss_legendre(n);
  double sum = 0;
  const std::size_t m = poly.size();
  for (std::size_t k = 0; k < m; ++k) {
    const Point a = poly[k] - apex, b = poly[(k + 1) % m] - apex;
    const double det = a.x() * b.y() - a.y() * b.x();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double u = x[i], v = x[j] * (1 - x[i]);
        sum += w[i] * w[j] * (1 - x[i]) * det * f(apex + u * a + v * b);
      }
  }
  return sum;
}

/// Integral of x^a y^b over the reference simplex: a! b! / (a+b+2)!.
inline double simplex_moment(int a, int b) {
  return std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 3.0);
}

/// Polynomial in global coordinates: sum of c_ij x^i y^j.
struct Poly {
  std::map<std::pair<int, int>, double> c;

  double operator()(const Point& p) const {
    double s = 0;
    for (const auto& [e, v] : c) s += v * std::pow(p.x(), e.first) * std::pow(p.y(), e.second);
    return s;
  }
  Poly dx() const {
    Poly d;
    for (const auto& [e, v] : c)
      if (e.first > 0) d.c[{e.first - 1, e.second}] += v * e.first;
    return d;
  }
  Poly dy() const {
    Poly d;
    for (const auto& [e, v] : c)
      if (e.second > 0) d.c[{e.first, e.second - 1}] += v * e.second;
    return d;
  }
  Poly operator*(const Poly& o) const {
    Poly r;
    for (const auto& [a, u] : c)
      for (const auto& [b, v] : o.c) r.c[{a.first + b.first, a.second + b.second}] += u * v;
    return r;
  }
  Poly operator+(const Poly& o) const {
    Poly r = *this;
    for (const auto& [b, v] : o.c) r.c[b] += v;
    return r;
  }
  int degree() const {
    int d = 0;
    for (const auto& [e, v] : c)
      if (v != 0) d = std::max(d, e.first + e.second);
    return d;
  }

  static Poly random(int degree, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    Poly p;
    for (int d = 0; d <= degree; ++d)
      for (int i = d; i >= 0; --i) p.c[{i, d - i}] = u(rng);
    return p;
  }
  static Poly monomial(int i, int j, double scale = 1.0) {
    Poly p;
    p.c[{i, j}] = scale;
    return p;
  }
};

/// Star-shaped polygon about `center` with m vertices, CCW.
inline std::vector<Point> random_star_polygon(std::mt19937_64& rng, int m, const Point& center = Point(0.5, 0.5),
                                              double radius = 0.3) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> ang(m);
  for (int i = 0; i < m; ++i) ang[i] = 2 * M_PI * (i + 0.1 + 0.8 * u(rng)) / m;
  std::vector<Point> pts;
  for (double a : ang) {
    const double r = radius * (0.6 + 0.4 * u(rng));
    pts.push_back(center + r * Point(std::cos(a), std::sin(a)));
  }
  return pts;
}

/// Shoelace area and centroid.
inline std::pair<double, Point> area_centroid(const std::vector<Point>& poly) {
  double a = 0;
  Point c = Point::Zero();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % poly.size()];
    const double cr = p.x() * q.y() - q.x() * p.y();
    a += cr;
    c += cr * (p + q);
  }
  return {a / 2, c / (3 * a)};
}

}  // namespace oracle
