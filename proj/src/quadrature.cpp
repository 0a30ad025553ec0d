#include "ipvem/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "ipvem/errors.hpp"

namespace ipvem {
namespace {

// P_n and P_n' at x via the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int j = 2; j <= n; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace

EdgeRule gauss_legendre(int n) {
  if (n < 1) throw UnsupportedOrder("gauss_legendre: need at least one node");
  EdgeRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  rule.exactness = 2 * n - 1;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      auto [p, d] = legendre_with_derivative(n, x);
      dp = d;
      const double dx = p / d;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    dp = legendre_with_derivative(n, x).second;
    // map [-1,1] -> [0,1], reversing so nodes ascend
    rule.nodes[n - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

EdgeRule gauss_lobatto(int k) {
  if (k < 2) throw UnsupportedOrder("gauss_lobatto: space order k must be >= 2");
  if (k == 2) return {{0.0, 0.5, 1.0}, {1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0}, 3};

  // Interior nodes are the roots of P_k'; Newton with P_k'' from the Legendre ODE.
  const int n = k + 1;
  EdgeRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  rule.exactness = 2 * k - 1;
  const double kk = k * (k + 1.0);
  for (int i = 0; i < n; ++i) {
    double x = -std::cos(std::numbers::pi * i / k);
    if (i != 0 && i != k) {
      for (int it = 0; it < 100; ++it) {
        auto [p, dp] = legendre_with_derivative(k, x);
        const double ddp = (2.0 * x * dp - kk * p) / (1.0 - x * x);
        const double dx = dp / ddp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
    }
    const double p = (i == 0) ? ((k % 2 == 0) ? 1.0 : -1.0)
                   : (i == k) ? 1.0
                              : legendre_with_derivative(k, x).first;
    rule.nodes[i] = (i == 0) ? 0.0 : (i == k) ? 1.0 : 0.5 * (x + 1.0);
    rule.weights[i] = 1.0 / (kk * p * p);
  }
  return rule;
}

TriangleRule triangle_quadrature(int order) {
  if (order < 1 || order > kMaxTriangleOrder) {
    throw UnsupportedOrder("triangle_quadrature: order must be in [1, " +
                           std::to_string(kMaxTriangleOrder) + "]");
  }
  TriangleRule rule;
  rule.order = order;
  if (order == 1) {
    rule.points = {Point(1.0 / 3.0, 1.0 / 3.0)};
    rule.weights = {0.5};
    return rule;
  }
  if (order == 2) {
    rule.points = {Point(0.5, 0.0), Point(0.5, 0.5), Point(0.0, 0.5)};
    rule.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
    return rule;
  }
  // x = u, y = (1-u) v; a degree-p integrand becomes degree p+1 in u (with the
  // Jacobian) and degree p in v.
  const EdgeRule gu = gauss_legendre((order + 3) / 2);
  const EdgeRule gv = gauss_legendre((order + 2) / 2);
  for (std::size_t i = 0; i < gu.nodes.size(); ++i) {
    const double u = gu.nodes[i];
    for (std::size_t j = 0; j < gv.nodes.size(); ++j) {
      const double v = gv.nodes[j];
      rule.points.emplace_back(u, (1.0 - u) * v);
      rule.weights.push_back(gu.weights[i] * gv.weights[j] * (1.0 - u));
    }
  }
  return rule;
}

double integrate_fan(std::span<const Point> polygon, const Point& apex, const TriangleRule& rule,
                     const std::function<double(const Point&)>& f) {
  double total = 0.0;
  const std::size_t m = polygon.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Point& a = polygon[i];
    const Point& b = polygon[(i + 1) % m];
    const Point e1 = a - apex;
    const Point e2 = b - apex;
    const double jac = e1.x() * e2.y() - e1.y() * e2.x();
    double sub = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Point x = apex + rule.points[q].x() * e1 + rule.points[q].y() * e2;
      sub += rule.weights[q] * f(x);
    }
    total += jac * sub;
  }
  return total;
}

Eigen::VectorXd integrate_fan_vector(std::span<const Point> polygon, const Point& apex,
                                     const TriangleRule& rule, int size,
                                     const std::function<Eigen::VectorXd(const Point&)>& f) {
  Eigen::VectorXd total = Eigen::VectorXd::Zero(size);
  const std::size_t m = polygon.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Point e1 = polygon[i] - apex;
    const Point e2 = polygon[(i + 1) % m] - apex;
    const double jac = e1.x() * e2.y() - e1.y() * e2.x();
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Point x = apex + rule.points[q].x() * e1 + rule.points[q].y() * e2;
      total += (jac * rule.weights[q]) * f(x);
    }
  }
  return total;
}

}  // namespace ipvem
