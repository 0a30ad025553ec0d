#pragma once

#include <functional>
#include <string>

#include <Eigen/Core>

#include "ipvem/quadrature.hpp"

namespace ipvem {

/// Closed-form exact solution with partial derivatives through order 4.
class ManufacturedSolution {
 public:
  /// d(i, j, p) returns d^{i+j} u / dx^i dy^j at p for i + j <= 4.
  using Derivative = std::function<double(int, int, const Point&)>;
  /// f(order, t) returns the order-th derivative of a 1D factor, order <= 4.
  using Factor = std::function<double(int, double)>;

  ManufacturedSolution(std::string id, Derivative d, bool clamped);
  /// u = scale * X(x) * Y(y)
  static ManufacturedSolution separable(std::string id, double scale, Factor x, Factor y, bool clamped);

  const std::string& id() const { return id_; }
  /// True when u = du/dn = 0 on the boundary of the unit square.
  bool clamped() const { return clamped_; }

  double derivative(int i, int j, const Point& p) const { return d_(i, j, p); }
  double value(const Point& p) const { return d_(0, 0, p); }
  Point gradient(const Point& p) const { return {d_(1, 0, p), d_(0, 1, p)}; }
  /// (u_xx, u_xy, u_yy)
  Eigen::Vector3d hessian(const Point& p) const { return {d_(2, 0, p), d_(1, 1, p), d_(0, 2, p)}; }
  double laplacian(const Point& p) const { return d_(2, 0, p) + d_(0, 2, p); }
  double bilaplacian(const Point& p) const { return d_(4, 0, p) + 2.0 * d_(2, 2, p) + d_(0, 4, p); }

 private:
  std::string id_;
  Derivative d_;
  bool clamped_;
};

/// u = 10 x^2 y^2 (1-x)^2 (1-y)^2 sin(pi x)
ManufacturedSolution example1();
/// u = sin(pi x)^2 sin(pi y)^2
ManufacturedSolution example2();
/// 1 or 2; throws ConfigError otherwise.
ManufacturedSolution example_by_id(int id);

/// eps^2 Lap^2 u - Lap u
double forcing(const ManufacturedSolution& u, double eps, const Point& p);

}  // namespace ipvem
