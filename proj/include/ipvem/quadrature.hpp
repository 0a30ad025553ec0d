#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace ipvem {

using Point = Eigen::Vector2d;

/// 1D rule on the reference interval [0,1]. Weights sum to one.
struct EdgeRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int exactness = 0;  ///< highest degree integrated exactly
};

/// (k+1)-point Gauss-Lobatto rule, endpoints included, exact to degree 2k-1.
/// k = 2 is Simpson's rule. Throws UnsupportedOrder for k < 2.
EdgeRule gauss_lobatto(int k);

/// n-point Gauss-Legendre rule, exact to degree 2n-1.
EdgeRule gauss_legendre(int n);

/// Rule on the reference triangle (0,0), (1,0), (0,1); weights sum to 1/2.
struct TriangleRule {
  std::vector<Point> points;
  std::vector<double> weights;
  int order = 0;
};

/// Orders 1 and 2 are the classical centroid and 3-point edge-midpoint
/// rules; orders 3..10 use a collapsed (Duffy) Gauss-Legendre product.
TriangleRule triangle_quadrature(int order);

inline constexpr int kMaxTriangleOrder = 10;

/// Integrates f over a polygon by fanning triangles out from `apex`.
/// The polygon must be star-shaped with respect to the apex.
double integrate_fan(std::span<const Point> polygon, const Point& apex, const TriangleRule& rule,
                     const std::function<double(const Point&)>& f);

/// Same fan, many integrands at once: returns the vector of integrals of f(x).
Eigen::VectorXd integrate_fan_vector(std::span<const Point> polygon, const Point& apex,
                                     const TriangleRule& rule, int size,
                                     const std::function<Eigen::VectorXd(const Point&)>& f);

}  // namespace ipvem
