#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "ipvem/quadrature.hpp"

namespace ipvem {

struct Exponent {
  int px = 0;
  int py = 0;
  int degree() const { return px + py; }
};

/// Coefficients over a ScaledMonomials (or EdgeMonomials) basis.
using PolyCoeffs = Eigen::VectorXd;

enum class Direction { x, y };

/// Scaled monomials ((x - x_D)/h_D)^s, |s| <= r, on a 2D cell.
///
/// Members are ordered by total degree, then by decreasing x-power:
/// 1, xi, eta, xi^2, xi eta, eta^2, ...  Member 0 is always the constant.
class ScaledMonomials {
 public:
  ScaledMonomials() = default;
  ScaledMonomials(const Point& center, double diameter, int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(exponents_.size()); }
  const Point& center() const { return center_; }
  double diameter() const { return h_; }
  std::span<const Exponent> exponents() const { return exponents_; }
  /// Index of xi^px eta^py, or -1 when the degree exceeds the basis.
  int index_of(int px, int py) const;

  Point scaled(const Point& x) const { return (x - center_) / h_; }

  Eigen::VectorXd values(const Point& x) const;
  /// size x 2; row alpha is grad m_alpha(x) in physical coordinates.
  Eigen::MatrixX2d gradients(const Point& x) const;
  /// size x 3; row alpha is (d_xx, d_xy, d_yy) m_alpha(x).
  Eigen::MatrixX3d hessians(const Point& x) const;

  double evaluate(const PolyCoeffs& c, const Point& x) const { return values(x).dot(c); }

  /// Coefficient map of d/dx or d/dy (1/h scaling included); result stays on this basis.
  Eigen::MatrixXd derivative_matrix(Direction d) const;
  Eigen::MatrixXd laplacian_matrix() const;

 private:
  Point center_ = Point::Zero();
  double h_ = 1.0;
  int degree_ = -1;
  std::vector<Exponent> exponents_;
};

PolyCoeffs poly_derivative(const ScaledMonomials& basis, const PolyCoeffs& c, Direction d);
PolyCoeffs poly_laplacian(const ScaledMonomials& basis, const PolyCoeffs& c);

/// Scaled monomials ((s - s_mid)/h_e)^j, j <= r, in arclength along an edge.
/// The local coordinate sigma runs over [-1/2, 1/2] from start to end.
class EdgeMonomials {
 public:
  EdgeMonomials(const Point& start, const Point& end, int degree);

  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }
  double length() const { return length_; }
  const Point& midpoint() const { return mid_; }
  const Point& tangent() const { return tangent_; }
  Point point_at(double sigma) const { return mid_ + (sigma * length_) * tangent_; }

  double evaluate(const PolyCoeffs& c, double sigma) const;
  /// Exact integral over the edge (physical arclength) of the polynomial.
  double integrate(const PolyCoeffs& c) const;

 private:
  Point mid_;
  Point tangent_;
  double length_;
  int degree_;
};

/// Restriction of a cell polynomial to an edge; exact for the cell degree.
PolyCoeffs edge_trace(const ScaledMonomials& cell, const PolyCoeffs& c, const EdgeMonomials& edge);
/// Column alpha holds the edge coefficients of the trace of m_alpha.
Eigen::MatrixXd edge_trace_matrix(const ScaledMonomials& cell, const EdgeMonomials& edge);

/// Exact integral of xi^px eta^py over a polygon (CCW vertex loop), where
/// xi, eta are scaled about `center` with length `h`. Uses the divergence
/// theorem for homogeneous functions with Gauss-Legendre edge sums.
double integrate_monomial(std::span<const Point> polygon, const Point& center, double h,
                          Exponent e);

/// integrate_monomial for every member of the basis.
Eigen::VectorXd integrate_basis(std::span<const Point> polygon, const ScaledMonomials& basis);

}  // namespace ipvem
