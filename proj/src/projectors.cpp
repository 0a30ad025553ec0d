#include "ipvem/projectors.hpp"

#include <Eigen/LU>

#include "ipvem/errors.hpp"

namespace ipvem {
namespace {

// Solve G X = B, refusing numerically singular G.
Eigen::MatrixXd solve_small(const Eigen::MatrixXd& G, const Eigen::MatrixXd& B, const char* what) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(G);
  const double rc = lu.rcond();
  if (!(rc > 1e-13)) throw SingularSystem(std::string(what) + ": singular local system (rcond " + std::to_string(rc) + ")");
  return lu.solve(B);
}

Point vertex_at(const CellGeometry& cell, int i) { return cell.vertices[i % cell.n_edges()]; }

// Normal-derivative integral over edge i of Pi^nabla v, as a row over the DoFs.
Eigen::RowVectorXd normal_derivative_moment(const CellGeometry& cell, const ScaledMonomials& basis,
                                            const Eigen::MatrixXd& h1, int i) {
  static const EdgeRule gauss = gauss_legendre(2);
  const Point a = vertex_at(cell, i);
  const Point b = vertex_at(cell, i + 1);
  Eigen::VectorXd dn = Eigen::VectorXd::Zero(basis.size());
  for (std::size_t g = 0; g < gauss.nodes.size(); ++g)
    dn += gauss.weights[g] * (basis.gradients(a + gauss.nodes[g] * (b - a)) * cell.normal[i]);
  return cell.edge_length[i] * (dn.transpose() * h1);
}

}  // namespace

DofLayout build_dof_layout(const CellGeometry& cell, int k) {
  if (k != kSupportedOrder)
    throw UnsupportedOrder("order k = " + std::to_string(k) + " is not supported; only k = 2 is implemented");
  const EdgeRule gl = gauss_lobatto(k);
  DofLayout layout;
  layout.order = k;
  const int m = cell.n_edges();
  layout.n_vertex = m;
  layout.n_edge = (k - 1) * m;
  layout.n_moment = (k - 1) * k / 2;
  layout.nodes = cell.vertices;
  for (int i = 0; i < m; ++i)
    for (int j = 1; j < k; ++j)
      layout.nodes.push_back(vertex_at(cell, i) + gl.nodes[j] * (vertex_at(cell, i + 1) - vertex_at(cell, i)));
  return layout;
}

VirtualDofVector dofs_of_polynomial(const PolyCoeffs& c, const ScaledMonomials& basis, const CellGeometry& cell,
                                    const DofLayout& layout) {
  VirtualDofVector chi(layout.size());
  for (std::size_t i = 0; i < layout.nodes.size(); ++i) chi[i] = basis.evaluate(c, layout.nodes[i]);
  // moments against M_{k-2}: the product m * p is expanded on a wider basis
  const ScaledMonomials wide(basis.center(), basis.diameter(), basis.degree() + layout.order - 2);
  const Eigen::VectorXd integrals = integrate_basis(cell.vertices, wide);
  const ScaledMonomials low(basis.center(), basis.diameter(), layout.order - 2);
  for (int j = 0; j < layout.n_moment; ++j) {
    const Exponent mj = low.exponents()[j];
    double s = 0.0;
    for (int a = 0; a < basis.size(); ++a) {
      const Exponent ea = basis.exponents()[a];
      s += c[a] * integrals[wide.index_of(ea.px + mj.px, ea.py + mj.py)];
    }
    chi[layout.moment_dof(j)] = s / cell.area;
  }
  return chi;
}

ElementMoments element_moments(const ScaledMonomials& basis, const CellGeometry& cell) {
  const int r = basis.degree();
  const ScaledMonomials wide(basis.center(), basis.diameter(), 2 * r);
  const Eigen::VectorXd I = integrate_basis(cell.vertices, wide);
  const auto integral = [&](int px, int py) { return (px < 0 || py < 0) ? 0.0 : I[wide.index_of(px, py)]; };
  const double h2 = basis.diameter() * basis.diameter();
  const int n = basis.size();
  ElementMoments m;
  m.mass.resize(n, n);
  m.h1_stiff.resize(n, n);
  m.h2_stiff.resize(n, n);
  for (int a = 0; a < n; ++a) {
    const auto [pa, qa] = basis.exponents()[a];
    for (int b = 0; b < n; ++b) {
      const auto [pb, qb] = basis.exponents()[b];
      const int P = pa + pb;
      const int Q = qa + qb;
      m.mass(a, b) = integral(P, Q);
      m.h1_stiff(a, b) = (pa * pb * integral(P - 2, Q) + qa * qb * integral(P, Q - 2)) / h2;
      m.h2_stiff(a, b) = (pa * (pa - 1) * pb * (pb - 1) * integral(P - 4, Q) +
                          2.0 * pa * qa * pb * qb * integral(P - 2, Q - 2) +
                          qa * (qa - 1) * qb * (qb - 1) * integral(P, Q - 4)) /
                         (h2 * h2);
    }
  }
  return m;
}

void build_h1_projector(const CellGeometry& cell, const ScaledMonomials& basis, const DofLayout& layout,
                        const ElementMoments& moments, ProjectorSet& out) {
  if (layout.order != kSupportedOrder || basis.degree() != layout.order)
    throw UnsupportedOrder("build_h1_projector: basis degree must equal k = 2");
  const int n = layout.size();
  const int dim = basis.size();
  const int m = cell.n_edges();

  Eigen::MatrixXd D(n, dim);
  for (std::size_t i = 0; i < layout.nodes.size(); ++i) D.row(i) = basis.values(layout.nodes[i]).transpose();
  D.row(layout.moment_dof()) = integrate_basis(cell.vertices, basis).transpose() / cell.area;

  Eigen::MatrixXd G = moments.h1_stiff;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(dim, n);
  G.row(0).setZero();
  for (int i = 0; i < m; ++i) {
    G.row(0) += basis.values(cell.vertices[i]).transpose() / m;
    B(0, layout.vertex_dof(i)) = 1.0 / m;
  }

  // -(v, lap q)_K: lap q is constant for q in P_2
  const Eigen::MatrixXd lap = basis.laplacian_matrix();
  for (int a = 1; a < dim; ++a) B(a, layout.moment_dof()) -= lap(0, a) * cell.area;

  const EdgeRule gl = gauss_lobatto(layout.order);
  for (int i = 0; i < m; ++i) {
    const Point a = vertex_at(cell, i);
    const Point b = vertex_at(cell, i + 1);
    const int cols[3] = {layout.vertex_dof(i), layout.edge_dof(i), layout.vertex_dof((i + 1) % m)};
    for (int j = 0; j < 3; ++j) {
      const Eigen::VectorXd dn = basis.gradients(a + gl.nodes[j] * (b - a)) * cell.normal[i];
      B.block(1, cols[j], dim - 1, 1) += cell.edge_length[i] * gl.weights[j] * dn.tail(dim - 1);
    }
  }

  out.basis_dofs = D;
  out.h1_gram = G;
  out.h1_rhs = B;
  out.h1 = solve_small(G, B, "elliptic projector");
  out.h1_dof = D * out.h1;
}

void build_h2_projector(const CellGeometry& cell, const ScaledMonomials& basis, const DofLayout& layout,
                        const ElementMoments& moments, ProjectorSet& out) {
  if (out.h1.size() == 0) throw Error("build_h2_projector: elliptic projector not built");
  const int n = layout.size();
  const int dim = basis.size();
  const int m = cell.n_edges();
  const EdgeRule gl = gauss_lobatto(layout.order);
  const EdgeRule gauss = gauss_legendre(2);

  Eigen::RowVectorXd hat = Eigen::RowVectorXd::Zero(n);
  Eigen::MatrixXd grad_hat = Eigen::MatrixXd::Zero(2, n);
  Eigen::MatrixX2d grad_hat_poly = Eigen::MatrixX2d::Zero(dim, 2);
  Eigen::MatrixXd a_rhs = Eigen::MatrixXd::Zero(dim, n);

  for (int i = 0; i < m; ++i) {
    const Point a = vertex_at(cell, i);
    const Point b = vertex_at(cell, i + 1);
    const double len = cell.edge_length[i];
    const Point& nrm = cell.normal[i];
    const Point& tan = cell.tangent[i];
    const int v0 = layout.vertex_dof(i);
    const int v1 = layout.vertex_dof((i + 1) % m);

    hat[v0] += len * gl.weights[0];
    hat[layout.edge_dof(i)] += len * gl.weights[1];
    hat[v1] += len * gl.weights[2];

    // int_e grad v = n int_e d_n Pi^nabla v + t (v(b) - v(a))
    const Eigen::RowVectorXd dn = normal_derivative_moment(cell, basis, out.h1, i);
    Eigen::RowVectorXd dt = Eigen::RowVectorXd::Zero(n);
    dt[v1] += 1.0;
    dt[v0] -= 1.0;
    grad_hat.row(0) += nrm.x() * dn + tan.x() * dt;
    grad_hat.row(1) += nrm.y() * dn + tan.y() * dt;

    for (std::size_t g = 0; g < gauss.nodes.size(); ++g)
      grad_hat_poly += (len * gauss.weights[g]) * basis.gradients(a + gauss.nodes[g] * (b - a));

    // a^K(v, q) = sum_e [ q_nn int_e d_n v + q_nt (v(b) - v(a)) ]
    const Eigen::MatrixX3d H = basis.hessians(0.5 * (a + b));
    for (int q = 3; q < dim; ++q) {
      const double hxx = H(q, 0), hxy = H(q, 1), hyy = H(q, 2);
      const double qnn = nrm.x() * nrm.x() * hxx + 2.0 * nrm.x() * nrm.y() * hxy + nrm.y() * nrm.y() * hyy;
      const double qnt = nrm.x() * tan.x() * hxx + (nrm.x() * tan.y() + nrm.y() * tan.x()) * hxy +
                         nrm.y() * tan.y() * hyy;
      a_rhs.row(q) += qnn * dn + qnt * dt;
    }
  }
  hat /= cell.perimeter;
  grad_hat /= cell.perimeter;
  grad_hat_poly /= cell.perimeter;

  Eigen::MatrixXd G = moments.h2_stiff;
  Eigen::MatrixXd B = a_rhs;
  G.row(0) = hat * out.basis_dofs;
  G.row(1) = grad_hat_poly.col(0).transpose();
  G.row(2) = grad_hat_poly.col(1).transpose();
  B.row(0) = hat;
  B.row(1) = grad_hat.row(0);
  B.row(2) = grad_hat.row(1);

  out.quasi_average = hat;
  out.grad_quasi_average = grad_hat;
  out.h2_gram = G;
  out.h2_rhs = B;
  out.h2 = solve_small(G, B, "H2 projector");
  out.h2_dof = out.basis_dofs * out.h2;
}

void build_l2_projector(const CellGeometry& cell, const ScaledMonomials& basis, const DofLayout& layout,
                        const ElementMoments& moments, ProjectorSet& out) {
  if (out.h1.size() == 0) throw Error("build_l2_projector: elliptic projector not built");
  (void)basis;
  Eigen::MatrixXd C = moments.mass * out.h1;
  // rows for M_{k-2} come straight from the moment DoFs
  for (int j = 0; j < layout.n_moment; ++j) {
    C.row(j).setZero();
    C(j, layout.moment_dof(j)) = cell.area;
  }
  out.l2 = solve_small(moments.mass, C, "L2 projector");
}

ProjectorSet build_projectors(const CellGeometry& cell, const ScaledMonomials& basis, const DofLayout& layout,
                              const ElementMoments& moments) {
  ProjectorSet p;
  build_h1_projector(cell, basis, layout, moments, p);
  build_h2_projector(cell, basis, layout, moments, p);
  build_l2_projector(cell, basis, layout, moments, p);
  return p;
}

double quasi_average(const std::vector<PolyCoeffs>& traces, const CellGeometry& cell) {
  double total = 0.0;
  for (int i = 0; i < cell.n_edges(); ++i) {
    const EdgeMonomials edge(cell.vertices[i], cell.vertices[(i + 1) % cell.n_edges()],
                             static_cast<int>(traces[i].size()) - 1);
    total += edge.integrate(traces[i]);
  }
  return total / cell.perimeter;
}

}  // namespace ipvem
