#pragma once

#include <Eigen/Dense>

namespace galint {

/// Control-point discretization on the normalized interval [0, 1]:
/// nodes c^0..c^s, quadrature weights w^a (sum 1), differentiation
/// coefficients b^{ab} reconstructing nodal velocities from control points,
/// and a^{ab} = w^b b^{ba}. The step size enters only at use sites.
struct GalerkinScheme {
  int s = 1;
  Eigen::VectorXd nodes;        // c^0 = 0, c^s = 1
  Eigen::VectorXd weights;      // w^a
  Eigen::MatrixXd diff_matrix;  // b^{ab}, (s+1) x (s+1)
  Eigen::MatrixXd a_matrix;     // a^{ab} = w^b b^{ba}

  double node(int a) const { return nodes[a]; }
  double weight(int a) const { return weights[a]; }
  double b(int a, int beta) const { return diff_matrix(a, beta); }
  double a(int alpha, int beta) const { return a_matrix(alpha, beta); }
};

/// Two-point scheme: nodes (0,1), weights (1/2,1/2), b = [[-1,1],[-1,1]].
GalerkinScheme trapezoidal();

/// Three-point scheme: nodes (0,1/2,1), weights (1/6,4/6,1/6),
/// b = [[-3,4,-1],[-1,0,1],[1,-4,3]].
GalerkinScheme simpson();

/// Gauss-Lobatto scheme with s+1 nodes, 1 <= s <= 12. lobatto(1) and
/// lobatto(2) reproduce trapezoidal() and simpson().
/// Throws std::invalid_argument outside the supported range.
GalerkinScheme lobatto(int s);

/// Scheme by name: "trapezoidal", "simpson", or "lobatto:<s>".
GalerkinScheme scheme_by_name(const std::string& name);

}  // namespace galint
