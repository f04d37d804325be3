#pragma once

#include <vector>

#include "galint/del.hpp"
#include "galint/forces.hpp"
#include "galint/model.hpp"

namespace galint {

/// Second derivatives of kinetic and gravitational potential energy at one
/// configuration, plus the first derivatives the discrete chain rule needs.
/// Index convention: d2K_dqdot_dq(i, j) = d/dq_j (dK/dqdot_i), and
/// d2K_dq_dqdot = d2K_dqdot_dq^T.
struct EnergyHessians {
  Eigen::MatrixXd d2K_dqdot2;    // mass matrix
  Eigen::MatrixXd d2K_dqdot_dq;
  Eigen::MatrixXd d2K_dq_dqdot;
  Eigen::MatrixXd d2K_dq2;
  Eigen::MatrixXd d2V_dq2;
  Eigen::VectorXd dK_dq;
  Eigen::VectorXd dK_dqdot;
  Eigen::VectorXd dV_dq;
};

/// Work counters for the recursive Hessian passes.
struct HessianOpCounts {
  long block_writes = 0;
  long accumulator_updates = 0;
};

/// Recursive computation of the four kinetic-energy Hessian blocks and the
/// gravitational Hessian: one forward pass, one backward accumulation, then
/// ancestor-pair block fills.
EnergyHessians energy_hessians(const MechanismModel& model, const Eigen::VectorXd& q,
                               const Eigen::VectorXd& qdot, HessianOpCounts* counts = nullptr);

/// Blocks D_{a+1} D_{b+1} L_d of the discrete Lagrangian, each n x n.
struct DiscreteLagrangianHessian {
  int n = 0;
  int s = 0;
  std::vector<Eigen::MatrixXd> blocks;  // row-major over (a, b), a,b = 0..s

  const Eigen::MatrixXd& block(int a, int b) const { return blocks[a * (s + 1) + b]; }
  Eigen::MatrixXd& block(int a, int b) { return blocks[a * (s + 1) + b]; }

  /// Full (s+1)n x (s+1)n matrix, node-major.
  Eigen::MatrixXd dense() const;
};

/// Chain rule of the nodal energy Hessians through the velocity
/// reconstruction: O(s^2 n^2).
DiscreteLagrangianHessian d2_discrete_lagrangian(const MechanismModel& model,
                                                 const GalerkinScheme& scheme,
                                                 const Eigen::MatrixXd& qbar, double dt);

/// Jacobian of the DEL residuals and momentum update with respect to all
/// control points and the incoming momentum.
struct DelJacobian {
  int n = 0;
  int s = 0;
  std::vector<Eigen::MatrixXd> dr_dq;      // (a, b): a = 0..s-1 residual row, b = 0..s
  std::vector<Eigen::MatrixXd> dpnext_dq;  // b = 0..s
  // dr^{k,a}/dp^k is the identity for a = 0 and zero otherwise.

  const Eigen::MatrixXd& dr(int a, int b) const { return dr_dq[a * (s + 1) + b]; }
  Eigen::MatrixXd& dr(int a, int b) { return dr_dq[a * (s + 1) + b]; }

  /// The implicit Newton Jacobian: rows stacked over residual nodes
  /// a = 0..s-1, columns over unknowns q^{k,1..s}; both node-major.
  Eigen::MatrixXd newton_jacobian() const;
};

DelJacobian linearize_del(const MechanismModel& model, const GalerkinScheme& scheme,
                          const Eigen::MatrixXd& qbar, const Eigen::VectorXd& p,
                          const ForceModel& fm, const ControlFunction& controls, double t0,
                          double dt);

}  // namespace galint
