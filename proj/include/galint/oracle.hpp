#pragma once

#include "galint/del.hpp"
#include "galint/linearize.hpp"
#include "galint/model.hpp"

namespace galint {
namespace oracle {

/// Central-difference settings shared by the reference implementations.
struct FdConfig {
  double gradient_step = 1e-6;
  double hessian_step = 1e-5;
};

/// L_d = sum_a w^a L(q^{k,a}, qdot^{k,a}) dt by direct summation.
double discrete_lagrangian(const MechanismModel& model, const GalerkinScheme& scheme,
                           const Eigen::MatrixXd& qbar, double dt);

/// DEL residuals and next momentum from central differences of the discrete
/// Lagrangian plus directly evaluated discrete forces.
struct FdDelResult {
  Eigen::MatrixXd residuals;  // n x s
  Eigen::VectorXd next_momentum;
};
FdDelResult fd_del(const MechanismModel& model, const GalerkinScheme& scheme,
                   const Eigen::MatrixXd& qbar, const Eigen::VectorXd& p, const ForceModel& fm,
                   const ControlFunction& controls, double t0, double dt,
                   const FdConfig& cfg = {});

/// sn x sn Jacobian of the evaluate_del residuals with respect to
/// q^{k,1..s}, columnwise central differences. Rows and columns node-major.
Eigen::MatrixXd fd_jacobian(const MechanismModel& model, const GalerkinScheme& scheme,
                            const Eigen::MatrixXd& qbar, const Eigen::VectorXd& p,
                            const ForceModel& fm, const ControlFunction& controls, double t0,
                            double dt, const FdConfig& cfg = {});

/// -J^{-1} r by dense LU on fd_jacobian. Returns the direction as n x s
/// (columns are nodes 1..s). Throws std::runtime_error with a condition
/// estimate if J is singular.
Eigen::MatrixXd dense_newton_direction(const MechanismModel& model,
                                       const GalerkinScheme& scheme,
                                       const Eigen::MatrixXd& qbar, const Eigen::VectorXd& p,
                                       const ForceModel& fm, const ControlFunction& controls,
                                       double t0, double dt, const FdConfig& cfg = {});

/// Self-contained slow path: the same direction, but with both the residual
/// and the Jacobian obtained from fd_del, never touching the recursive
/// evaluation. O(s^3 n^3)-or-worse; used as the dense baseline in scaling
/// runs, not for tolerance checks.
Eigen::MatrixXd dense_newton_direction_from_lagrangian(
    const MechanismModel& model, const GalerkinScheme& scheme, const Eigen::MatrixXd& qbar,
    const Eigen::VectorXd& p, const ForceModel& fm, const ControlFunction& controls, double t0,
    double dt, const FdConfig& cfg = {});

/// Reference energy Hessians: second derivatives by central differences of
/// the analytic first derivatives, first derivatives by central differences
/// of the energies.
EnergyHessians fd_energy_hessians(const MechanismModel& model, const Eigen::VectorXd& q,
                                  const Eigen::VectorXd& qdot, const FdConfig& cfg = {});

/// Full (s+1)n x (s+1)n Hessian of discrete_lagrangian by second-order
/// central differences (step 1e-4).
Eigen::MatrixXd fd_d2_discrete_lagrangian(const MechanismModel& model,
                                          const GalerkinScheme& scheme,
                                          const Eigen::MatrixXd& qbar, double dt);

}  // namespace oracle
}  // namespace galint
