#pragma once

#include <vector>

#include "galint/constraints.hpp"
#include "galint/forces.hpp"
#include "galint/model.hpp"

namespace galint {

/// One end of the discrete update rule (q^{k,0}, p^k) -> (q^{k+1,0}, p^{k+1}).
struct DiscreteState {
  Eigen::VectorXd q;  // q^{k,0}
  Eigen::VectorXd p;  // discrete momentum p^k
  int index = 0;      // time index k
};

/// Residuals of the DEL equations plus the articulated quantities the Newton
/// backward pass reuses. mu/gamma/omega are indexed like the kinematics
/// cache: body-major, node slices contiguous.
struct DelOutput {
  Eigen::MatrixXd residuals;      // n x s, column a holds r^{k,a}
  Eigen::VectorXd next_momentum;  // p^{k+1}
  std::vector<Wrench> mu;         // discrete articulated body momentum
  std::vector<Wrench> gamma;      // discrete articulated body impulse
  std::vector<Wrench> omega;
  int n = 0;
  int s = 0;

  int at(int i, int a) const { return i * (s + 1) + a; }
  double residual_norm() const {
    return residuals.size() == 0 ? 0.0 : residuals.cwiseAbs().maxCoeff();
  }
};

/// Counts how often each (body, node) pair is touched by the traversals.
struct TraversalStats {
  std::vector<int> visits;
};

/// Discrete impulse on body i at node a, gravity included:
/// w^a dt (F_grav(g) + F_ext(g, v, u)), expressed in frame {0}.
Wrench discrete_impulse(const MechanismModel& model, const ForceModel& fm, int i,
                        const SpatialTransform& g, const Twist& v, const Eigen::VectorXd& u,
                        double t, double wa_dt);

/// Spatial gravity wrench m_i [p x g; g] and its right-trivialized pose
/// derivative.
Wrench gravity_wrench(const MechanismModel& model, int i, const SpatialTransform& g);
Mat6 gravity_wrench_d_pose(const MechanismModel& model, int i, const SpatialTransform& g);

/// Evaluates the DEL residuals and next momentum in one forward and one
/// backward tree traversal per control point. The cache is caller-owned
/// scratch; it is left populated for reuse by the Newton direction.
/// t0 is the interval start time k dt.
void evaluate_del(const MechanismModel& model, const GalerkinScheme& scheme,
                  const Eigen::MatrixXd& qbar, const Eigen::VectorXd& p, const ForceModel& fm,
                  const ControlFunction& controls, double t0, double dt, KinematicsCache& cache,
                  DelOutput& out, TraversalStats* stats = nullptr);

DelOutput evaluate_del(const MechanismModel& model, const GalerkinScheme& scheme,
                       const Eigen::MatrixXd& qbar, const Eigen::VectorXd& p,
                       const ForceModel& fm, const ControlFunction& controls, double t0,
                       double dt);

/// The momentum leg p^{k+1} alone (unforced).
Eigen::VectorXd discrete_momentum(const MechanismModel& model, const GalerkinScheme& scheme,
                                  const Eigen::MatrixXd& qbar, double dt);

struct ConstrainedResidual {
  Eigen::MatrixXd residuals;             // n x s, with A^{k,a} lambda^{k,a} added
  Eigen::VectorXd next_momentum;
  Eigen::MatrixXd constraint_residuals;  // m x s, h at nodes a = 1..s
};

/// Constrained DEL residuals: appends A(q^{k,a}) lambda^{k,a} to the
/// unconstrained rows and stacks the constraint values h(q^{k,a}, qdot^{k,a})
/// at nodes a = 1..s of this interval. lambda is m x s (columns a = 0..s-1).
ConstrainedResidual constrained_residual(const MechanismModel& model,
                                         const GalerkinScheme& scheme,
                                         const Eigen::MatrixXd& qbar, const Eigen::VectorXd& p,
                                         const ForceModel& fm, const ConstraintSet& constraints,
                                         const Eigen::MatrixXd& lambda,
                                         const ControlFunction& controls, double t0, double dt);

}  // namespace galint
