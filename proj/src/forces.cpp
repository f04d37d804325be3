#include "galint/forces.hpp"

#include <cmath>

namespace galint {

namespace {

double fd_step(double x) { return std::max(1e-7, 1e-7 * std::abs(x)); }

}  // namespace

ForceJacobians force_jacobians(const ForceModel& fm, int i, const SpatialTransform& g,
                               const Twist& v, double q, double qdot,
                               const Eigen::VectorXd& u, double t) {
  ForceJacobians jac;
  if (fm.has_analytic_jacobians()) {
    jac.d_wrench_d_pose = fm.d_wrench_d_pose(i, g, v, u, t);
    jac.d_wrench_d_velocity = fm.d_wrench_d_velocity(i, g, v, u, t);
    jac.d_joint_force_d_q = fm.d_joint_force_d_q(i, q, qdot, u, t);
    jac.d_joint_force_d_qdot = fm.d_joint_force_d_qdot(i, q, qdot, u, t);
    return jac;
  }
  const double h = 1e-7;
  for (int c = 0; c < 6; ++c) {
    Twist eta = Twist::Zero();
    eta[c] = 1.0;
    const SpatialTransform plus = exp_twist(eta, h) * g;
    const SpatialTransform minus = exp_twist(eta, -h) * g;
    jac.d_wrench_d_pose.col(c) =
        (fm.body_wrench(i, plus, v, u, t) - fm.body_wrench(i, minus, v, u, t)) / (2.0 * h);

    Twist vp = v, vm = v;
    const double hv = fd_step(v[c]);
    vp[c] += hv;
    vm[c] -= hv;
    jac.d_wrench_d_velocity.col(c) =
        (fm.body_wrench(i, g, vp, u, t) - fm.body_wrench(i, g, vm, u, t)) / (2.0 * hv);
  }
  const double hq = fd_step(q);
  jac.d_joint_force_d_q =
      (fm.joint_force(i, q + hq, qdot, u, t) - fm.joint_force(i, q - hq, qdot, u, t)) / (2.0 * hq);
  const double hqd = fd_step(qdot);
  jac.d_joint_force_d_qdot =
      (fm.joint_force(i, q, qdot + hqd, u, t) - fm.joint_force(i, q, qdot - hqd, u, t)) /
      (2.0 * hqd);
  return jac;
}

}  // namespace galint
