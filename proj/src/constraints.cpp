#include "galint/constraints.hpp"

namespace galint {

namespace {
constexpr double kStep = 1e-7;
}

Eigen::MatrixXd ConstraintSet::d_value_d_q(const Eigen::VectorXd& q,
                                           const Eigen::VectorXd& qdot) const {
  Eigen::MatrixXd jac(count(), q.size());
  Eigen::VectorXd qp = q, qm = q;
  for (int j = 0; j < q.size(); ++j) {
    qp[j] += kStep;
    qm[j] -= kStep;
    jac.col(j) = (value(qp, qdot) - value(qm, qdot)) / (2.0 * kStep);
    qp[j] = q[j];
    qm[j] = q[j];
  }
  return jac;
}

Eigen::MatrixXd ConstraintSet::d_value_d_qdot(const Eigen::VectorXd& q,
                                              const Eigen::VectorXd& qdot) const {
  Eigen::MatrixXd jac(count(), q.size());
  Eigen::VectorXd vp = qdot, vm = qdot;
  for (int j = 0; j < qdot.size(); ++j) {
    vp[j] += kStep;
    vm[j] -= kStep;
    jac.col(j) = (value(q, vp) - value(q, vm)) / (2.0 * kStep);
    vp[j] = qdot[j];
    vm[j] = qdot[j];
  }
  return jac;
}

}  // namespace galint
