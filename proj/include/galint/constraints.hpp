#pragma once

#include <Eigen/Dense>

namespace galint {

/// Mechanical constraints h(q, qdot) = 0 with constraint-force matrix A(q).
/// For holonomic constraints A(q) is the transposed value Jacobian.
/// Jacobians of h default to central differences.
class ConstraintSet {
 public:
  virtual ~ConstraintSet() = default;

  virtual int count() const = 0;

  virtual Eigen::VectorXd value(const Eigen::VectorXd& q, const Eigen::VectorXd& qdot) const = 0;

  /// A(q), n x m.
  virtual Eigen::MatrixXd force_matrix(const Eigen::VectorXd& q) const = 0;

  virtual Eigen::MatrixXd d_value_d_q(const Eigen::VectorXd& q,
                                      const Eigen::VectorXd& qdot) const;
  virtual Eigen::MatrixXd d_value_d_qdot(const Eigen::VectorXd& q,
                                         const Eigen::VectorXd& qdot) const;
};

/// Holonomic constraints h(q) = 0; A(q) = (dh/dq)^T by central differences
/// unless d_value_d_q is overridden.
class HolonomicConstraintSet : public ConstraintSet {
 public:
  Eigen::MatrixXd force_matrix(const Eigen::VectorXd& q) const override {
    return d_value_d_q(q, Eigen::VectorXd::Zero(q.size())).transpose();
  }
  Eigen::MatrixXd d_value_d_qdot(const Eigen::VectorXd& q,
                                 const Eigen::VectorXd& qdot) const override {
    (void)qdot;
    return Eigen::MatrixXd::Zero(count(), q.size());
  }
};

}  // namespace galint
