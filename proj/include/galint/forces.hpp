#pragma once

#include <functional>

#include "galint/se3.hpp"

namespace galint {

/// Control inputs sampled at node times; an empty function means no inputs.
using ControlFunction = std::function<Eigen::VectorXd(double t)>;

inline Eigen::VectorXd sample_controls(const ControlFunction& controls, double t) {
  return controls ? controls(t) : Eigen::VectorXd();
}

/// Continuous-time force inputs. body_wrench returns the sum of wrenches
/// acting directly on body i, expressed in frame {0}; joint_force the scalar
/// force on joint i. Wrenches may depend on (g_i, vbar_i, u), joint forces on
/// (q_i, qdot_i, u).
///
/// Analytic Jacobians are optional; when has_analytic_jacobians() is false,
/// central differences are used instead. d_wrench_d_pose is with respect to a
/// right-trivialized pose perturbation g -> exp(eta^) g.
class ForceModel {
 public:
  virtual ~ForceModel() = default;

  virtual Wrench body_wrench(int i, const SpatialTransform& g, const Twist& v,
                             const Eigen::VectorXd& u, double t) const {
    (void)i; (void)g; (void)v; (void)u; (void)t;
    return Wrench::Zero();
  }
  virtual double joint_force(int i, double q, double qdot, const Eigen::VectorXd& u,
                             double t) const {
    (void)i; (void)q; (void)qdot; (void)u; (void)t;
    return 0.0;
  }

  virtual bool has_analytic_jacobians() const { return false; }
  virtual Mat6 d_wrench_d_pose(int i, const SpatialTransform& g, const Twist& v,
                               const Eigen::VectorXd& u, double t) const {
    (void)i; (void)g; (void)v; (void)u; (void)t;
    return Mat6::Zero();
  }
  virtual Mat6 d_wrench_d_velocity(int i, const SpatialTransform& g, const Twist& v,
                                   const Eigen::VectorXd& u, double t) const {
    (void)i; (void)g; (void)v; (void)u; (void)t;
    return Mat6::Zero();
  }
  virtual double d_joint_force_d_q(int i, double q, double qdot, const Eigen::VectorXd& u,
                                   double t) const {
    (void)i; (void)q; (void)qdot; (void)u; (void)t;
    return 0.0;
  }
  virtual double d_joint_force_d_qdot(int i, double q, double qdot, const Eigen::VectorXd& u,
                                      double t) const {
    (void)i; (void)q; (void)qdot; (void)u; (void)t;
    return 0.0;
  }
};

class ZeroForceModel final : public ForceModel {
 public:
  bool has_analytic_jacobians() const override { return true; }
};

/// Q_i = -c qdot_i on every joint.
class JointDampingModel final : public ForceModel {
 public:
  explicit JointDampingModel(double damping) : damping_(damping) {}

  double joint_force(int, double, double qdot, const Eigen::VectorXd&, double) const override {
    return -damping_ * qdot;
  }
  bool has_analytic_jacobians() const override { return true; }
  double d_joint_force_d_qdot(int, double, double, const Eigen::VectorXd&, double) const override {
    return -damping_;
  }

 private:
  double damping_;
};

/// Force Jacobians evaluated at one state, either analytic or by central
/// differences with step max(1e-7, 1e-7 |x|).
struct ForceJacobians {
  Mat6 d_wrench_d_pose = Mat6::Zero();
  Mat6 d_wrench_d_velocity = Mat6::Zero();
  double d_joint_force_d_q = 0.0;
  double d_joint_force_d_qdot = 0.0;
};

ForceJacobians force_jacobians(const ForceModel& fm, int i, const SpatialTransform& g,
                               const Twist& v, double q, double qdot,
                               const Eigen::VectorXd& u, double t);

}  // namespace galint
