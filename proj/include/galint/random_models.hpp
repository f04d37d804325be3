#pragma once

#include <memory>
#include <random>

#include "galint/forces.hpp"
#include "galint/model.hpp"

namespace galint {

/// Random kinematic tree with n bodies: chain-biased topology, random
/// revolute/prismatic unit screws, random rest transforms, and positive
/// definite inertias. Always passes validate().
MechanismModel random_tree_mechanism(std::mt19937_64& rng, int n);

/// Random control points near a random base configuration plus a random
/// momentum, shaped for the given scheme.
struct RandomState {
  Eigen::MatrixXd qbar;  // n x (s+1)
  Eigen::VectorXd p;
};
RandomState random_state(std::mt19937_64& rng, int n, int s, double dt);

/// Smooth nonlinear test force: quadratic spatial drag plus a linear pull
/// of each mass center toward the origin, with viscous joint damping.
/// Jacobians intentionally left to the finite-difference fallback.
class DragSpringForceModel final : public ForceModel {
 public:
  DragSpringForceModel(double drag, double spring, double damping)
      : drag_(drag), spring_(spring), damping_(damping) {}

  Wrench body_wrench(int, const SpatialTransform& g, const Twist& v, const Eigen::VectorXd&,
                     double) const override {
    Wrench f = -drag_ * (1.0 + v.squaredNorm()) * v;
    linear(f) -= spring_ * g.translation;
    return f;
  }
  double joint_force(int, double, double qdot, const Eigen::VectorXd&, double) const override {
    return -damping_ * qdot;
  }

 private:
  double drag_, spring_, damping_;
};

/// Picks one of: no force, viscous joint damping (analytic Jacobians), or
/// the drag-spring model (finite-difference Jacobians).
std::shared_ptr<ForceModel> random_force_model(std::mt19937_64& rng);

}  // namespace galint
