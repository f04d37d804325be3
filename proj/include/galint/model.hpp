#pragma once

#include <string>
#include <vector>

#include "galint/galerkin.hpp"
#include "galint/se3.hpp"

namespace galint {

enum class JointKind { revolute, prismatic };

/// One-degree-of-freedom joint connecting a body to its parent.
/// The twist S_i is the unit screw in the child body frame and is constant.
struct Joint {
  JointKind kind = JointKind::revolute;
  Twist twist = make_twist({0, 0, 1}, {0, 0, 0});
  int parent = -1;  // body index, or -1 for the root frame {0}
  SpatialTransform rest_transform;  // g_{par(i),i}(0)
};

/// Rigid body with frame origin at its mass center.
struct Body {
  std::string name;
  double mass = 1.0;                        // kg
  Mat3 rotational_inertia = Mat3::Zero();   // about the mass center, body frame
  Joint joint;

  /// Body inertia M_i = diag{I_i, m_i I}.
  Mat6 spatial_inertia() const {
    Mat6 m = Mat6::Zero();
    m.topLeftCorner<3, 3>() = rotational_inertia;
    m.bottomRightCorner<3, 3>() = mass * Mat3::Identity();
    return m;
  }
};

struct ValidationIssue {
  int body = -1;  // -1 for model-level issues
  std::string message;
};

/// Immutable kinematic tree. Bodies are indexed 0..n-1 in construction
/// order; validation enforces parent < child rather than re-sorting.
class MechanismModel {
 public:
  MechanismModel() = default;
  MechanismModel(std::vector<Body> bodies, const Vec3& gravity);

  int size() const { return static_cast<int>(bodies_.size()); }
  const Body& body(int i) const { return bodies_[i]; }
  const std::vector<Body>& bodies() const { return bodies_; }
  int parent(int i) const { return bodies_[i].joint.parent; }
  const std::vector<int>& children(int i) const { return children_[i]; }
  const Vec3& gravity() const { return gravity_; }
  const Mat6& body_inertia(int i) const { return inertias_[i]; }

  /// Every invariant violation, with the offending body index. Empty when ok.
  std::vector<ValidationIssue> validate() const;

 private:
  std::vector<Body> bodies_;
  std::vector<std::vector<int>> children_;
  std::vector<Mat6> inertias_;
  Vec3 gravity_{0, 0, -9.81};
};

/// Per-body, per-control-point spatial quantities from the forward pass.
/// The s+1 node slices of each body are stored contiguously.
struct KinematicsCache {
  int n = 0;
  int s = 0;
  std::vector<SpatialTransform> g;  // g_i^{k,a}
  std::vector<Twist> S;             // Sbar = Ad_g S_i
  std::vector<Mat6> M;              // Mbar = Ad_g^{-T} M_i Ad_g^{-1}
  std::vector<Twist> v;             // vbar
  std::vector<Twist> Sdot;          // ad_vbar Sbar
  Eigen::MatrixXd qdot;             // n x (s+1)

  void resize(int n_bodies, int s_order);
  int at(int i, int a) const { return i * (s + 1) + a; }
};

/// Populates the cache for every (body, node): configurations, spatial
/// joint axes and inertias, nodal velocities qdot^{k,a} = (1/dt) sum_b
/// b^{ab} q^{k,b}, and spatial velocities. qbar is n x (s+1), one column
/// per control point.
void forward_pass(const MechanismModel& model, const GalerkinScheme& scheme,
                  const Eigen::MatrixXd& qbar, double dt, KinematicsCache& cache);

KinematicsCache forward_pass(const MechanismModel& model, const GalerkinScheme& scheme,
                             const Eigen::MatrixXd& qbar, double dt);

/// K = 1/2 sum_i vbar_i^T Mbar_i vbar_i at control point a.
double kinetic_energy(const KinematicsCache& cache, int a);

/// V_g = -sum_i m_i g^T p_i at control point a.
double potential_energy(const MechanismModel& model, const KinematicsCache& cache, int a);

/// L = K - V at control point a.
double lagrangian(const MechanismModel& model, const KinematicsCache& cache, int a);

}  // namespace galint
