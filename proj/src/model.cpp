#include "galint/model.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace galint {

MechanismModel::MechanismModel(std::vector<Body> bodies, const Vec3& gravity)
    : bodies_(std::move(bodies)), gravity_(gravity) {
  const int n = size();
  children_.assign(n, {});
  inertias_.reserve(n);
  for (int i = 0; i < n; ++i) {
    const int p = bodies_[i].joint.parent;
    if (p >= 0 && p < n) children_[p].push_back(i);
    inertias_.push_back(bodies_[i].spatial_inertia());
  }
}

std::vector<ValidationIssue> MechanismModel::validate() const {
  std::vector<ValidationIssue> issues;
  for (int i = 0; i < size(); ++i) {
    const Body& b = bodies_[i];
    if (b.joint.parent >= i) {
      issues.push_back({i, "topological order violated: parent(" + std::to_string(i) +
                               ") = " + std::to_string(b.joint.parent)});
    }
    if (b.joint.parent < -1) {
      issues.push_back({i, "parent index out of range"});
    }
    const Vec3 s = angular(b.joint.twist);
    const Vec3 nv = linear(b.joint.twist);
    if (b.joint.kind == JointKind::revolute) {
      if (std::abs(s.norm() - 1.0) > 1e-9) {
        issues.push_back({i, "revolute joint axis is not a unit screw: |s| = " +
                                 std::to_string(s.norm())});
      }
    } else {
      if (s.norm() > 1e-9) {
        issues.push_back({i, "prismatic joint has nonzero rotational part"});
      }
      if (std::abs(nv.norm() - 1.0) > 1e-9) {
        issues.push_back({i, "prismatic joint direction is not unit: |n| = " +
                                 std::to_string(nv.norm())});
      }
    }
    if (b.mass < 0.0) {
      issues.push_back({i, "negative mass"});
    }
    if ((b.rotational_inertia - b.rotational_inertia.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      issues.push_back({i, "rotational inertia is not symmetric"});
    } else {
      Eigen::SelfAdjointEigenSolver<Mat3> es(b.rotational_inertia);
      if (es.eigenvalues().minCoeff() < -1e-12) {
        issues.push_back({i, "rotational inertia is not positive semidefinite"});
      }
    }
    if (b.joint.rest_transform.orthonormality_defect() > 1e-9) {
      issues.push_back({i, "rest transform rotation is not orthonormal"});
    }
  }
  return issues;
}

void KinematicsCache::resize(int n_bodies, int s_order) {
  n = n_bodies;
  s = s_order;
  const int total = n * (s + 1);
  g.resize(total);
  S.resize(total);
  M.resize(total);
  v.resize(total);
  Sdot.resize(total);
  qdot.resize(n, s + 1);
}

void forward_pass(const MechanismModel& model, const GalerkinScheme& scheme,
                  const Eigen::MatrixXd& qbar, double dt, KinematicsCache& cache) {
  const int n = model.size();
  const int s = scheme.s;
  if (qbar.rows() != n || qbar.cols() != s + 1) {
    throw std::invalid_argument("forward_pass: control points must be n x (s+1)");
  }
  cache.resize(n, s);
  cache.qdot = qbar * scheme.diff_matrix.transpose() / dt;
  for (int i = 0; i < n; ++i) {
    const Body& body = model.body(i);
    const int par = model.parent(i);
    for (int a = 0; a <= s; ++a) {
      const int idx = cache.at(i, a);
      const SpatialTransform joint_motion = exp_twist(body.joint.twist, qbar(i, a));
      const SpatialTransform local = body.joint.rest_transform * joint_motion;
      cache.g[idx] = par < 0 ? local : cache.g[cache.at(par, a)] * local;
      cache.S[idx] = transform_twist(cache.g[idx], body.joint.twist);
      const Mat6 ad_inv = adjoint_inv(cache.g[idx]);
      cache.M[idx].noalias() = ad_inv.transpose() * model.body_inertia(i) * ad_inv;
      const Twist parent_v = par < 0 ? Twist::Zero() : cache.v[cache.at(par, a)];
      cache.v[idx] = parent_v + cache.S[idx] * cache.qdot(i, a);
      cache.Sdot[idx] = ad_apply(cache.v[idx], cache.S[idx]);
    }
  }
}

KinematicsCache forward_pass(const MechanismModel& model, const GalerkinScheme& scheme,
                             const Eigen::MatrixXd& qbar, double dt) {
  KinematicsCache cache;
  forward_pass(model, scheme, qbar, dt, cache);
  return cache;
}

double kinetic_energy(const KinematicsCache& cache, int a) {
  double k = 0.0;
  for (int i = 0; i < cache.n; ++i) {
    const int idx = cache.at(i, a);
    k += 0.5 * cache.v[idx].dot(cache.M[idx] * cache.v[idx]);
  }
  return k;
}

double potential_energy(const MechanismModel& model, const KinematicsCache& cache, int a) {
  double v = 0.0;
  for (int i = 0; i < cache.n; ++i) {
    v -= model.body(i).mass * model.gravity().dot(cache.g[cache.at(i, a)].translation);
  }
  return v;
}

double lagrangian(const MechanismModel& model, const KinematicsCache& cache, int a) {
  return kinetic_energy(cache, a) - potential_energy(model, cache, a);
}

}  // namespace galint
