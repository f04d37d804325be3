#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace galint {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Twist (ω; v_O): angular block first, then linear, as a 6-vector.
using Twist = Vec6;
/// Wrench (τ; f_O): torque block first, then linear force.
using Wrench = Vec6;

inline Twist make_twist(const Vec3& angular, const Vec3& linear) {
  Twist t;
  t.head<3>() = angular;
  t.tail<3>() = linear;
  return t;
}

inline Eigen::Block<Vec6, 3, 1> angular(Vec6& v) { return v.head<3>(); }
inline Eigen::Block<const Vec6, 3, 1> angular(const Vec6& v) { return v.head<3>(); }
inline Eigen::Block<Vec6, 3, 1> linear(Vec6& v) { return v.tail<3>(); }
inline Eigen::Block<const Vec6, 3, 1> linear(const Vec6& v) { return v.tail<3>(); }

/// Rigid transform stored as (R, p). Never materialized as 4x4 except for
/// the debug view below.
struct SpatialTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static SpatialTransform Identity() { return {}; }

  SpatialTransform operator*(const SpatialTransform& other) const {
    return {rotation * other.rotation, rotation * other.translation + translation};
  }

  SpatialTransform inverse() const {
    Mat3 rt = rotation.transpose();
    return {rt, -(rt * translation)};
  }

  /// Homogeneous 4x4 view, debugging output only.
  Eigen::Matrix4d homogeneous() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = rotation;
    m.topRightCorner<3, 1>() = translation;
    return m;
  }

  /// Frobenius deviation of R from orthonormality plus |det(R) - 1|.
  double orthonormality_defect() const {
    return (rotation.transpose() * rotation - Mat3::Identity()).norm() +
           std::abs(rotation.determinant() - 1.0);
  }
};

Mat3 hat(const Vec3& w);

/// Inverse of hat. Throws std::invalid_argument if the symmetric part of m
/// exceeds 1e-9, which signals corrupted input.
Vec3 vee(const Mat3& m);

/// exp(hat(S) q) for a twist S = (s; n): Rodrigues rotation plus the screw
/// translation. Exact identity at q = 0.
SpatialTransform exp_twist(const Twist& S, double q);

Mat6 adjoint(const SpatialTransform& g);

/// Ad_{g^-1}, formed directly from (R, p) without a 6x6 inverse.
Mat6 adjoint_inv(const SpatialTransform& g);

/// Ad_{g^-1}^T = Ad_g^{-T}, the wrench transform body -> spatial.
Mat6 adjoint_inv_transpose(const SpatialTransform& g);

/// Ad_g v without building the 6x6 matrix.
Twist transform_twist(const SpatialTransform& g, const Twist& v);

/// Ad_{g^-1} v without building the 6x6 matrix.
Twist inv_transform_twist(const SpatialTransform& g, const Twist& v);

Mat6 ad(const Twist& v);

/// ad applied to a vector: [v1, v2].
Twist ad_apply(const Twist& v1, const Twist& v2);

/// Dual operator ad^D_F = [tau^ f^; f^ 0] with F^T ad_{v1} v2 = v2^T ad^D_F v1.
Mat6 ad_dual(const Wrench& F);

/// ad^D_F v without building the 6x6 matrix.
Wrench ad_dual_apply(const Wrench& F, const Twist& v);

/// ad_v^T F without building the 6x6 matrix.
Wrench ad_transpose_apply(const Twist& v, const Wrench& F);

}  // namespace galint
