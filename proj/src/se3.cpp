#include "galint/se3.hpp"

#include <cmath>

namespace galint {

Mat3 hat(const Vec3& w) {
  Mat3 m;
  m << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
       -w.y(), w.x(), 0.0;
  return m;
}

Vec3 vee(const Mat3& m) {
  const double sym = (m + m.transpose()).cwiseAbs().maxCoeff();
  if (sym > 1e-9) {
    throw std::invalid_argument("vee: matrix is not skew-symmetric (defect " +
                                std::to_string(sym) + ")");
  }
  return {m(2, 1), m(0, 2), m(1, 0)};
}

namespace {

// Rodrigues coefficients sin(t)/t, (1-cos(t))/t^2, (t-sin(t))/t^3 with
// series branches near zero.
struct RodriguesCoeffs {
  double a, b, c;
};

RodriguesCoeffs rodrigues_coeffs(double theta) {
  const double t2 = theta * theta;
  RodriguesCoeffs k;
  if (theta < 1e-9) {
    k.a = 1.0 - t2 / 6.0;
    k.b = 0.5 - t2 / 24.0;
    k.c = 1.0 / 6.0 - t2 / 120.0;
    return k;
  }
  k.a = std::sin(theta) / theta;
  const double sh = std::sin(0.5 * theta);
  k.b = 2.0 * sh * sh / t2;
  // (t - sin t)/t^3 cancels badly below ~1e-2; the series is exact to
  // double precision there.
  k.c = theta < 1e-2 ? 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0
                     : (theta - std::sin(theta)) / (t2 * theta);
  return k;
}

}  // namespace

SpatialTransform exp_twist(const Twist& S, double q) {
  const Vec3 w = angular(S) * q;
  const Vec3 v = linear(S) * q;
  const double theta = w.norm();
  const RodriguesCoeffs k = rodrigues_coeffs(theta);
  const Mat3 W = hat(w);
  const Mat3 W2 = W * W;
  SpatialTransform g;
  g.rotation = Mat3::Identity() + k.a * W + k.b * W2;
  g.translation = (Mat3::Identity() + k.b * W + k.c * W2) * v;
  return g;
}

Mat6 adjoint(const SpatialTransform& g) {
  Mat6 m = Mat6::Zero();
  m.topLeftCorner<3, 3>() = g.rotation;
  m.bottomRightCorner<3, 3>() = g.rotation;
  m.bottomLeftCorner<3, 3>() = hat(g.translation) * g.rotation;
  return m;
}

Mat6 adjoint_inv(const SpatialTransform& g) {
  // Ad_{g^-1} = [R^T 0; -R^T p^ R^T] via hat(R^T p) = R^T p^ R.
  Mat6 m = Mat6::Zero();
  const Mat3 rt = g.rotation.transpose();
  m.topLeftCorner<3, 3>() = rt;
  m.bottomRightCorner<3, 3>() = rt;
  m.bottomLeftCorner<3, 3>() = -rt * hat(g.translation);
  return m;
}

Mat6 adjoint_inv_transpose(const SpatialTransform& g) {
  Mat6 m = Mat6::Zero();
  m.topLeftCorner<3, 3>() = g.rotation;
  m.bottomRightCorner<3, 3>() = g.rotation;
  m.topRightCorner<3, 3>() = hat(g.translation) * g.rotation;
  return m;
}

Twist transform_twist(const SpatialTransform& g, const Twist& v) {
  const Vec3 rw = g.rotation * angular(v);
  return make_twist(rw, g.translation.cross(rw) + g.rotation * linear(v));
}

Twist inv_transform_twist(const SpatialTransform& g, const Twist& v) {
  const Mat3 rt = g.rotation.transpose();
  return make_twist(rt * angular(v),
                    rt * (linear(v) - g.translation.cross(angular(v))));
}

Mat6 ad(const Twist& v) {
  Mat6 m = Mat6::Zero();
  const Mat3 wh = hat(angular(v));
  m.topLeftCorner<3, 3>() = wh;
  m.bottomRightCorner<3, 3>() = wh;
  m.bottomLeftCorner<3, 3>() = hat(linear(v));
  return m;
}

Twist ad_apply(const Twist& v1, const Twist& v2) {
  return make_twist(angular(v1).cross(angular(v2)),
                    linear(v1).cross(angular(v2)) + angular(v1).cross(linear(v2)));
}

Mat6 ad_dual(const Wrench& F) {
  Mat6 m = Mat6::Zero();
  const Mat3 fh = hat(linear(F));
  m.topLeftCorner<3, 3>() = hat(angular(F));
  m.topRightCorner<3, 3>() = fh;
  m.bottomLeftCorner<3, 3>() = fh;
  return m;
}

Wrench ad_dual_apply(const Wrench& F, const Twist& v) {
  return make_twist(angular(F).cross(angular(v)) + linear(F).cross(linear(v)),
                    linear(F).cross(angular(v)));
}

Wrench ad_transpose_apply(const Twist& v, const Wrench& F) {
  // Equals ad^D_F v; kept separate so call sites read like the formulas.
  return make_twist(-angular(v).cross(angular(F)) - linear(v).cross(linear(F)),
                    -angular(v).cross(linear(F)));
}

}  // namespace galint
