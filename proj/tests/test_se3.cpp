#include "doctest.h"
#include "galint/se3.hpp"
#include "test_util.hpp"

#include <random>

using namespace galint;
using namespace galint_test;

namespace {

// Independent oracle: exp of the 4x4 twist matrix by scaling-and-squaring
// on a plain Taylor series.
Eigen::Matrix4d matrix_exp_series(const Eigen::Matrix4d& a) {
  int squarings = 0;
  Eigen::Matrix4d scaled = a;
  while (scaled.cwiseAbs().maxCoeff() > 0.25) {
    scaled *= 0.5;
    ++squarings;
  }
  Eigen::Matrix4d result = Eigen::Matrix4d::Identity();
  Eigen::Matrix4d term = Eigen::Matrix4d::Identity();
  for (int k = 1; k <= 24; ++k) {
    term = (term * scaled / k).eval();
    result += term;
  }
  for (int k = 0; k < squarings; ++k) result = (result * result).eval();
  return result;
}

Eigen::Matrix4d hat4(const Twist& S, double q) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m.topLeftCorner<3, 3>() = hat(angular(S) * q);
  m.topRightCorner<3, 1>() = linear(S) * q;
  return m;
}

}  // namespace

TEST_SUITE("se3") {

TEST_CASE("hat of zero is the zero matrix") {
  CHECK(hat(Vec3::Zero()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("vee inverts hat") {
  const Vec3 w(1, 2, 3);
  CHECK((vee(hat(w)) - w).norm() == 0.0);
}

TEST_CASE("hat encodes the cross product, z cross x = y") {
  const Vec3 r = hat(Vec3(0, 0, 1)) * Vec3(1, 0, 0);
  CHECK((r - Vec3(0, 1, 0)).norm() == doctest::Approx(0.0));
}

TEST_CASE("vee rejects matrices with a symmetric part") {
  Mat3 m = hat(Vec3(1, 2, 3));
  m(0, 0) += 1e-6;
  CHECK_THROWS_AS(vee(m), std::invalid_argument);
}

TEST_CASE("exp_twist at q=0 is the identity") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10; ++i) {
    const SpatialTransform g = exp_twist(random_vec6(rng), 0.0);
    CHECK((g.rotation - Mat3::Identity()).norm() == 0.0);
    CHECK(g.translation.norm() == 0.0);
  }
}

TEST_CASE("exp_twist quarter turn about z matches the series oracle") {
  const Twist S = make_twist({0, 0, 1}, {0, 0, 0});
  const double q = M_PI / 2;
  const SpatialTransform g = exp_twist(S, q);
  const Eigen::Matrix4d expect = matrix_exp_series(hat4(S, q));
  CHECK((g.homogeneous() - expect).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(g.translation.norm() < 1e-15);
  CHECK(g.rotation(0, 1) == doctest::Approx(-1.0));
}

TEST_CASE("exp_twist of random screws matches the series oracle") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 50; ++i) {
    const Twist S = random_vec6(rng);
    const double q = std::uniform_real_distribution<double>(-2.5, 2.5)(rng);
    const SpatialTransform g = exp_twist(S, q);
    const Eigen::Matrix4d expect = matrix_exp_series(hat4(S, q));
    CHECK((g.homogeneous() - expect).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("exp_twist pure prismatic translates along the direction") {
  const SpatialTransform g = exp_twist(make_twist({0, 0, 0}, {1, 0, 0}), 2.5);
  CHECK((g.rotation - Mat3::Identity()).norm() == 0.0);
  CHECK((g.translation - Vec3(2.5, 0, 0)).norm() == 0.0);
}

TEST_CASE("exp_twist tiny-angle branch stays orthonormal") {
  const Twist S = make_twist({0.6, -0.8, 0}, {0.3, 0.1, -0.2});
  for (const double q : {0.0, 1e-12, 1e-10, 1e-8, 1e-5}) {
    CHECK(exp_twist(S, q).orthonormality_defect() < 1e-14);
  }
}

TEST_CASE("adjoint of the identity is the 6x6 identity") {
  CHECK((adjoint(SpatialTransform::Identity()) - Mat6::Identity()).norm() == 0.0);
}

TEST_CASE("adjoint block structure is [R 0; p^R R]") {
  std::mt19937_64 rng(3);
  const SpatialTransform g = random_transform(rng);
  const Mat6 a = adjoint(g);
  CHECK((a.topLeftCorner<3, 3>() - g.rotation).norm() == 0.0);
  CHECK(a.topRightCorner<3, 3>().norm() == 0.0);
  CHECK((a.bottomLeftCorner<3, 3>() - hat(g.translation) * g.rotation).norm() == 0.0);
}

TEST_CASE("adjoint is a homomorphism and adjoint_inv is the inverse") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const SpatialTransform g1 = random_transform(rng);
    const SpatialTransform g2 = random_transform(rng);
    CHECK((adjoint(g1 * g2) - adjoint(g1) * adjoint(g2)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((adjoint_inv(g1) * adjoint(g1) - Mat6::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((adjoint_inv(g1) - adjoint(g1.inverse())).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((adjoint_inv_transpose(g1) - adjoint_inv(g1).transpose()).cwiseAbs().maxCoeff() <
          1e-13);
  }
}

TEST_CASE("transform helpers agree with the matrices") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 100; ++i) {
    const SpatialTransform g = random_transform(rng);
    const Twist v = random_vec6(rng);
    CHECK((transform_twist(g, v) - adjoint(g) * v).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((inv_transform_twist(g, v) - adjoint_inv(g) * v).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("ad of zero is the zero matrix") {
  CHECK(ad(Twist::Zero()).norm() == 0.0);
}

TEST_CASE("ad matches the matrix commutator through hat") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    const Twist v1 = random_vec6(rng);
    const Twist v2 = random_vec6(rng);
    const Eigen::Matrix4d m1 = hat4(v1, 1.0);
    const Eigen::Matrix4d m2 = hat4(v2, 1.0);
    const Eigen::Matrix4d comm = m1 * m2 - m2 * m1;
    Twist expect;
    angular(expect) = vee(comm.topLeftCorner<3, 3>());
    linear(expect) = comm.topRightCorner<3, 1>();
    CHECK((ad(v1) * v2 - expect).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((ad_apply(v1, v2) - expect).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("ad of a twist annihilates itself") {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 100; ++i) {
    const Twist v = random_vec6(rng);
    CHECK((ad(v) * v).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("dual pairing identity over random triples") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 100; ++i) {
    const Wrench F = random_vec6(rng);
    const Twist v1 = random_vec6(rng);
    const Twist v2 = random_vec6(rng);
    const double lhs = F.dot(ad(v1) * v2);
    const double mid = v2.dot(ad_dual(F) * v1);
    const double neg = -v1.dot(ad_dual(F) * v2);
    CHECK(lhs == doctest::Approx(mid).epsilon(1e-12));
    CHECK(lhs == doctest::Approx(neg).epsilon(1e-12));
    CHECK((ad_dual_apply(F, v1) - ad_dual(F) * v1).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((ad_transpose_apply(v1, F) - ad(v1).transpose() * F).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("derivative of the adjoint along a screw matches ad") {
  // d/dq Ad_{exp(S^ q)} = ad_{Sbar} Ad with Sbar = Ad_{exp(S^ q)} S.
  std::mt19937_64 rng(29);
  const double h = 1e-6;
  for (int i = 0; i < 20; ++i) {
    const Twist S = random_vec6(rng);
    const double q = std::uniform_real_distribution<double>(-1.5, 1.5)(rng);
    const Mat6 fd = (adjoint(exp_twist(S, q + h)) - adjoint(exp_twist(S, q - h))) / (2.0 * h);
    const SpatialTransform g = exp_twist(S, q);
    const Mat6 expect = ad(transform_twist(g, S)) * adjoint(g);
    CHECK((fd - expect).cwiseAbs().maxCoeff() < 1e-6);
  }
}

}  // TEST_SUITE
