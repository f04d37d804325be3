#include "galint/random_models.hpp"

namespace galint {

namespace {

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec3 v(gauss(rng), gauss(rng), gauss(rng));
  while (v.norm() < 1e-6) v = Vec3(gauss(rng), gauss(rng), gauss(rng));
  return v.normalized();
}

}  // namespace

MechanismModel random_tree_mechanism(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-0.5, 0.5);
  std::uniform_real_distribution<double> mass(0.5, 2.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<Body> bodies(n);
  for (int i = 0; i < n; ++i) {
    Body& b = bodies[i];
    b.name = "b" + std::to_string(i);
    b.mass = mass(rng);
    Mat3 a;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) a(r, c) = 0.2 * gauss(rng);
    b.rotational_inertia = a * a.transpose() + 0.05 * Mat3::Identity();

    if (i == 0) {
      b.joint.parent = -1;
    } else if (unit(rng) < 0.6) {
      b.joint.parent = i - 1;
    } else {
      b.joint.parent = std::uniform_int_distribution<int>(-1, i - 1)(rng);
    }
    if (unit(rng) < 0.25) {
      b.joint.kind = JointKind::prismatic;
      b.joint.twist = make_twist(Vec3::Zero(), random_unit(rng));
    } else {
      b.joint.kind = JointKind::revolute;
      b.joint.twist = make_twist(random_unit(rng), Vec3(sym(rng), sym(rng), sym(rng)));
    }
    b.joint.rest_transform = exp_twist(make_twist(random_unit(rng), Vec3::Zero()),
                                       3.0 * sym(rng));
    b.joint.rest_transform.translation = Vec3(sym(rng), sym(rng), sym(rng));
  }
  return MechanismModel(std::move(bodies), Vec3(0, 0, -9.81));
}

RandomState random_state(std::mt19937_64& rng, int n, int s, double dt) {
  std::uniform_real_distribution<double> angle(-1.0, 1.0);
  std::uniform_real_distribution<double> rate(-1.5, 1.5);
  RandomState st;
  st.qbar.resize(n, s + 1);
  st.p.resize(n);
  for (int i = 0; i < n; ++i) {
    const double q0 = angle(rng);
    for (int a = 0; a <= s; ++a) st.qbar(i, a) = q0 + rate(rng) * dt * a / std::max(1, s);
    st.p[i] = angle(rng);
  }
  return st;
}

std::shared_ptr<ForceModel> random_force_model(std::mt19937_64& rng) {
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0:
      return std::make_shared<ZeroForceModel>();
    case 1:
      return std::make_shared<JointDampingModel>(0.2);
    default:
      return std::make_shared<DragSpringForceModel>(0.05, 0.3, 0.1);
  }
}

}  // namespace galint
