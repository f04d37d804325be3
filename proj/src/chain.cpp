#include "galint/chain.hpp"

#include <stdexcept>

namespace galint {

MechanismModel make_chain_pendulum(int n, double link_mass, double link_length) {
  if (n < 1) throw std::invalid_argument("make_chain_pendulum: n must be >= 1");
  std::vector<Body> bodies(n);
  const double rod_inertia = link_mass * link_length * link_length / 12.0;
  for (int i = 0; i < n; ++i) {
    Body& b = bodies[i];
    b.name = "link" + std::to_string(i + 1);
    b.mass = link_mass;
    // Point mass at the link end plus the rod term about it.
    b.rotational_inertia = Vec3(rod_inertia, 0.0, rod_inertia).asDiagonal();
    b.joint.kind = JointKind::revolute;
    // Rotation about z through the pivot one link length above the mass.
    b.joint.twist = make_twist({0, 0, 1}, {link_length, 0, 0});
    b.joint.parent = i - 1;
    b.joint.rest_transform.rotation = Mat3::Identity();
    b.joint.rest_transform.translation = Vec3(0, -link_length, 0);
  }
  return MechanismModel(std::move(bodies), Vec3(0, -9.81, 0));
}

}  // namespace galint
