#pragma once

#include "galint/model.hpp"

namespace galint {

/// n-link pendulum chain used as the benchmark system: identical uniform
/// rods with revolute z joints, rest transforms translating along -y, and
/// gravity (0, -9.81, 0). Each body frame sits at the link's mass center,
/// so the joint screw carries the half-length moment arm.
MechanismModel make_chain_pendulum(int n, double link_mass = 1.0, double link_length = 1.0);

}  // namespace galint
