#include "doctest.h"
#include "galint/bench.hpp"
#include "galint/chain.hpp"
#include "test_util.hpp"

#include <sstream>

using namespace galint;
using namespace galint_test;

TEST_SUITE("bench") {

TEST_CASE("simulate CSV header is stable") {
  RunSpec spec;
  spec.chain_links = 2;
  spec.dt = 0.01;
  spec.horizon = 0.02;
  std::ostringstream out;
  REQUIRE(run_simulate(spec, out));
  std::istringstream lines(out.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "t,q0,q1,p0,p1,energy,iterations,residual");
}

TEST_CASE("equilibrium chain produces constant rows") {
  RunSpec spec;
  spec.chain_links = 1;
  spec.dt = 0.01;
  spec.horizon = 0.05;
  std::ostringstream out;
  REQUIRE(run_simulate(spec, out));
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);  // header
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    // t,q0,p0,...: q0 and p0 stay at zero.
    std::stringstream ss(line);
    std::string field;
    std::getline(ss, field, ',');
    std::getline(ss, field, ',');
    CHECK(std::stod(field) == 0.0);
    std::getline(ss, field, ',');
    CHECK(std::stod(field) == 0.0);
  }
  CHECK(rows == 6);  // initial row plus five steps
}

TEST_CASE("identical specs give identical output") {
  RunSpec spec;
  spec.chain_links = 3;
  spec.dt = 0.01;
  spec.horizon = 0.1;
  spec.seed = 42;
  spec.init_angle_range = 0.5;
  std::ostringstream a, b;
  REQUIRE(run_simulate(spec, a));
  REQUIRE(run_simulate(spec, b));
  CHECK(a.str() == b.str());
}

TEST_CASE("trajectory error of the benchmark against itself is zero") {
  std::vector<Eigen::VectorXd> traj;
  for (int k = 0; k <= 100; ++k) {
    traj.push_back(Eigen::VectorXd::Constant(2, 0.01 * k));
  }
  CHECK(trajectory_error(traj, 0.01, traj, 0.01, 1.0) == 0.0);
}

TEST_CASE("trajectory error matches a hand-computed integral") {
  // Constant offset d between trajectories integrates to d.
  std::vector<Eigen::VectorXd> a, b;
  for (int k = 0; k <= 10; ++k) {
    a.push_back(Eigen::VectorXd::Constant(1, 1.0));
    b.push_back(Eigen::VectorXd::Constant(1, 1.25));
  }
  CHECK(trajectory_error(a, 0.1, b, 0.1, 1.0) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("scaling output covers the requested ops") {
  ScalingSpec spec;
  spec.sizes = {2, 3};
  spec.trials = 2;
  spec.oracle_max_n = 2;
  std::ostringstream out;
  run_scaling(spec, out);
  const std::string text = out.str();
  CHECK(text.find("n,op,median_ns") == 0);
  CHECK(text.find("2,evaluate_del,") != std::string::npos);
  CHECK(text.find("3,newton_direction,") != std::string::npos);
  CHECK(text.find("2,oracle_newton,") != std::string::npos);
  CHECK(text.find("3,oracle_newton,") == std::string::npos);  // capped
}

TEST_CASE("the check suite passes on its default seed") {
  std::ostringstream out;
  CHECK(run_check(7, out, nullptr, 6) == 0);
}

TEST_CASE("a corrupted model surfaces a validation failure") {
  std::vector<Body> bodies(1);
  bodies[0].joint.twist = make_twist({0, 0, 1}, {0, 0, 0});
  bodies[0].rotational_inertia << 0.1, 0.05, 0, 0, 0.1, 0, 0, 0, 0.1;  // asymmetric
  const MechanismModel bad(std::move(bodies), Vec3::Zero());
  std::ostringstream out;
  CHECK(run_check(7, out, &bad, 2) > 0);
  CHECK(out.str().find("validation") != std::string::npos);
}

TEST_CASE("different seeds keep the check suite green") {
  std::ostringstream out;
  CHECK(run_check(1234, out, nullptr, 4) == 0);
  CHECK(run_check(999, out, nullptr, 4) == 0);
}

}  // TEST_SUITE
