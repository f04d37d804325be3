#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "galint/model.hpp"
#include "galint/newton.hpp"

namespace galint {

/// Inputs for one benchmark or simulation run.
struct RunSpec {
  std::string model_path;            // exclusive with chain_links
  int chain_links = 0;               // > 0 selects the generated chain
  double link_mass = 1.0;
  double link_length = 1.0;
  std::string scheme = "trapezoidal";
  double dt = 0.01;
  double horizon = 1.0;
  unsigned seed = 0;
  double init_angle_range = 0.0;     // uniform box half-width for q0
  double init_rate_range = 0.0;      // uniform box half-width for qdot0
  std::string output_path;           // empty = stdout
  bool allow_failures = false;
};

MechanismModel resolve_model(const RunSpec& spec);

/// Steps the trajectory and writes one CSV row per step:
/// t, q..., p..., energy, iterations, residual. Returns false when the
/// solver failed before the horizon (rows up to the failure are written).
bool run_simulate(const RunSpec& spec, std::ostream& out, std::string* error = nullptr);

/// Median op timings: CSV (n, op, median_ns). Oracle ops are skipped above
/// oracle_max_n.
struct ScalingSpec {
  std::vector<int> sizes{8, 16, 32, 64, 128, 256};
  std::string scheme = "simpson";
  double dt = 0.01;
  int trials = 25;
  unsigned seed = 0;
  int oracle_max_n = 64;
  bool include_oracle = true;
};
void run_scaling(const ScalingSpec& spec, std::ostream& out);

/// Time-averaged trajectory error against a fine benchmark trajectory:
/// CSV (scheme, dt, traj_error).
struct ConvergenceSpec {
  std::vector<std::string> schemes{"trapezoidal", "simpson"};
  std::vector<double> dts{0.04, 0.02, 0.01, 0.005};
  int chain_links = 2;
  double horizon = 5.0;
  double benchmark_dt = 5e-4;
  std::string benchmark_scheme = "lobatto:3";
  Eigen::VectorXd q0;  // empty = small default angles
};
void run_convergence(const ConvergenceSpec& spec, std::ostream& out);

/// Trajectory error metric (1/T) integral |q - q_d| dt, trapezoid rule over
/// the coarse trajectory's sample times. Both trajectories start at row 0.
double trajectory_error(const std::vector<Eigen::VectorXd>& coarse, double coarse_dt,
                        const std::vector<Eigen::VectorXd>& benchmark, double benchmark_dt,
                        double horizon);

/// Runs the oracle-equivalence suite on random small systems; returns the
/// number of failed checks and prints one line per check group. A provided
/// model is validated first and, when small enough, checked in place of the
/// random systems.
int run_check(unsigned seed, std::ostream& out, const MechanismModel* provided, int cases);
int run_check(unsigned seed, std::ostream& out);

}  // namespace galint
