#pragma once

#include <stdexcept>
#include <vector>

#include "galint/constraints.hpp"
#include "galint/del.hpp"
#include "galint/model.hpp"

namespace galint {

class SingularJacobian : public std::runtime_error {
 public:
  SingularJacobian(int body_index, int node_index)
      : std::runtime_error("singular joint-direction block at body " +
                           std::to_string(body_index)),
        body(body_index),
        node(node_index) {}
  int body;
  int node;
};

class NoConvergence : public std::runtime_error {
 public:
  NoConvergence(int iters, double res)
      : std::runtime_error("Newton solve did not converge: residual " + std::to_string(res) +
                           " after " + std::to_string(iters) + " iterations"),
        iterations(iters),
        residual(res) {}
  int iterations;
  double residual;
};

class RankDeficientConstraints : public std::runtime_error {
 public:
  RankDeficientConstraints() : std::runtime_error("constraint Schur system is singular") {}
};

struct SolverConfig {
  double tol = 1e-10;          // infinity norm of the residual
  int max_iter = 50;
  double backtrack = 0.5;      // line-search halving factor; >= 1 gives pure Newton
  double min_step = 9.5367431640625e-7;  // 2^-20
  int memory = 10;             // nonmonotone window for the acceptance test; 1 = monotone
  double step_clamp = 1.0;     // per-joint cap on |dq| per iteration; 0 disables
  bool polish = true;          // one extra full Newton update after reaching tol
};

struct StepDiagnostics {
  int iterations = 0;
  double residual = 0.0;
};

/// Per-step storage for the recursive Newton direction. The momentum-
/// sensitivity stack (D, G, l), impulse-sensitivity stack (Pi, Psi, zeta),
/// joint-direction couplings (H, Phi), row blocks (Theta, Xi and their
/// accumulated forms), per-body node systems Lambda with inverses, the
/// solved row maps (X, Y, y) and the forward-pass variations (eta, dv).
///
/// Index ranges follow the recursions: alpha and rho run over 0..s,
/// nu and gamma over 1..s (stored at offset-1), residual rows over 0..s-1.
struct StepWorkspace {
  int n = 0;
  int s = 0;

  std::vector<Mat6> D;        // (i, a, rho): n x (s+1) x (s+1)
  std::vector<Mat6> G;        // (i, a, nu):  n x (s+1) x s
  std::vector<Vec6> l;        // (i, a):      n x (s+1)
  std::vector<Mat6> Pi;       // (i, a, rho): n x s x (s+1)
  std::vector<Mat6> Psi;      // (i, a, nu):  n x s x s
  std::vector<Vec6> zeta;     // (i, a):      n x s
  std::vector<Vec6> H;        // (i, a, gamma): n x (s+1) x s
  std::vector<Vec6> Phi;      // (i, a, gamma): n x s x s
  std::vector<Vec6> Theta;    // (i, a, rho): n x s x (s+1), stored as columns
  std::vector<Vec6> ThetaBar;
  std::vector<Vec6> Xi;       // (i, a, nu): n x s x s
  std::vector<Vec6> XiBar;
  std::vector<double> xibar;  // (i, a): n x s
  std::vector<Eigen::MatrixXd> Lambda;     // per body, s x s
  std::vector<Eigen::MatrixXd> LambdaInv;  // rows gamma = 1..s, cols rho = 0..s-1
  std::vector<Vec6> X;        // (i, gamma, rho): n x s x (s+1)
  std::vector<Vec6> Y;        // (i, gamma, nu):  n x s x s
  std::vector<double> y;      // (i, gamma): n x s

  std::vector<Vec6> eta;      // (i, nu): n x s
  std::vector<Vec6> dv;       // (i, rho): n x (s+1)

  // Discrete force data at the current point: impulses and their Jacobians
  // (gravity folded in), all scaled by w^a dt.
  std::vector<Wrench> impulse;    // (i, a): n x s, nodes 0..s-1
  std::vector<Mat6> dF_pose;      // (i, a): n x s
  std::vector<Mat6> dF_velocity;  // (i, a): n x s
  std::vector<double> dQ_q;       // (i, a): n x s
  std::vector<double> dQ_qdot;    // (i, a): n x s

  bool factored = false;

  void resize(int n_bodies, int s_order);

  int a2(int i, int a, int b, int cols) const { return (i * (s + 1) + a) * cols + b; }
  // D/H index (a = 0..s); Pi/Psi/Phi index (a = 0..s-1); see the accessors.
  int idxD(int i, int a, int rho) const { return (i * (s + 1) + a) * (s + 1) + rho; }
  int idxG(int i, int a, int nu) const { return (i * (s + 1) + a) * s + (nu - 1); }
  int idxPi(int i, int a, int rho) const { return (i * s + a) * (s + 1) + rho; }
  int idxPsi(int i, int a, int nu) const { return (i * s + a) * s + (nu - 1); }
  int idxH(int i, int a, int gamma) const { return (i * (s + 1) + a) * s + (gamma - 1); }
  int idxPhi(int i, int a, int gamma) const { return (i * s + a) * s + (gamma - 1); }
  int idxTheta(int i, int a, int rho) const { return (i * s + a) * (s + 1) + rho; }
  int idxXi(int i, int a, int nu) const { return (i * s + a) * s + (nu - 1); }
  int idxX(int i, int gamma, int rho) const { return (i * s + (gamma - 1)) * (s + 1) + rho; }
  int idxY(int i, int gamma, int nu) const { return (i * s + (gamma - 1)) * s + (nu - 1); }
  int idxS(int i, int a) const { return i * s + a; }          // s slots per body
  int idxS1(int i, int a) const { return i * (s + 1) + a; }   // s+1 slots per body
};

/// Backward pass of the Newton direction: computes every matrix-valued
/// factor (D, G, Pi, Psi, H, Phi, Theta/Xi rows, Lambda inverses, X, Y) for
/// the current point. Throws SingularJacobian if any Lambda block is
/// numerically singular (reciprocal condition below 1e-14).
void newton_factor(const MechanismModel& model, const GalerkinScheme& scheme,
                   const KinematicsCache& cache, const DelOutput& del, const ForceModel& fm,
                   const ControlFunction& controls, const Eigen::MatrixXd& qbar, double t0,
                   double dt, StepWorkspace& ws);

/// Vector part against an arbitrary right-hand side: given rows r (n x s),
/// returns delta qbar = -J^{-1} r as n x s (columns are nodes 1..s). The
/// workspace must hold a factorization of the same point.
Eigen::MatrixXd newton_solve(const MechanismModel& model, const GalerkinScheme& scheme,
                             const KinematicsCache& cache, const DelOutput& del,
                             const Eigen::MatrixXd& rows, double dt, StepWorkspace& ws);

/// Newton direction -J^{-1} r for the DEL residuals in del. Factors and
/// solves in O(s^3 n).
Eigen::MatrixXd newton_direction(const MechanismModel& model, const GalerkinScheme& scheme,
                                 const KinematicsCache& cache, const DelOutput& del,
                                 const ForceModel& fm, const ControlFunction& controls,
                                 const Eigen::MatrixXd& qbar, double t0, double dt,
                                 StepWorkspace& ws);

/// One implicit integrator step: Newton iteration with backtracking line
/// search on the residual infinity norm, then the momentum update.
/// prev_q, when given, seeds the control points by linear extrapolation;
/// otherwise they start constant.
std::pair<DiscreteState, StepDiagnostics> step(const MechanismModel& model,
                                               const GalerkinScheme& scheme,
                                               const DiscreteState& state, const ForceModel& fm,
                                               const ControlFunction& controls, double dt,
                                               const SolverConfig& config, StepWorkspace& ws,
                                               const Eigen::VectorXd* prev_q = nullptr);

/// Constrained step for the two-control-point scheme: the Schur-complement
/// procedure reusing the frozen backward-pass factors for the m extra
/// right-hand sides. Returns the next state and the constraint forces.
struct ConstrainedStepResult {
  DiscreteState state;
  Eigen::VectorXd lambda;
  StepDiagnostics diagnostics;
};
ConstrainedStepResult constrained_step_second_order(
    const MechanismModel& model, const GalerkinScheme& scheme, const DiscreteState& state,
    const ForceModel& fm, const ConstraintSet& constraints, const ControlFunction& controls,
    double dt, const SolverConfig& config, StepWorkspace& ws,
    const Eigen::VectorXd* prev_q = nullptr);

/// Compares the force model's analytic Jacobians against central
/// differences at sampled states. max_* are relative errors.
struct ForceJacobianReport {
  double max_wrench_pose_error = 0.0;
  double max_wrench_velocity_error = 0.0;
  double max_joint_q_error = 0.0;
  double max_joint_qdot_error = 0.0;
  double max_error() const {
    return std::max(std::max(max_wrench_pose_error, max_wrench_velocity_error),
                    std::max(max_joint_q_error, max_joint_qdot_error));
  }
};
ForceJacobianReport validate_force_jacobians(const ForceModel& fm, const MechanismModel& model,
                                             int samples, unsigned seed = 0);

}  // namespace galint
