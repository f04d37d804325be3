#include "galint/del.hpp"

#include <stdexcept>

namespace galint {

Wrench gravity_wrench(const MechanismModel& model, int i, const SpatialTransform& g) {
  const Vec3 f = model.body(i).mass * model.gravity();
  return make_twist(g.translation.cross(f), f);
}

Mat6 gravity_wrench_d_pose(const MechanismModel& model, int i, const SpatialTransform& g) {
  // F(g) = [p x (m grav); m grav]; under g -> exp(eta^) g, dp = eta_w x p + eta_v.
  Mat6 d = Mat6::Zero();
  const Mat3 gh = hat(model.body(i).mass * model.gravity());
  d.topLeftCorner<3, 3>() = gh * hat(g.translation);
  d.topRightCorner<3, 3>() = -gh;
  return d;
}

Wrench discrete_impulse(const MechanismModel& model, const ForceModel& fm, int i,
                        const SpatialTransform& g, const Twist& v, const Eigen::VectorXd& u,
                        double t, double wa_dt) {
  return wa_dt * (gravity_wrench(model, i, g) + fm.body_wrench(i, g, v, u, t));
}

void evaluate_del(const MechanismModel& model, const GalerkinScheme& scheme,
                  const Eigen::MatrixXd& qbar, const Eigen::VectorXd& p, const ForceModel& fm,
                  const ControlFunction& controls, double t0, double dt, KinematicsCache& cache,
                  DelOutput& out, TraversalStats* stats) {
  const int n = model.size();
  const int s = scheme.s;
  if (qbar.rows() != n || qbar.cols() != s + 1 || p.size() != n) {
    throw std::invalid_argument("evaluate_del: dimension mismatch between state and model");
  }
  out.n = n;
  out.s = s;
  out.residuals.resize(n, s);
  out.next_momentum.resize(n);
  out.mu.assign(n * (s + 1), Wrench::Zero());
  out.gamma.assign(n * (s + 1), Wrench::Zero());
  out.omega.assign(n * (s + 1), Wrench::Zero());
  if (stats) stats->visits.assign(n * (s + 1), 0);

  forward_pass(model, scheme, qbar, dt, cache);
  if (stats) {
    for (int idx = 0; idx < n * (s + 1); ++idx) ++stats->visits[idx];
  }

  std::vector<Eigen::VectorXd> u_at(s + 1);
  for (int a = 0; a <= s; ++a) u_at[a] = sample_controls(controls, t0 + scheme.node(a) * dt);

  for (int i = n - 1; i >= 0; --i) {
    for (int a = 0; a <= s; ++a) {
      const int idx = cache.at(i, a);
      const double wa_dt = scheme.weight(a) * dt;
      const double t = t0 + scheme.node(a) * dt;
      out.mu[idx] += cache.M[idx] * cache.v[idx];
      out.gamma[idx] +=
          discrete_impulse(model, fm, i, cache.g[idx], cache.v[idx], u_at[a], t, wa_dt);
      out.omega[idx] = wa_dt * ad_transpose_apply(cache.v[idx], out.mu[idx]) + out.gamma[idx];
      const int par = model.parent(i);
      if (par >= 0) {
        out.mu[out.at(par, a)] += out.mu[idx];
        out.gamma[out.at(par, a)] += out.gamma[idx];
      }
      if (stats) ++stats->visits[idx];
    }
    for (int a = 0; a <= s; ++a) {
      const double wa_dt = scheme.weight(a) * dt;
      double r = cache.S[cache.at(i, a)].dot(out.omega[out.at(i, a)]);
      for (int beta = 0; beta <= s; ++beta) {
        r += scheme.a(a, beta) * cache.S[cache.at(i, beta)].dot(out.mu[out.at(i, beta)]);
      }
      r += wa_dt * fm.joint_force(i, qbar(i, a), cache.qdot(i, a), u_at[a],
                                  t0 + scheme.node(a) * dt);
      if (a == 0) {
        out.residuals(i, 0) = p[i] + r;
      } else if (a < s) {
        out.residuals(i, a) = r;
      } else {
        out.next_momentum[i] = r;
      }
    }
  }
}

DelOutput evaluate_del(const MechanismModel& model, const GalerkinScheme& scheme,
                       const Eigen::MatrixXd& qbar, const Eigen::VectorXd& p,
                       const ForceModel& fm, const ControlFunction& controls, double t0,
                       double dt) {
  KinematicsCache cache;
  DelOutput out;
  evaluate_del(model, scheme, qbar, p, fm, controls, t0, dt, cache, out);
  return out;
}

Eigen::VectorXd discrete_momentum(const MechanismModel& model, const GalerkinScheme& scheme,
                                  const Eigen::MatrixXd& qbar, double dt) {
  const ZeroForceModel none;
  return evaluate_del(model, scheme, qbar, Eigen::VectorXd::Zero(model.size()), none, {}, 0.0,
                      dt)
      .next_momentum;
}

ConstrainedResidual constrained_residual(const MechanismModel& model,
                                         const GalerkinScheme& scheme,
                                         const Eigen::MatrixXd& qbar, const Eigen::VectorXd& p,
                                         const ForceModel& fm, const ConstraintSet& constraints,
                                         const Eigen::MatrixXd& lambda,
                                         const ControlFunction& controls, double t0, double dt) {
  const int n = model.size();
  const int s = scheme.s;
  const int m = constraints.count();
  if (lambda.rows() != m || lambda.cols() != s) {
    throw std::invalid_argument("constrained_residual: lambda must be m x s");
  }
  KinematicsCache cache;
  DelOutput unconstrained;
  evaluate_del(model, scheme, qbar, p, fm, controls, t0, dt, cache, unconstrained);

  ConstrainedResidual out;
  out.residuals = unconstrained.residuals;
  out.next_momentum = unconstrained.next_momentum;
  for (int a = 0; a < s; ++a) {
    out.residuals.col(a) += constraints.force_matrix(qbar.col(a)) * lambda.col(a);
  }
  out.constraint_residuals.resize(m, s);
  for (int a = 1; a <= s; ++a) {
    out.constraint_residuals.col(a - 1) = constraints.value(qbar.col(a), cache.qdot.col(a));
  }
  (void)n;
  return out;
}

}  // namespace galint
