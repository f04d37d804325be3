#include "galint/linearize.hpp"

#include <stdexcept>

namespace galint {

EnergyHessians energy_hessians(const MechanismModel& model, const Eigen::VectorXd& q,
                               const Eigen::VectorXd& qdot, HessianOpCounts* counts) {
  const int n = model.size();
  if (q.size() != n || qdot.size() != n) {
    throw std::invalid_argument("energy_hessians: state dimension mismatch");
  }
  EnergyHessians out;
  out.d2K_dqdot2.setZero(n, n);
  out.d2K_dqdot_dq.setZero(n, n);
  out.d2K_dq_dqdot.setZero(n, n);
  out.d2K_dq2.setZero(n, n);
  out.d2V_dq2.setZero(n, n);
  out.dK_dq.setZero(n);
  out.dK_dqdot.setZero(n);
  out.dV_dq.setZero(n);

  std::vector<SpatialTransform> g(n);
  std::vector<Twist> S(n), v(n), Sdot(n);
  std::vector<Mat6> M(n);
  for (int i = 0; i < n; ++i) {
    const Body& body = model.body(i);
    const int par = model.parent(i);
    const SpatialTransform local = body.joint.rest_transform * exp_twist(body.joint.twist, q[i]);
    g[i] = par < 0 ? local : g[par] * local;
    S[i] = transform_twist(g[i], body.joint.twist);
    const Mat6 ad_inv = adjoint_inv(g[i]);
    M[i].noalias() = ad_inv.transpose() * model.body_inertia(i) * ad_inv;
    v[i] = (par < 0 ? Twist::Zero() : v[par]) + S[i] * qdot[i];
    Sdot[i] = ad_apply(v[i], S[i]);
  }

  std::vector<Wrench> mu(n, Wrench::Zero());
  std::vector<Mat6> Macc(n, Mat6::Zero());
  std::vector<double> sigma_m(n, 0.0);
  std::vector<Vec3> sigma_p(n, Vec3::Zero());
  const Vec3 grav = model.gravity();

  for (int i = n - 1; i >= 0; --i) {
    mu[i] += M[i] * v[i];
    Macc[i] += M[i];
    sigma_m[i] += model.body(i).mass;
    sigma_p[i] += model.body(i).mass * g[i].translation;
    const int par = model.parent(i);
    if (par >= 0) {
      mu[par] += mu[i];
      Macc[par] += Macc[i];
      sigma_m[par] += sigma_m[i];
      sigma_p[par] += sigma_p[i];
    }
    if (counts) counts->accumulator_updates += 4;

    const Vec6 MA = Macc[i] * S[i];
    const Vec6 MB = Macc[i] * Sdot[i] - ad_dual_apply(mu[i], S[i]);
    const Vec3 sigma_a =
        grav.cross(sigma_m[i] * linear(S[i]) - sigma_p[i].cross(angular(S[i])));

    out.dK_dqdot[i] = S[i].dot(mu[i]);
    out.dK_dq[i] = Sdot[i].dot(mu[i]);
    out.dV_dq[i] = -(angular(S[i]).dot(sigma_p[i].cross(grav)) + sigma_m[i] * linear(S[i]).dot(grav));

    for (int j = i; j >= 0; j = model.parent(j)) {
      const double kdd = S[j].dot(MA);
      const double kdq = Sdot[j].dot(MA);
      const double kqd = S[j].dot(MB);
      const double kqq = Sdot[j].dot(MB);
      out.d2K_dqdot2(i, j) = out.d2K_dqdot2(j, i) = kdd;
      out.d2K_dqdot_dq(i, j) = kdq;
      out.d2K_dq_dqdot(j, i) = kdq;
      out.d2K_dq_dqdot(i, j) = kqd;
      out.d2K_dqdot_dq(j, i) = kqd;
      out.d2K_dq2(i, j) = out.d2K_dq2(j, i) = kqq;
      out.d2V_dq2(i, j) = out.d2V_dq2(j, i) = angular(S[j]).dot(sigma_a);
      if (counts) counts->block_writes += 5;
    }
  }
  return out;
}

Eigen::MatrixXd DiscreteLagrangianHessian::dense() const {
  Eigen::MatrixXd full((s + 1) * n, (s + 1) * n);
  for (int a = 0; a <= s; ++a)
    for (int b = 0; b <= s; ++b) full.block(a * n, b * n, n, n) = block(a, b);
  return full;
}

DiscreteLagrangianHessian d2_discrete_lagrangian(const MechanismModel& model,
                                                 const GalerkinScheme& scheme,
                                                 const Eigen::MatrixXd& qbar, double dt) {
  const int n = model.size();
  const int s = scheme.s;
  DiscreteLagrangianHessian out;
  out.n = n;
  out.s = s;
  out.blocks.assign((s + 1) * (s + 1), Eigen::MatrixXd::Zero(n, n));

  const Eigen::MatrixXd qdot = qbar * scheme.diff_matrix.transpose() / dt;
  for (int gamma = 0; gamma <= s; ++gamma) {
    const EnergyHessians eh = energy_hessians(model, qbar.col(gamma), qdot.col(gamma));
    const Eigen::MatrixXd Lqq = eh.d2K_dq2 - eh.d2V_dq2;
    const double wg_dt = scheme.weight(gamma) * dt;
    for (int a = 0; a <= s; ++a) {
      const double bga = scheme.b(gamma, a);
      for (int b = 0; b <= s; ++b) {
        const double bgb = scheme.b(gamma, b);
        Eigen::MatrixXd& blk = out.block(a, b);
        if (gamma == a && gamma == b) blk += wg_dt * Lqq;
        if (gamma == a) blk += wg_dt * (bgb / dt) * eh.d2K_dq_dqdot;
        if (gamma == b) blk += wg_dt * (bga / dt) * eh.d2K_dqdot_dq;
        blk += wg_dt * (bga * bgb / (dt * dt)) * eh.d2K_dqdot2;
      }
    }
  }
  return out;
}

Eigen::MatrixXd DelJacobian::newton_jacobian() const {
  Eigen::MatrixXd full(s * n, s * n);
  for (int a = 0; a < s; ++a)
    for (int b = 1; b <= s; ++b) full.block(a * n, (b - 1) * n, n, n) = dr(a, b);
  return full;
}

namespace {

// Force-term Jacobians at one node: Gq(i,j) = df_i/dq_j and Gv(i,j) =
// df_i/dqdot_j for f_i = Sbar_i^T Gamma_i + Q_i (discrete scaling w^a dt
// folded in). External forces only; gravity lives in d2V.
void force_node_jacobians(const MechanismModel& model, const ForceModel& fm,
                          const KinematicsCache& cache, int a, const Eigen::MatrixXd& qbar,
                          const Eigen::VectorXd& u, double t, double wa_dt, Eigen::MatrixXd& Gq,
                          Eigen::MatrixXd& Gv) {
  const int n = model.size();
  Gq.setZero(n, n);
  Gv.setZero(n, n);

  std::vector<Mat6> D1(n), D2(n);
  std::vector<Wrench> gamma_ext(n, Wrench::Zero());
  std::vector<double> Q1(n), Q2(n);
  for (int i = 0; i < n; ++i) {
    const int idx = cache.at(i, a);
    const ForceJacobians jac = force_jacobians(fm, i, cache.g[idx], cache.v[idx], qbar(i, a),
                                               cache.qdot(i, a), u, t);
    D1[i] = wa_dt * jac.d_wrench_d_pose;
    D2[i] = wa_dt * jac.d_wrench_d_velocity;
    Q1[i] = wa_dt * jac.d_joint_force_d_q;
    Q2[i] = wa_dt * jac.d_joint_force_d_qdot;
    gamma_ext[i] = wa_dt * fm.body_wrench(i, cache.g[idx], cache.v[idx], u, t);
  }
  for (int i = n - 1; i >= 0; --i) {
    const int par = model.parent(i);
    if (par >= 0) gamma_ext[par] += gamma_ext[i];
  }

  std::vector<char> in_subtree(n);
  std::vector<Wrench> Tq(n), Tv(n);
  for (int j = 0; j < n; ++j) {
    std::fill(in_subtree.begin(), in_subtree.end(), 0);
    in_subtree[j] = 1;
    for (int i = j + 1; i < n; ++i) {
      const int par = model.parent(i);
      in_subtree[i] = par >= 0 ? in_subtree[par] : 0;
    }
    const Twist& Sj = cache.S[cache.at(j, a)];
    const Twist& vj = cache.v[cache.at(j, a)];
    for (int i = 0; i < n; ++i) {
      Tq[i].setZero();
      Tv[i].setZero();
    }
    for (int i = n - 1; i >= 0; --i) {
      const int idx = cache.at(i, a);
      if (in_subtree[i]) {
        Tq[i] += D1[i] * Sj + D2[i] * ad_apply(Sj, cache.v[idx] - vj);
        Tv[i] += D2[i] * Sj;
      }
      const int par = model.parent(i);
      if (par >= 0) {
        Tq[par] += Tq[i];
        Tv[par] += Tv[i];
      }
    }
    for (int i = 0; i < n; ++i) {
      const int idx = cache.at(i, a);
      double gq = cache.S[idx].dot(Tq[i]);
      double gv = cache.S[idx].dot(Tv[i]);
      if (in_subtree[i] && i != j) {
        gq += ad_apply(Sj, cache.S[idx]).dot(gamma_ext[i]);
      }
      if (i == j) {
        gq += Q1[i];
        gv += Q2[i];
      }
      Gq(i, j) = gq;
      Gv(i, j) = gv;
    }
  }
}

}  // namespace

DelJacobian linearize_del(const MechanismModel& model, const GalerkinScheme& scheme,
                          const Eigen::MatrixXd& qbar, const Eigen::VectorXd& p,
                          const ForceModel& fm, const ControlFunction& controls, double t0,
                          double dt) {
  (void)p;
  const int n = model.size();
  const int s = scheme.s;
  const DiscreteLagrangianHessian d2l = d2_discrete_lagrangian(model, scheme, qbar, dt);
  const KinematicsCache cache = forward_pass(model, scheme, qbar, dt);

  std::vector<Eigen::MatrixXd> Gq(s + 1), Gv(s + 1);
  for (int a = 0; a <= s; ++a) {
    const double t = t0 + scheme.node(a) * dt;
    force_node_jacobians(model, fm, cache, a, qbar, sample_controls(controls, t), t,
                         scheme.weight(a) * dt, Gq[a], Gv[a]);
  }

  DelJacobian out;
  out.n = n;
  out.s = s;
  out.dr_dq.assign(s * (s + 1), Eigen::MatrixXd());
  out.dpnext_dq.assign(s + 1, Eigen::MatrixXd());
  for (int a = 0; a <= s; ++a) {
    for (int b = 0; b <= s; ++b) {
      Eigen::MatrixXd blk = d2l.block(a, b);
      if (a == b) blk += Gq[a];
      blk += (scheme.b(a, b) / dt) * Gv[a];
      if (a < s) {
        out.dr(a, b) = std::move(blk);
      } else {
        out.dpnext_dq[b] = std::move(blk);
      }
    }
  }
  return out;
}

}  // namespace galint
