#include "galint/oracle.hpp"

#include <Eigen/LU>
#include <stdexcept>

namespace galint {
namespace oracle {

double discrete_lagrangian(const MechanismModel& model, const GalerkinScheme& scheme,
                           const Eigen::MatrixXd& qbar, double dt) {
  const KinematicsCache cache = forward_pass(model, scheme, qbar, dt);
  double ld = 0.0;
  for (int a = 0; a <= scheme.s; ++a) {
    ld += scheme.weight(a) * lagrangian(model, cache, a) * dt;
  }
  return ld;
}

FdDelResult fd_del(const MechanismModel& model, const GalerkinScheme& scheme,
                   const Eigen::MatrixXd& qbar, const Eigen::VectorXd& p, const ForceModel& fm,
                   const ControlFunction& controls, double t0, double dt, const FdConfig& cfg) {
  const int n = model.size();
  const int s = scheme.s;
  FdDelResult out;
  out.residuals.resize(n, s);
  out.next_momentum.resize(n);

  Eigen::MatrixXd q = qbar;
  const double h = cfg.gradient_step;
  const KinematicsCache cache = forward_pass(model, scheme, qbar, dt);
  for (int a = 0; a <= s; ++a) {
    const double t = t0 + scheme.node(a) * dt;
    const Eigen::VectorXd u = sample_controls(controls, t);
    const double wa_dt = scheme.weight(a) * dt;
    // Wrenches transmit through every ancestor joint: pair each joint axis
    // with the summed wrench of its subtree.
    std::vector<Wrench> subtree(n);
    for (int i = 0; i < n; ++i) {
      const int idx = cache.at(i, a);
      subtree[i] = fm.body_wrench(i, cache.g[idx], cache.v[idx], u, t);
    }
    for (int i = n - 1; i >= 0; --i) {
      if (model.parent(i) >= 0) subtree[model.parent(i)] += subtree[i];
    }
    for (int i = 0; i < n; ++i) {
      q(i, a) += h;
      const double lp = discrete_lagrangian(model, scheme, q, dt);
      q(i, a) = qbar(i, a) - h;
      const double lm = discrete_lagrangian(model, scheme, q, dt);
      q(i, a) = qbar(i, a);
      double r = (lp - lm) / (2.0 * h);
      const int idx = cache.at(i, a);
      r += wa_dt * cache.S[idx].dot(subtree[i]);
      r += wa_dt * fm.joint_force(i, qbar(i, a), cache.qdot(i, a), u, t);
      if (a == 0) {
        out.residuals(i, 0) = p[i] + r;
      } else if (a < s) {
        out.residuals(i, a) = r;
      } else {
        out.next_momentum[i] = r;
      }
    }
  }
  return out;
}

Eigen::MatrixXd fd_jacobian(const MechanismModel& model, const GalerkinScheme& scheme,
                            const Eigen::MatrixXd& qbar, const Eigen::VectorXd& p,
                            const ForceModel& fm, const ControlFunction& controls, double t0,
                            double dt, const FdConfig& cfg) {
  const int n = model.size();
  const int s = scheme.s;
  Eigen::MatrixXd jac(s * n, s * n);
  Eigen::MatrixXd q = qbar;
  const double h = cfg.gradient_step;
  KinematicsCache cache;
  DelOutput plus, minus;
  for (int b = 1; b <= s; ++b) {
    for (int j = 0; j < n; ++j) {
      q(j, b) += h;
      evaluate_del(model, scheme, q, p, fm, controls, t0, dt, cache, plus);
      q(j, b) = qbar(j, b) - h;
      evaluate_del(model, scheme, q, p, fm, controls, t0, dt, cache, minus);
      q(j, b) = qbar(j, b);
      const Eigen::MatrixXd col = (plus.residuals - minus.residuals) / (2.0 * h);
      for (int a = 0; a < s; ++a) {
        jac.col((b - 1) * n + j).segment(a * n, n) = col.col(a);
      }
    }
  }
  return jac;
}

namespace {

Eigen::MatrixXd solve_direction(const Eigen::MatrixXd& jac, const Eigen::MatrixXd& residuals,
                                int n, int s) {
  Eigen::VectorXd r(s * n);
  for (int a = 0; a < s; ++a) r.segment(a * n, n) = residuals.col(a);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
  if (!lu.isInvertible()) {
    throw std::runtime_error("dense_newton_direction: singular Jacobian (rcond ~ " +
                             std::to_string(lu.rcond()) + ")");
  }
  const Eigen::VectorXd delta = lu.solve(-r);
  Eigen::MatrixXd dq(n, s);
  for (int g = 1; g <= s; ++g) dq.col(g - 1) = delta.segment((g - 1) * n, n);
  return dq;
}

}  // namespace

Eigen::MatrixXd dense_newton_direction(const MechanismModel& model,
                                       const GalerkinScheme& scheme,
                                       const Eigen::MatrixXd& qbar, const Eigen::VectorXd& p,
                                       const ForceModel& fm, const ControlFunction& controls,
                                       double t0, double dt, const FdConfig& cfg) {
  const Eigen::MatrixXd jac = fd_jacobian(model, scheme, qbar, p, fm, controls, t0, dt, cfg);
  const DelOutput del = evaluate_del(model, scheme, qbar, p, fm, controls, t0, dt);
  return solve_direction(jac, del.residuals, model.size(), scheme.s);
}

Eigen::MatrixXd dense_newton_direction_from_lagrangian(
    const MechanismModel& model, const GalerkinScheme& scheme, const Eigen::MatrixXd& qbar,
    const Eigen::VectorXd& p, const ForceModel& fm, const ControlFunction& controls, double t0,
    double dt, const FdConfig& cfg) {
  const int n = model.size();
  const int s = scheme.s;
  const FdDelResult base = fd_del(model, scheme, qbar, p, fm, controls, t0, dt, cfg);
  Eigen::MatrixXd jac(s * n, s * n);
  Eigen::MatrixXd q = qbar;
  const double h = 1e-5;
  for (int b = 1; b <= s; ++b) {
    for (int j = 0; j < n; ++j) {
      q(j, b) += h;
      const FdDelResult plus = fd_del(model, scheme, q, p, fm, controls, t0, dt, cfg);
      q(j, b) = qbar(j, b) - h;
      const FdDelResult minus = fd_del(model, scheme, q, p, fm, controls, t0, dt, cfg);
      q(j, b) = qbar(j, b);
      const Eigen::MatrixXd col = (plus.residuals - minus.residuals) / (2.0 * h);
      for (int a = 0; a < s; ++a) {
        jac.col((b - 1) * n + j).segment(a * n, n) = col.col(a);
      }
    }
  }
  return solve_direction(jac, base.residuals, n, s);
}

EnergyHessians fd_energy_hessians(const MechanismModel& model, const Eigen::VectorXd& q,
                                  const Eigen::VectorXd& qdot, const FdConfig& cfg) {
  const int n = model.size();
  EnergyHessians out;
  out.d2K_dqdot2.resize(n, n);
  out.d2K_dqdot_dq.resize(n, n);
  out.d2K_dq_dqdot.resize(n, n);
  out.d2K_dq2.resize(n, n);
  out.d2V_dq2.resize(n, n);
  out.dK_dq.resize(n);
  out.dK_dqdot.resize(n);
  out.dV_dq.resize(n);

  const GalerkinScheme sch = trapezoidal();
  const auto energies = [&](const Eigen::VectorXd& qq, const Eigen::VectorXd& vv, double& K,
                            double& V) {
    // Constant-in-time control points so the cache's qdot is irrelevant;
    // kinetic energy is rebuilt from vv directly.
    Eigen::MatrixXd qb(n, 2);
    qb.col(0) = qq;
    qb.col(1) = qq;
    KinematicsCache cache = forward_pass(model, sch, qb, 1.0);
    K = 0.0;
    for (int i = 0; i < n; ++i) {
      const int par = model.parent(i);
      const int idx = cache.at(i, 0);
      cache.v[idx] = (par < 0 ? Twist::Zero() : cache.v[cache.at(par, 0)]) + cache.S[idx] * vv[i];
      K += 0.5 * cache.v[idx].dot(cache.M[idx] * cache.v[idx]);
    }
    V = potential_energy(model, cache, 0);
  };

  const double h = cfg.gradient_step;
  Eigen::VectorXd qp = q, vp = qdot;
  double k1, v1, k2, v2;
  for (int i = 0; i < n; ++i) {
    qp[i] = q[i] + h;
    energies(qp, qdot, k1, v1);
    qp[i] = q[i] - h;
    energies(qp, qdot, k2, v2);
    qp[i] = q[i];
    out.dK_dq[i] = (k1 - k2) / (2.0 * h);
    out.dV_dq[i] = (v1 - v2) / (2.0 * h);
    vp[i] = qdot[i] + h;
    energies(q, vp, k1, v1);
    vp[i] = qdot[i] - h;
    energies(q, vp, k2, v2);
    vp[i] = qdot[i];
    out.dK_dqdot[i] = (k1 - k2) / (2.0 * h);
  }

  // Second derivatives: differentiate the analytic first derivatives, which
  // are validated against the energy differences above.
  const double hh = cfg.hessian_step;
  for (int j = 0; j < n; ++j) {
    qp[j] = q[j] + hh;
    const EnergyHessians ep = energy_hessians(model, qp, qdot);
    qp[j] = q[j] - hh;
    const EnergyHessians em = energy_hessians(model, qp, qdot);
    qp[j] = q[j];
    out.d2K_dqdot_dq.col(j) = (ep.dK_dqdot - em.dK_dqdot) / (2.0 * hh);
    out.d2K_dq2.col(j) = (ep.dK_dq - em.dK_dq) / (2.0 * hh);
    out.d2V_dq2.col(j) = (ep.dV_dq - em.dV_dq) / (2.0 * hh);

    vp[j] = qdot[j] + hh;
    const EnergyHessians evp = energy_hessians(model, q, vp);
    vp[j] = qdot[j] - hh;
    const EnergyHessians evm = energy_hessians(model, q, vp);
    vp[j] = qdot[j];
    out.d2K_dqdot2.col(j) = (evp.dK_dqdot - evm.dK_dqdot) / (2.0 * hh);
    out.d2K_dq_dqdot.col(j) = (evp.dK_dq - evm.dK_dq) / (2.0 * hh);
  }
  return out;
}

Eigen::MatrixXd fd_d2_discrete_lagrangian(const MechanismModel& model,
                                          const GalerkinScheme& scheme,
                                          const Eigen::MatrixXd& qbar, double dt) {
  const int n = model.size();
  const int s = scheme.s;
  const int dim = (s + 1) * n;
  Eigen::MatrixXd hess(dim, dim);
  const double h = 1e-4;
  Eigen::MatrixXd q = qbar;
  const auto ld = [&]() { return discrete_lagrangian(model, scheme, q, dt); };
  for (int r = 0; r < dim; ++r) {
    const int ar = r / n, ir = r % n;
    for (int c = r; c < dim; ++c) {
      const int ac = c / n, ic = c % n;
      double value;
      if (r == c) {
        const double f0 = ld();
        q(ir, ar) = qbar(ir, ar) + h;
        const double fp = ld();
        q(ir, ar) = qbar(ir, ar) - h;
        const double fm = ld();
        q(ir, ar) = qbar(ir, ar);
        value = (fp - 2.0 * f0 + fm) / (h * h);
      } else {
        q(ir, ar) = qbar(ir, ar) + h;
        q(ic, ac) = qbar(ic, ac) + h;
        const double fpp = ld();
        q(ic, ac) = qbar(ic, ac) - h;
        const double fpm = ld();
        q(ir, ar) = qbar(ir, ar) - h;
        const double fmm = ld();
        q(ic, ac) = qbar(ic, ac) + h;
        const double fmp = ld();
        q(ir, ar) = qbar(ir, ar);
        q(ic, ac) = qbar(ic, ac);
        value = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
      }
      hess(r, c) = value;
      hess(c, r) = value;
    }
  }
  return hess;
}

}  // namespace oracle
}  // namespace galint
