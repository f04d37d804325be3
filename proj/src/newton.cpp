#include "galint/newton.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <random>

namespace galint {

void StepWorkspace::resize(int n_bodies, int s_order) {
  if (n == n_bodies && s == s_order) return;
  n = n_bodies;
  s = s_order;
  const int s1 = s + 1;
  D.assign(n * s1 * s1, Mat6::Zero());
  G.assign(n * s1 * s, Mat6::Zero());
  l.assign(n * s1, Vec6::Zero());
  Pi.assign(n * s * s1, Mat6::Zero());
  Psi.assign(n * s * s, Mat6::Zero());
  zeta.assign(n * s, Vec6::Zero());
  H.assign(n * s1 * s, Vec6::Zero());
  Phi.assign(n * s * s, Vec6::Zero());
  Theta.assign(n * s * s1, Vec6::Zero());
  ThetaBar.assign(n * s * s1, Vec6::Zero());
  Xi.assign(n * s * s, Vec6::Zero());
  XiBar.assign(n * s * s, Vec6::Zero());
  xibar.assign(n * s, 0.0);
  Lambda.assign(n, Eigen::MatrixXd::Zero(s, s));
  LambdaInv.assign(n, Eigen::MatrixXd::Zero(s, s));
  X.assign(n * s * s1, Vec6::Zero());
  Y.assign(n * s * s, Vec6::Zero());
  y.assign(n * s, 0.0);
  eta.assign(n * s, Vec6::Zero());
  dv.assign(n * s1, Vec6::Zero());
  impulse.assign(n * s, Wrench::Zero());
  dF_pose.assign(n * s, Mat6::Zero());
  dF_velocity.assign(n * s, Mat6::Zero());
  dQ_q.assign(n * s, 0.0);
  dQ_qdot.assign(n * s, 0.0);
  factored = false;
}

void newton_factor(const MechanismModel& model, const GalerkinScheme& scheme,
                   const KinematicsCache& cache, const DelOutput& del, const ForceModel& fm,
                   const ControlFunction& controls, const Eigen::MatrixXd& qbar, double t0,
                   double dt, StepWorkspace& ws) {
  const int n = model.size();
  const int s = scheme.s;
  ws.resize(n, s);

  // Discrete impulses and force Jacobians at nodes 0..s-1, gravity included.
  for (int a = 0; a < s; ++a) {
    const double t = t0 + scheme.node(a) * dt;
    const double wa_dt = scheme.weight(a) * dt;
    const Eigen::VectorXd u = sample_controls(controls, t);
    for (int i = 0; i < n; ++i) {
      const int idx = cache.at(i, a);
      const int is = ws.idxS(i, a);
      const ForceJacobians jac = force_jacobians(fm, i, cache.g[idx], cache.v[idx], qbar(i, a),
                                                 cache.qdot(i, a), u, t);
      ws.dF_pose[is] = wa_dt * (jac.d_wrench_d_pose + gravity_wrench_d_pose(model, i, cache.g[idx]));
      ws.dF_velocity[is] = wa_dt * jac.d_wrench_d_velocity;
      ws.dQ_q[is] = wa_dt * jac.d_joint_force_d_q;
      ws.dQ_qdot[is] = wa_dt * jac.d_joint_force_d_qdot;
      Wrench f = del.gamma[del.at(i, a)];
      for (int j : model.children(i)) f -= del.gamma[del.at(j, a)];
      ws.impulse[is] = f;
    }
  }

  for (int i = n - 1; i >= 0; --i) {
    // Momentum sensitivities D, G and impulse sensitivities Pi, Psi,
    // starting from the body's own terms and merging the children.
    for (int a = 0; a <= s; ++a) {
      for (int rho = 0; rho <= s; ++rho) {
        ws.D[ws.idxD(i, a, rho)] = a == rho ? cache.M[cache.at(i, a)] : Mat6::Zero();
      }
      for (int nu = 1; nu <= s; ++nu) ws.G[ws.idxG(i, a, nu)].setZero();
    }
    for (int a = 0; a < s; ++a) {
      const int is = ws.idxS(i, a);
      for (int rho = 0; rho <= s; ++rho) {
        ws.Pi[ws.idxPi(i, a, rho)] = a == rho ? ws.dF_velocity[is] : Mat6::Zero();
      }
      for (int nu = 1; nu <= s; ++nu) {
        if (a == nu) {
          ws.Psi[ws.idxPsi(i, a, nu)] = ws.dF_pose[is] + ad_dual(ws.impulse[is]) -
                                        ws.dF_velocity[is] * ad(cache.v[cache.at(i, a)]);
        } else {
          ws.Psi[ws.idxPsi(i, a, nu)].setZero();
        }
      }
    }
    for (int j : model.children(i)) {
      for (int a = 0; a <= s; ++a) {
        const Vec6 adS_mu =
            a > 0 ? ad_dual_apply(del.mu[del.at(j, a)], cache.S[cache.at(j, a)]) : Vec6::Zero();
        for (int rho = 0; rho <= s; ++rho) {
          Mat6& d = ws.D[ws.idxD(i, a, rho)];
          d += ws.D[ws.idxD(j, a, rho)];
          for (int g = 1; g <= s; ++g) {
            d.noalias() += ws.H[ws.idxH(j, a, g)] * ws.X[ws.idxX(j, g, rho)].transpose();
          }
          if (a > 0) d.noalias() -= adS_mu * ws.X[ws.idxX(j, a, rho)].transpose();
        }
        for (int nu = 1; nu <= s; ++nu) {
          Mat6& g6 = ws.G[ws.idxG(i, a, nu)];
          g6 += ws.G[ws.idxG(j, a, nu)];
          for (int g = 1; g <= s; ++g) {
            g6.noalias() += ws.H[ws.idxH(j, a, g)] * ws.Y[ws.idxY(j, g, nu)].transpose();
          }
          if (a > 0) g6.noalias() -= adS_mu * ws.Y[ws.idxY(j, a, nu)].transpose();
        }
      }
      for (int a = 0; a < s; ++a) {
        const Vec6 adS_gamma =
            a > 0 ? ad_dual_apply(del.gamma[del.at(j, a)], cache.S[cache.at(j, a)]) : Vec6::Zero();
        for (int rho = 0; rho <= s; ++rho) {
          Mat6& p6 = ws.Pi[ws.idxPi(i, a, rho)];
          p6 += ws.Pi[ws.idxPi(j, a, rho)];
          for (int g = 1; g <= s; ++g) {
            p6.noalias() += ws.Phi[ws.idxPhi(j, a, g)] * ws.X[ws.idxX(j, g, rho)].transpose();
          }
          if (a > 0) p6.noalias() -= adS_gamma * ws.X[ws.idxX(j, a, rho)].transpose();
        }
        for (int nu = 1; nu <= s; ++nu) {
          Mat6& p6 = ws.Psi[ws.idxPsi(i, a, nu)];
          p6 += ws.Psi[ws.idxPsi(j, a, nu)];
          for (int g = 1; g <= s; ++g) {
            p6.noalias() += ws.Phi[ws.idxPhi(j, a, g)] * ws.Y[ws.idxY(j, g, nu)].transpose();
          }
          if (a > 0) p6.noalias() -= adS_gamma * ws.Y[ws.idxY(j, a, nu)].transpose();
        }
      }
    }

    // Joint-direction couplings H, Phi.
    for (int g = 1; g <= s; ++g) {
      const Twist& Sg = cache.S[cache.at(i, g)];
      const Twist& Sdotg = cache.Sdot[cache.at(i, g)];
      for (int a = 0; a <= s; ++a) {
        Vec6 h = ws.D[ws.idxD(i, a, g)] * Sdotg + ws.G[ws.idxG(i, a, g)] * Sg;
        for (int rho = 0; rho <= s; ++rho) {
          h.noalias() +=
              (scheme.b(rho, g) / dt) * (ws.D[ws.idxD(i, a, rho)] * cache.S[cache.at(i, rho)]);
        }
        ws.H[ws.idxH(i, a, g)] = h;
      }
      for (int a = 0; a < s; ++a) {
        Vec6 phi = ws.Pi[ws.idxPi(i, a, g)] * Sdotg + ws.Psi[ws.idxPsi(i, a, g)] * Sg;
        for (int rho = 0; rho <= s; ++rho) {
          phi.noalias() +=
              (scheme.b(rho, g) / dt) * (ws.Pi[ws.idxPi(i, a, rho)] * cache.S[cache.at(i, rho)]);
        }
        ws.Phi[ws.idxPhi(i, a, g)] = phi;
      }
    }

    // Row blocks Theta, Xi and their a-accumulated forms.
    for (int a = 0; a < s; ++a) {
      const int idx = cache.at(i, a);
      const double wa_dt = scheme.weight(a) * dt;
      const Mat6 adD_mu = ad_dual(del.mu[del.at(i, a)]);
      for (int rho = 0; rho <= s; ++rho) {
        Vec6 th = wa_dt * (ws.D[ws.idxD(i, a, rho)].transpose() * cache.Sdot[idx]);
        if (a == rho) th.noalias() += wa_dt * (adD_mu.transpose() * cache.S[idx]);
        th.noalias() += ws.Pi[ws.idxPi(i, a, rho)].transpose() * cache.S[idx];
        ws.Theta[ws.idxTheta(i, a, rho)] = th;
        Vec6 tb = th;
        for (int beta = 0; beta <= s; ++beta) {
          tb.noalias() += scheme.a(a, beta) *
                          (ws.D[ws.idxD(i, beta, rho)].transpose() * cache.S[cache.at(i, beta)]);
        }
        ws.ThetaBar[ws.idxTheta(i, a, rho)] = tb;
      }
      for (int nu = 1; nu <= s; ++nu) {
        Vec6 xi = wa_dt * (ws.G[ws.idxG(i, a, nu)].transpose() * cache.Sdot[idx]);
        xi.noalias() += ws.Psi[ws.idxPsi(i, a, nu)].transpose() * cache.S[idx];
        ws.Xi[ws.idxXi(i, a, nu)] = xi;
        Vec6 xb = xi;
        for (int beta = 0; beta <= s; ++beta) {
          xb.noalias() += scheme.a(a, beta) *
                          (ws.G[ws.idxG(i, beta, nu)].transpose() * cache.S[cache.at(i, beta)]);
        }
        ws.XiBar[ws.idxXi(i, a, nu)] = xb;
      }
    }

    // Per-body node system Lambda and its inverse.
    Eigen::MatrixXd& lam = ws.Lambda[i];
    for (int a = 0; a < s; ++a) {
      const int idx = cache.at(i, a);
      const double wa_dt = scheme.weight(a) * dt;
      for (int g = 1; g <= s; ++g) {
        double v = wa_dt * cache.Sdot[idx].dot(ws.H[ws.idxH(i, a, g)]) +
                   cache.S[idx].dot(ws.Phi[ws.idxPhi(i, a, g)]);
        for (int beta = 0; beta <= s; ++beta) {
          v += scheme.a(a, beta) * cache.S[cache.at(i, beta)].dot(ws.H[ws.idxH(i, beta, g)]);
        }
        if (a == g) {
          v += ws.dQ_q[ws.idxS(i, a)] +
               wa_dt * cache.S[idx].dot(ad_dual_apply(del.mu[del.at(i, a)], cache.Sdot[idx]));
        }
        v += (scheme.b(a, g) / dt) * ws.dQ_qdot[ws.idxS(i, a)];
        lam(a, g - 1) = v;
      }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(lam);
    ws.LambdaInv[i] = lu.inverse();
    const double norm_l = lam.cwiseAbs().colwise().sum().maxCoeff();
    const double norm_inv = ws.LambdaInv[i].cwiseAbs().colwise().sum().maxCoeff();
    if (!std::isfinite(norm_inv) || norm_l * norm_inv > 1e14) {
      int worst = 0;
      lu.matrixLU().diagonal().cwiseAbs().minCoeff(&worst);
      throw SingularJacobian(i, worst + 1);
    }

    // Solved row maps X, Y.
    for (int g = 1; g <= s; ++g) {
      for (int rho = 0; rho <= s; ++rho) {
        Vec6 x = Vec6::Zero();
        for (int vr = 0; vr < s; ++vr) {
          x.noalias() -= ws.LambdaInv[i](g - 1, vr) * ws.ThetaBar[ws.idxTheta(i, vr, rho)];
        }
        ws.X[ws.idxX(i, g, rho)] = x;
      }
      for (int nu = 1; nu <= s; ++nu) {
        Vec6 yv = Vec6::Zero();
        for (int vr = 0; vr < s; ++vr) {
          yv.noalias() -= ws.LambdaInv[i](g - 1, vr) * ws.XiBar[ws.idxXi(i, vr, nu)];
        }
        ws.Y[ws.idxY(i, g, nu)] = yv;
      }
    }
  }
  ws.factored = true;
}

Eigen::MatrixXd newton_solve(const MechanismModel& model, const GalerkinScheme& scheme,
                             const KinematicsCache& cache, const DelOutput& del,
                             const Eigen::MatrixXd& rows, double dt, StepWorkspace& ws) {
  const int n = model.size();
  const int s = scheme.s;
  if (!ws.factored || ws.n != n || ws.s != s) {
    throw std::logic_error("newton_solve: workspace is not factored for this point");
  }

  for (int i = n - 1; i >= 0; --i) {
    for (int a = 0; a <= s; ++a) ws.l[ws.idxS1(i, a)].setZero();
    for (int a = 0; a < s; ++a) ws.zeta[ws.idxS(i, a)].setZero();
    for (int j : model.children(i)) {
      for (int a = 0; a <= s; ++a) {
        Vec6 acc = ws.l[ws.idxS1(j, a)];
        for (int g = 1; g <= s; ++g) acc.noalias() += ws.H[ws.idxH(j, a, g)] * ws.y[ws.idxS(j, g - 1)];
        if (a > 0) {
          acc.noalias() -= ad_dual_apply(del.mu[del.at(j, a)], cache.S[cache.at(j, a)]) *
                           ws.y[ws.idxS(j, a - 1)];
        }
        ws.l[ws.idxS1(i, a)] += acc;
      }
      for (int a = 0; a < s; ++a) {
        Vec6 acc = ws.zeta[ws.idxS(j, a)];
        for (int g = 1; g <= s; ++g)
          acc.noalias() += ws.Phi[ws.idxPhi(j, a, g)] * ws.y[ws.idxS(j, g - 1)];
        if (a > 0) {
          acc.noalias() -= ad_dual_apply(del.gamma[del.at(j, a)], cache.S[cache.at(j, a)]) *
                           ws.y[ws.idxS(j, a - 1)];
        }
        ws.zeta[ws.idxS(i, a)] += acc;
      }
    }
    for (int a = 0; a < s; ++a) {
      const int idx = cache.at(i, a);
      double xb = scheme.weight(a) * dt * cache.Sdot[idx].dot(ws.l[ws.idxS1(i, a)]) +
                  cache.S[idx].dot(ws.zeta[ws.idxS(i, a)]);
      for (int beta = 0; beta <= s; ++beta) {
        xb += scheme.a(a, beta) * cache.S[cache.at(i, beta)].dot(ws.l[ws.idxS1(i, beta)]);
      }
      ws.xibar[ws.idxS(i, a)] = xb;
    }
    for (int g = 1; g <= s; ++g) {
      double acc = 0.0;
      for (int vr = 0; vr < s; ++vr) {
        acc -= ws.LambdaInv[i](g - 1, vr) * (rows(i, vr) + ws.xibar[ws.idxS(i, vr)]);
      }
      ws.y[ws.idxS(i, g - 1)] = acc;
    }
  }

  Eigen::MatrixXd dq = Eigen::MatrixXd::Zero(n, s);
  for (int i = 0; i < n; ++i) {
    const int par = model.parent(i);
    for (int g = 1; g <= s; ++g) {
      double d = ws.y[ws.idxS(i, g - 1)];
      if (par >= 0) {
        for (int rho = 0; rho <= s; ++rho) {
          d += ws.X[ws.idxX(i, g, rho)].dot(ws.dv[ws.idxS1(par, rho)]);
        }
        for (int nu = 1; nu <= s; ++nu) {
          d += ws.Y[ws.idxY(i, g, nu)].dot(ws.eta[ws.idxS(par, nu - 1)]);
        }
      }
      dq(i, g - 1) = d;
    }
    for (int nu = 1; nu <= s; ++nu) {
      const Vec6 parent_eta = par >= 0 ? ws.eta[ws.idxS(par, nu - 1)] : Vec6::Zero();
      ws.eta[ws.idxS(i, nu - 1)] = parent_eta + cache.S[cache.at(i, nu)] * dq(i, nu - 1);
    }
    for (int rho = 0; rho <= s; ++rho) {
      double dqdot = 0.0;
      for (int g = 1; g <= s; ++g) dqdot += scheme.b(rho, g) * dq(i, g - 1);
      dqdot /= dt;
      Vec6 v = par >= 0 ? ws.dv[ws.idxS1(par, rho)] : Vec6::Zero();
      if (rho > 0) v.noalias() += cache.Sdot[cache.at(i, rho)] * dq(i, rho - 1);
      v.noalias() += cache.S[cache.at(i, rho)] * dqdot;
      ws.dv[ws.idxS1(i, rho)] = v;
    }
  }
  return dq;
}

Eigen::MatrixXd newton_direction(const MechanismModel& model, const GalerkinScheme& scheme,
                                 const KinematicsCache& cache, const DelOutput& del,
                                 const ForceModel& fm, const ControlFunction& controls,
                                 const Eigen::MatrixXd& qbar, double t0, double dt,
                                 StepWorkspace& ws) {
  newton_factor(model, scheme, cache, del, fm, controls, qbar, t0, dt, ws);
  return newton_solve(model, scheme, cache, del, del.residuals, dt, ws);
}

namespace {

Eigen::MatrixXd initial_control_points(const GalerkinScheme& scheme,
                                       const Eigen::VectorXd& q, const Eigen::VectorXd* prev_q) {
  const int n = static_cast<int>(q.size());
  Eigen::MatrixXd qbar(n, scheme.s + 1);
  for (int a = 0; a <= scheme.s; ++a) {
    qbar.col(a) = prev_q ? (q + scheme.node(a) * (q - *prev_q)).eval() : q;
  }
  qbar.col(0) = q;
  return qbar;
}

}  // namespace

std::pair<DiscreteState, StepDiagnostics> step(const MechanismModel& model,
                                               const GalerkinScheme& scheme,
                                               const DiscreteState& state, const ForceModel& fm,
                                               const ControlFunction& controls, double dt,
                                               const SolverConfig& config, StepWorkspace& ws,
                                               const Eigen::VectorXd* prev_q) {
  const int s = scheme.s;
  const double t0 = state.index * dt;
  Eigen::MatrixXd qbar = initial_control_points(scheme, state.q, prev_q);

  KinematicsCache cache, cache_try;
  DelOutput del, del_try;
  evaluate_del(model, scheme, qbar, state.p, fm, controls, t0, dt, cache, del);
  double norm = del.residual_norm();
  std::vector<double> history{norm};

  const auto polish_and_finish = [&](int iter) {
    if (config.polish && norm > 0.0) {
      // One full Newton update past the tolerance, kept only when it does
      // not increase the residual; removes the stopping-threshold bias
      // from long trajectories.
      try {
        const Eigen::MatrixXd dq =
            newton_direction(model, scheme, cache, del, fm, controls, qbar, t0, dt, ws);
        Eigen::MatrixXd q_try = qbar;
        q_try.rightCols(s) = qbar.rightCols(s) + dq;
        evaluate_del(model, scheme, q_try, state.p, fm, controls, t0, dt, cache_try, del_try);
        const double polished = del_try.residual_norm();
        if (polished <= norm) {
          qbar = q_try;
          std::swap(cache, cache_try);
          std::swap(del, del_try);
          norm = polished;
        }
      } catch (const SingularJacobian&) {
        // The accepted point already satisfies the tolerance.
      }
    }
    DiscreteState next;
    next.q = qbar.col(s);
    next.p = del.next_momentum;
    next.index = state.index + 1;
    return std::make_pair(next, StepDiagnostics{iter, norm});
  };

  for (int iter = 1; iter <= config.max_iter; ++iter) {
    if (norm < config.tol) return polish_and_finish(iter);
    Eigen::MatrixXd dq =
        newton_direction(model, scheme, cache, del, fm, controls, qbar, t0, dt, ws);
    if (config.step_clamp > 0.0) {
      const double widest = dq.cwiseAbs().maxCoeff();
      if (widest > config.step_clamp) dq *= config.step_clamp / widest;
    }

    // Nonmonotone Armijo on the residual infinity norm: compare against the
    // worst of the last accepted norms.
    double reference = norm;
    const size_t window = std::min<size_t>(history.size(), std::max(1, config.memory));
    for (size_t k = history.size() - window; k < history.size(); ++k) {
      reference = std::max(reference, history[k]);
    }

    double t = 1.0;
    bool accepted = false;
    Eigen::MatrixXd q_try = qbar;
    while (t >= config.min_step) {
      q_try.rightCols(s) = qbar.rightCols(s) + t * dq;
      evaluate_del(model, scheme, q_try, state.p, fm, controls, t0, dt, cache_try, del_try);
      const double norm_try = del_try.residual_norm();
      if (norm_try <= (1.0 - 1e-4 * t) * reference || config.backtrack >= 1.0) {
        qbar = q_try;
        std::swap(cache, cache_try);
        std::swap(del, del_try);
        norm = norm_try;
        history.push_back(norm);
        accepted = true;
        break;
      }
      t *= config.backtrack;
    }
    if (!accepted) throw NoConvergence(iter, norm);
  }
  throw NoConvergence(config.max_iter, norm);
}

ConstrainedStepResult constrained_step_second_order(
    const MechanismModel& model, const GalerkinScheme& scheme, const DiscreteState& state,
    const ForceModel& fm, const ConstraintSet& constraints, const ControlFunction& controls,
    double dt, const SolverConfig& config, StepWorkspace& ws, const Eigen::VectorXd* prev_q) {
  if (scheme.s != 1) {
    throw std::invalid_argument("constrained_step_second_order requires a two-point scheme");
  }
  const int n = model.size();
  const int m = constraints.count();
  if (m == 0) {
    auto [next, diag] = step(model, scheme, state, fm, controls, dt, config, ws, prev_q);
    return {next, Eigen::VectorXd(), diag};
  }
  if (m >= n) {
    throw std::invalid_argument("constrained_step_second_order requires m < n");
  }

  const double t0 = state.index * dt;
  Eigen::MatrixXd qbar = initial_control_points(scheme, state.q, prev_q);
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
  const Eigen::MatrixXd A = constraints.force_matrix(state.q);

  KinematicsCache cache, cache_try;
  DelOutput del, del_try;

  const auto residuals = [&](const Eigen::MatrixXd& q, const Eigen::VectorXd& lam,
                             KinematicsCache& c, DelOutput& d, Eigen::VectorXd& rq,
                             Eigen::VectorXd& rc) {
    evaluate_del(model, scheme, q, state.p, fm, controls, t0, dt, c, d);
    rq = d.residuals.col(0) + A * lam;
    rc = constraints.value(q.col(1), c.qdot.col(1));
  };

  Eigen::VectorXd rq, rc;
  residuals(qbar, lambda, cache, del, rq, rc);
  double norm = std::max(rq.cwiseAbs().maxCoeff(), rc.cwiseAbs().maxCoeff());

  for (int iter = 1; iter <= config.max_iter; ++iter) {
    if (norm < config.tol) {
      DiscreteState next;
      next.q = qbar.col(1);
      next.p = del.next_momentum;
      next.index = state.index + 1;
      return {next, lambda, {iter, norm}};
    }
    newton_factor(model, scheme, cache, del, fm, controls, qbar, t0, dt, ws);
    const Eigen::VectorXd dq_r = newton_solve(model, scheme, cache, del, rq, dt, ws).col(0);
    Eigen::MatrixXd JinvA(n, m);
    for (int c = 0; c < m; ++c) {
      JinvA.col(c) = -newton_solve(model, scheme, cache, del, A.col(c), dt, ws).col(0);
    }
    const Eigen::MatrixXd Dh =
        constraints.d_value_d_q(qbar.col(1), cache.qdot.col(1)) +
        (scheme.b(1, 1) / dt) * constraints.d_value_d_qdot(qbar.col(1), cache.qdot.col(1));
    const Eigen::MatrixXd schur = Dh * JinvA;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(schur);
    if (!lu.isInvertible()) throw RankDeficientConstraints();
    const Eigen::VectorXd dlambda = lu.solve(rc + Dh * dq_r);
    const Eigen::VectorXd dq = dq_r - JinvA * dlambda;

    double t = 1.0;
    bool accepted = false;
    Eigen::MatrixXd q_try = qbar;
    Eigen::VectorXd rq_try, rc_try;
    while (t >= config.min_step) {
      q_try.col(1) = qbar.col(1) + t * dq;
      const Eigen::VectorXd lam_try = lambda + t * dlambda;
      residuals(q_try, lam_try, cache_try, del_try, rq_try, rc_try);
      const double norm_try =
          std::max(rq_try.cwiseAbs().maxCoeff(), rc_try.cwiseAbs().maxCoeff());
      if (norm_try <= (1.0 - 1e-4 * t) * norm) {
        qbar = q_try;
        lambda = lam_try;
        std::swap(cache, cache_try);
        std::swap(del, del_try);
        rq = rq_try;
        rc = rc_try;
        norm = norm_try;
        accepted = true;
        break;
      }
      t *= config.backtrack;
    }
    if (!accepted) throw NoConvergence(iter, norm);
  }
  throw NoConvergence(config.max_iter, norm);
}

ForceJacobianReport validate_force_jacobians(const ForceModel& fm, const MechanismModel& model,
                                             int samples, unsigned seed) {
  const int n = model.size();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-1.5, 1.5);
  std::uniform_real_distribution<double> rate(-2.0, 2.0);
  ForceJacobianReport report;
  const GalerkinScheme sch = trapezoidal();
  const Eigen::VectorXd u;

  const auto rel = [](double err, double scale) { return err / std::max(1.0, scale); };

  for (int iter = 0; iter < samples; ++iter) {
    Eigen::MatrixXd qb(n, 2);
    for (int i = 0; i < n; ++i) qb(i, 0) = angle(rng);
    qb.col(1) = qb.col(0);
    Eigen::VectorXd qdot(n);
    for (int i = 0; i < n; ++i) qdot[i] = rate(rng);
    KinematicsCache cache = forward_pass(model, sch, qb, 1.0);
    const double t = 0.1 * iter;
    for (int i = 0; i < n; ++i) {
      const int idx = cache.at(i, 0);
      const int par = model.parent(i);
      cache.v[idx] =
          (par < 0 ? Twist::Zero() : cache.v[cache.at(par, 0)]) + cache.S[idx] * qdot[i];
      const SpatialTransform& g = cache.g[idx];
      const Twist& v = cache.v[idx];

      const Mat6 a_pose = fm.d_wrench_d_pose(i, g, v, u, t);
      const Mat6 a_vel = fm.d_wrench_d_velocity(i, g, v, u, t);
      const double a_q = fm.d_joint_force_d_q(i, qb(i, 0), qdot[i], u, t);
      const double a_qd = fm.d_joint_force_d_qdot(i, qb(i, 0), qdot[i], u, t);

      const double h = 1e-6;
      Mat6 fd_pose, fd_vel;
      for (int c = 0; c < 6; ++c) {
        Twist dir = Twist::Zero();
        dir[c] = 1.0;
        fd_pose.col(c) = (fm.body_wrench(i, exp_twist(dir, h) * g, v, u, t) -
                          fm.body_wrench(i, exp_twist(dir, -h) * g, v, u, t)) /
                         (2.0 * h);
        Twist vp = v, vm = v;
        vp[c] += h;
        vm[c] -= h;
        fd_vel.col(c) =
            (fm.body_wrench(i, g, vp, u, t) - fm.body_wrench(i, g, vm, u, t)) / (2.0 * h);
      }
      const double fd_q = (fm.joint_force(i, qb(i, 0) + h, qdot[i], u, t) -
                           fm.joint_force(i, qb(i, 0) - h, qdot[i], u, t)) /
                          (2.0 * h);
      const double fd_qd = (fm.joint_force(i, qb(i, 0), qdot[i] + h, u, t) -
                            fm.joint_force(i, qb(i, 0), qdot[i] - h, u, t)) /
                           (2.0 * h);

      report.max_wrench_pose_error = std::max(
          report.max_wrench_pose_error,
          rel((a_pose - fd_pose).cwiseAbs().maxCoeff(), fd_pose.cwiseAbs().maxCoeff()));
      report.max_wrench_velocity_error = std::max(
          report.max_wrench_velocity_error,
          rel((a_vel - fd_vel).cwiseAbs().maxCoeff(), fd_vel.cwiseAbs().maxCoeff()));
      report.max_joint_q_error =
          std::max(report.max_joint_q_error, rel(std::abs(a_q - fd_q), std::abs(fd_q)));
      report.max_joint_qdot_error =
          std::max(report.max_joint_qdot_error, rel(std::abs(a_qd - fd_qd), std::abs(fd_qd)));
    }
  }
  return report;
}

}  // namespace galint
