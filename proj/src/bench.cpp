#include "galint/bench.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>

#include "galint/chain.hpp"
#include "galint/linearize.hpp"
#include "galint/model_io.hpp"
#include "galint/oracle.hpp"
#include "galint/random_models.hpp"

namespace galint {

namespace {

double rel_error(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
  const double scale = std::max(1.0, want.cwiseAbs().maxCoeff());
  return (got - want).cwiseAbs().maxCoeff() / scale;
}

/// E(q, p) with qdot reconstructed through the mass matrix.
double state_energy(const MechanismModel& model, const Eigen::VectorXd& q,
                    const Eigen::VectorXd& p) {
  const EnergyHessians eh = energy_hessians(model, q, Eigen::VectorXd::Zero(q.size()));
  const Eigen::VectorXd qdot = eh.d2K_dqdot2.ldlt().solve(p);
  Eigen::MatrixXd qb(q.size(), 2);
  qb.col(0) = q;
  qb.col(1) = q;
  const KinematicsCache cache = forward_pass(model, trapezoidal(), qb, 1.0);
  double kinetic = 0.5 * p.dot(qdot);
  return kinetic + potential_energy(model, cache, 0);
}

long long median_ns(std::vector<long long>& samples) {
  std::sort(samples.begin(), samples.end());
  return samples[samples.size() / 2];
}

template <typename F>
long long time_median(F&& fn, int trials) {
  fn();  // warmup, discarded
  std::vector<long long> samples;
  samples.reserve(trials);
  for (int t = 0; t < trials; ++t) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    samples.push_back(
        std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
  }
  return median_ns(samples);
}

}  // namespace

MechanismModel resolve_model(const RunSpec& spec) {
  if (!spec.model_path.empty()) return load_model(spec.model_path);
  if (spec.chain_links > 0)
    return make_chain_pendulum(spec.chain_links, spec.link_mass, spec.link_length);
  throw std::runtime_error("run spec needs either a model path or a chain size");
}

bool run_simulate(const RunSpec& spec, std::ostream& out, std::string* error) {
  const MechanismModel model = resolve_model(spec);
  const auto issues = model.validate();
  if (!issues.empty()) {
    if (error) *error = "model validation failed: " + issues.front().message;
    return false;
  }
  const GalerkinScheme scheme = scheme_by_name(spec.scheme);
  const int n = model.size();

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> angle(-spec.init_angle_range, spec.init_angle_range);
  std::uniform_real_distribution<double> rate(-spec.init_rate_range, spec.init_rate_range);
  Eigen::VectorXd q0 = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd qdot0 = Eigen::VectorXd::Zero(n);
  if (spec.init_angle_range > 0.0)
    for (int i = 0; i < n; ++i) q0[i] = angle(rng);
  if (spec.init_rate_range > 0.0)
    for (int i = 0; i < n; ++i) qdot0[i] = rate(rng);

  DiscreteState state;
  state.q = q0;
  state.p = energy_hessians(model, q0, qdot0).d2K_dqdot2 * qdot0;
  state.index = 0;

  out << "t";
  for (int i = 0; i < n; ++i) out << ",q" << i;
  for (int i = 0; i < n; ++i) out << ",p" << i;
  out << ",energy,iterations,residual\n";
  out << std::setprecision(17);

  const auto write_row = [&](const DiscreteState& st, int iters, double residual) {
    out << st.index * spec.dt;
    for (int i = 0; i < n; ++i) out << "," << st.q[i];
    for (int i = 0; i < n; ++i) out << "," << st.p[i];
    out << "," << state_energy(model, st.q, st.p) << "," << iters << "," << residual << "\n";
  };
  write_row(state, 0, 0.0);

  const ZeroForceModel forces;
  StepWorkspace ws;
  const int steps = static_cast<int>(std::llround(spec.horizon / spec.dt));
  Eigen::VectorXd prev_q;
  for (int k = 0; k < steps; ++k) {
    try {
      auto [next, diag] =
          step(model, scheme, state, forces, {}, spec.dt, SolverConfig{}, ws,
               k > 0 ? &prev_q : nullptr);
      prev_q = state.q;
      state = next;
      write_row(state, diag.iterations, diag.residual);
    } catch (const std::runtime_error& e) {
      if (error) *error = "step " + std::to_string(k) + ": " + e.what();
      return false;
    }
  }
  return true;
}

void run_scaling(const ScalingSpec& spec, std::ostream& out) {
  out << "n,op,median_ns\n";
  const GalerkinScheme scheme = scheme_by_name(spec.scheme);
  const int s = scheme.s;
  const ZeroForceModel forces;
  for (const int n : spec.sizes) {
    const MechanismModel model = make_chain_pendulum(n);
    std::mt19937_64 rng(spec.seed + static_cast<unsigned>(n));
    std::uniform_real_distribution<double> angle(-M_PI / 2, M_PI / 2);
    Eigen::MatrixXd qbar(n, s + 1);
    Eigen::VectorXd p(n);
    for (int i = 0; i < n; ++i) {
      const double q0 = angle(rng);
      const double qd = angle(rng);
      for (int a = 0; a <= s; ++a) qbar(i, a) = q0 + scheme.node(a) * spec.dt * qd;
      p[i] = 0.1 * angle(rng);
    }

    KinematicsCache cache;
    DelOutput del;
    StepWorkspace ws;
    evaluate_del(model, scheme, qbar, p, forces, {}, 0.0, spec.dt, cache, del);

    const auto report = [&](const char* op, long long ns) {
      out << n << "," << op << "," << ns << "\n";
      out.flush();
    };
    report("evaluate_del", time_median(
                               [&] {
                                 evaluate_del(model, scheme, qbar, p, forces, {}, 0.0, spec.dt,
                                              cache, del);
                               },
                               spec.trials));
    report("newton_direction",
           time_median(
               [&] {
                 newton_direction(model, scheme, cache, del, forces, {}, qbar, 0.0, spec.dt, ws);
               },
               spec.trials));
    report("linearize", time_median(
                            [&] {
                              energy_hessians(model, qbar.col(0), cache.qdot.col(0));
                              d2_discrete_lagrangian(model, scheme, qbar, spec.dt);
                            },
                            spec.trials));
    if (spec.include_oracle && n <= spec.oracle_max_n) {
      const int oracle_trials = std::max(3, spec.trials / 8);
      report("oracle_del", time_median(
                               [&] {
                                 oracle::fd_del(model, scheme, qbar, p, forces, {}, 0.0,
                                                spec.dt);
                               },
                               oracle_trials));
      report("oracle_newton",
             time_median(
                 [&] {
                   oracle::dense_newton_direction_from_lagrangian(model, scheme, qbar, p,
                                                                  forces, {}, 0.0, spec.dt);
                 },
                 oracle_trials));
      report("oracle_hessians",
             time_median(
                 [&] { oracle::fd_energy_hessians(model, qbar.col(0), cache.qdot.col(0)); },
                 oracle_trials));
    }
  }
}

double trajectory_error(const std::vector<Eigen::VectorXd>& coarse, double coarse_dt,
                        const std::vector<Eigen::VectorXd>& benchmark, double benchmark_dt,
                        double horizon) {
  double integral = 0.0;
  const int last = static_cast<int>(coarse.size()) - 1;
  for (int k = 0; k <= last; ++k) {
    const double t = k * coarse_dt;
    const long idx = std::lround(t / benchmark_dt);
    if (idx < 0 || idx >= static_cast<long>(benchmark.size())) break;
    const double diff = (coarse[k] - benchmark[idx]).norm();
    const double weight = (k == 0 || k == last) ? 0.5 : 1.0;
    integral += weight * diff * coarse_dt;
  }
  return integral / horizon;
}

namespace {

std::vector<Eigen::VectorXd> simulate_endpoints(const MechanismModel& model,
                                                const GalerkinScheme& scheme,
                                                const Eigen::VectorXd& q0, double dt,
                                                double horizon) {
  const ZeroForceModel forces;
  StepWorkspace ws;
  DiscreteState state;
  state.q = q0;
  state.p = Eigen::VectorXd::Zero(q0.size());
  state.index = 0;
  std::vector<Eigen::VectorXd> out;
  out.push_back(state.q);
  const int steps = static_cast<int>(std::llround(horizon / dt));
  Eigen::VectorXd prev_q;
  for (int k = 0; k < steps; ++k) {
    auto [next, diag] =
        step(model, scheme, state, forces, {}, dt, SolverConfig{}, ws, k > 0 ? &prev_q : nullptr);
    prev_q = state.q;
    state = next;
    out.push_back(state.q);
  }
  return out;
}

}  // namespace

void run_convergence(const ConvergenceSpec& spec, std::ostream& out) {
  const MechanismModel model = make_chain_pendulum(spec.chain_links);
  Eigen::VectorXd q0 = spec.q0;
  if (q0.size() == 0) {
    q0.resize(spec.chain_links);
    for (int i = 0; i < spec.chain_links; ++i) q0[i] = 0.12 - 0.2 * i / std::max(1, spec.chain_links - 1);
  }
  const auto benchmark = simulate_endpoints(model, scheme_by_name(spec.benchmark_scheme), q0,
                                            spec.benchmark_dt, spec.horizon);
  out << "scheme,dt,traj_error\n" << std::setprecision(17);
  for (const std::string& name : spec.schemes) {
    const GalerkinScheme scheme = scheme_by_name(name);
    for (const double dt : spec.dts) {
      const auto traj = simulate_endpoints(model, scheme, q0, dt, spec.horizon);
      const double err =
          trajectory_error(traj, dt, benchmark, spec.benchmark_dt, spec.horizon);
      out << name << "," << dt << "," << err << "\n";
    }
  }
}

int run_check(unsigned seed, std::ostream& out, const MechanismModel* provided, int cases) {
  int failures = 0;
  const auto verdict = [&](bool ok, const std::string& what, double err, double tol) {
    out << (ok ? "[ok]   " : "[FAIL] ") << what << "  err=" << err << "  tol=" << tol << "\n";
    if (!ok) ++failures;
  };

  if (provided) {
    const auto issues = provided->validate();
    for (const auto& issue : issues) {
      out << "[FAIL] model validation: body " << issue.body << ": " << issue.message << "\n";
      ++failures;
    }
    if (issues.empty()) out << "[ok]   model validation\n";
    if (!issues.empty()) return failures;
  }

  std::mt19937_64 rng(seed);
  const GalerkinScheme schemes[3] = {trapezoidal(), simpson(), lobatto(3)};
  double max_del = 0.0, max_dir = 0.0, max_hess = 0.0, max_d2ld = 0.0;
  for (int c = 0; c < cases; ++c) {
    const int n = std::uniform_int_distribution<int>(2, 6)(rng);
    const GalerkinScheme& scheme = schemes[c % 3];
    const MechanismModel model =
        provided && provided->size() <= 6 ? *provided : random_tree_mechanism(rng, n);
    const double dt = std::uniform_real_distribution<double>(0.01, 0.05)(rng);
    const RandomState st = random_state(rng, model.size(), scheme.s, dt);
    const auto fm = random_force_model(rng);

    const DelOutput del = evaluate_del(model, scheme, st.qbar, st.p, *fm, {}, 0.0, dt);
    const auto fd = oracle::fd_del(model, scheme, st.qbar, st.p, *fm, {}, 0.0, dt);
    max_del = std::max(max_del, rel_error(del.residuals, fd.residuals));
    max_del = std::max(max_del, rel_error(del.next_momentum, fd.next_momentum));

    KinematicsCache cache = forward_pass(model, scheme, st.qbar, dt);
    StepWorkspace ws;
    const Eigen::MatrixXd dq =
        newton_direction(model, scheme, cache, del, *fm, {}, st.qbar, 0.0, dt, ws);
    const Eigen::MatrixXd dq_dense =
        oracle::dense_newton_direction(model, scheme, st.qbar, st.p, *fm, {}, 0.0, dt);
    max_dir = std::max(max_dir, rel_error(dq, dq_dense));

    const EnergyHessians eh = energy_hessians(model, st.qbar.col(0), cache.qdot.col(0));
    const EnergyHessians ef =
        oracle::fd_energy_hessians(model, st.qbar.col(0), cache.qdot.col(0));
    max_hess = std::max({max_hess, rel_error(eh.d2K_dqdot2, ef.d2K_dqdot2),
                         rel_error(eh.d2K_dqdot_dq, ef.d2K_dqdot_dq),
                         rel_error(eh.d2K_dq_dqdot, ef.d2K_dq_dqdot),
                         rel_error(eh.d2K_dq2, ef.d2K_dq2), rel_error(eh.d2V_dq2, ef.d2V_dq2)});

    const Eigen::MatrixXd d2ld = d2_discrete_lagrangian(model, scheme, st.qbar, dt).dense();
    const Eigen::MatrixXd d2fd = oracle::fd_d2_discrete_lagrangian(model, scheme, st.qbar, dt);
    max_d2ld = std::max(max_d2ld, rel_error(d2ld, d2fd));
  }
  verdict(max_del <= 1e-6, "DEL residual vs finite-difference oracle", max_del, 1e-6);
  verdict(max_dir <= 1e-6, "Newton direction vs dense solve", max_dir, 1e-6);
  verdict(max_hess <= 1e-5, "energy Hessians vs finite differences", max_hess, 1e-5);
  verdict(max_d2ld <= 1e-4, "discrete Lagrangian Hessian vs finite differences", max_d2ld, 1e-4);
  return failures;
}

int run_check(unsigned seed, std::ostream& out) { return run_check(seed, out, nullptr, 24); }

}  // namespace galint
