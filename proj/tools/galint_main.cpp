#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "galint/bench.hpp"
#include "galint/model_io.hpp"

namespace {

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::vector<std::string> parse_string_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

// Exit codes: 0 ok, 1 check/solver failure, 2 usage or I/O problems.
constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

int with_output(const std::string& path, const std::function<int(std::ostream&)>& body) {
  if (path.empty()) return body(std::cout);
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot open output file '" << path << "'\n";
    return kUsage;
  }
  return body(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"galint: higher-order variational integrators on kinematic trees"};
  app.require_subcommand(1);

  galint::RunSpec run;
  std::string out_path;

  auto* simulate = app.add_subcommand("simulate", "step a trajectory and write CSV");
  simulate->add_option("--model", run.model_path, "mechanism JSON file");
  simulate->add_option("--chain", run.chain_links, "links of the generated pendulum chain");
  simulate->add_option("--link-mass", run.link_mass, "chain link mass [kg]");
  simulate->add_option("--link-length", run.link_length, "chain link length [m]");
  simulate->add_option("--scheme", run.scheme, "trapezoidal | simpson | lobatto:<s>");
  simulate->add_option("--dt", run.dt, "time step [s]")->required();
  simulate->add_option("--horizon", run.horizon, "final time [s]")->required();
  simulate->add_option("--seed", run.seed, "RNG seed for initial conditions");
  simulate->add_option("--init-angle", run.init_angle_range,
                       "uniform initial-angle half-range [rad]");
  simulate->add_option("--init-rate", run.init_rate_range,
                       "uniform initial-velocity half-range [rad/s]");
  simulate->add_option("--out", out_path, "output CSV path (default stdout)");
  simulate->add_flag("--allow-failures", run.allow_failures,
                     "exit 0 even when the solver fails");

  galint::ScalingSpec scaling;
  std::string n_list = "8,16,32,64,128,256";
  auto* scale = app.add_subcommand("scaling", "median op timings per chain size, CSV");
  scale->add_option("--n", n_list, "comma-separated chain sizes");
  scale->add_option("--scheme", scaling.scheme, "integration scheme");
  scale->add_option("--dt", scaling.dt, "time step [s]");
  scale->add_option("--trials", scaling.trials, "timing trials per op");
  scale->add_option("--seed", scaling.seed, "state sampling seed");
  scale->add_option("--oracle-max-n", scaling.oracle_max_n,
                    "largest n for the dense oracle ops");
  scale->add_option("--out", out_path, "output CSV path (default stdout)");

  galint::ConvergenceSpec conv;
  std::string dts_list = "0.04,0.02,0.01,0.005";
  std::string schemes_list = "trapezoidal,simpson";
  auto* convergence =
      app.add_subcommand("convergence", "trajectory error against a fine benchmark, CSV");
  convergence->add_option("--dts", dts_list, "comma-separated time steps");
  convergence->add_option("--schemes", schemes_list, "comma-separated scheme names");
  convergence->add_option("--chain", conv.chain_links, "links of the pendulum chain");
  convergence->add_option("--horizon", conv.horizon, "final time [s]");
  convergence->add_option("--benchmark-dt", conv.benchmark_dt, "benchmark time step [s]");
  convergence->add_option("--out", out_path, "output CSV path (default stdout)");

  unsigned check_seed = 0;
  std::string check_model;
  int check_cases = 24;
  auto* check = app.add_subcommand("check", "run the oracle-equivalence suite");
  check->add_option("--seed", check_seed, "case sampling seed");
  check->add_option("--model", check_model, "mechanism JSON file to validate");
  check->add_option("--cases", check_cases, "number of random cases");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      return with_output(out_path, [&](std::ostream& out) {
        std::string error;
        const bool ok = galint::run_simulate(run, out, &error);
        if (!ok) {
          std::cerr << "error: " << error << "\n";
          if (error.rfind("step ", 0) == 0) return run.allow_failures ? kOk : kFailure;
          return kUsage;
        }
        return kOk;
      });
    }
    if (scale->parsed()) {
      scaling.sizes = parse_int_list(n_list);
      return with_output(out_path, [&](std::ostream& out) {
        galint::run_scaling(scaling, out);
        return kOk;
      });
    }
    if (convergence->parsed()) {
      conv.dts = parse_double_list(dts_list);
      conv.schemes = parse_string_list(schemes_list);
      return with_output(out_path, [&](std::ostream& out) {
        galint::run_convergence(conv, out);
        return kOk;
      });
    }
    if (check->parsed()) {
      std::unique_ptr<galint::MechanismModel> model;
      if (!check_model.empty()) {
        model = std::make_unique<galint::MechanismModel>(galint::load_model(check_model));
      }
      const int failures =
          galint::run_check(check_seed, std::cout, model.get(), check_cases);
      std::cout << (failures == 0 ? "all checks passed\n"
                                  : std::to_string(failures) + " check(s) failed\n");
      return failures == 0 ? kOk : kFailure;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
