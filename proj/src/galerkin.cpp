#include "galint/galerkin.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace galint {

namespace {

// Legendre P_s and P_s' at x by the three-term recurrence.
void legendre(int s, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  if (s == 0) {
    p = p0;
    dp = 0.0;
    return;
  }
  for (int k = 2; k <= s; ++k) {
    const double pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  p = p1;
  if (std::abs(std::abs(x) - 1.0) < 1e-15) {
    dp = (x > 0 ? 1.0 : (s % 2 == 0 ? -1.0 : 1.0)) * s * (s + 1) / 2.0;
  } else {
    dp = s * (x * p1 - p0) / (x * x - 1.0);
  }
}

// Interior Gauss-Lobatto nodes on [-1,1]: roots of P_s'. Newton iteration
// from Chebyshev-Gauss-Lobatto initial guesses, tolerance 1e-14.
Eigen::VectorXd lobatto_nodes_canonical(int s) {
  Eigen::VectorXd x(s + 1);
  x[0] = -1.0;
  x[s] = 1.0;
  for (int j = 1; j < s; ++j) {
    double xj = -std::cos(M_PI * j / s);
    for (int it = 0; it < 100; ++it) {
      // P_s'(x) via the relation d/dx[(1-x^2)P_s'] = -s(s+1)P_s:
      // (1-x^2)P_s'' = 2xP_s' - s(s+1)P_s.
      double p, dp;
      legendre(s, xj, p, dp);
      const double d2p = (2.0 * xj * dp - s * (s + 1) * p) / (1.0 - xj * xj);
      const double step = dp / d2p;
      xj -= step;
      if (std::abs(step) < 1e-14) break;
    }
    x[j] = xj;
  }
  return x;
}

Eigen::MatrixXd diff_matrix_barycentric(const Eigen::VectorXd& c) {
  const int m = static_cast<int>(c.size());
  Eigen::VectorXd w = Eigen::VectorXd::Ones(m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k)
      if (k != j) w[j] /= (c[j] - c[k]);
  Eigen::MatrixXd D(m, m);
  for (int a = 0; a < m; ++a) {
    double diag = 0.0;
    for (int b = 0; b < m; ++b) {
      if (b == a) continue;
      D(a, b) = (w[b] / w[a]) / (c[a] - c[b]);
      diag -= D(a, b);
    }
    D(a, a) = diag;
  }
  return D;
}

GalerkinScheme finish(int s, Eigen::VectorXd nodes, Eigen::VectorXd weights) {
  GalerkinScheme sch;
  sch.s = s;
  sch.nodes = std::move(nodes);
  sch.weights = std::move(weights);
  sch.diff_matrix = diff_matrix_barycentric(sch.nodes);
  sch.a_matrix.resize(s + 1, s + 1);
  for (int a = 0; a <= s; ++a)
    for (int b = 0; b <= s; ++b) sch.a_matrix(a, b) = sch.weights[b] * sch.diff_matrix(b, a);
  return sch;
}

}  // namespace

GalerkinScheme trapezoidal() {
  Eigen::VectorXd c(2), w(2);
  c << 0.0, 1.0;
  w << 0.5, 0.5;
  return finish(1, c, w);
}

GalerkinScheme simpson() {
  Eigen::VectorXd c(3), w(3);
  c << 0.0, 0.5, 1.0;
  w << 1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0;
  return finish(2, c, w);
}

GalerkinScheme lobatto(int s) {
  if (s < 1 || s > 12) {
    throw std::invalid_argument("lobatto: unsupported order s=" + std::to_string(s) +
                                " (supported: 1..12)");
  }
  const Eigen::VectorXd x = lobatto_nodes_canonical(s);
  Eigen::VectorXd c(s + 1), w(s + 1);
  for (int j = 0; j <= s; ++j) {
    c[j] = 0.5 * (x[j] + 1.0);
    double p, dp;
    legendre(s, x[j], p, dp);
    // Canonical Lobatto weight 2/(s(s+1)P_s^2), halved for [0,1].
    w[j] = 1.0 / (s * (s + 1) * p * p);
  }
  c[0] = 0.0;
  c[s] = 1.0;
  return finish(s, c, w);
}

GalerkinScheme scheme_by_name(const std::string& name) {
  if (name == "trapezoidal") return trapezoidal();
  if (name == "simpson") return simpson();
  if (name.rfind("lobatto:", 0) == 0) return lobatto(std::stoi(name.substr(8)));
  throw std::invalid_argument("unknown scheme '" + name +
                              "' (expected trapezoidal, simpson, or lobatto:<s>)");
}

}  // namespace galint
