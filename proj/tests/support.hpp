#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "qbus/chain.hpp"
#include "qbus/gaussian.hpp"

namespace qbus::test {

inline double max_abs(const Eigen::MatrixXd& M) { return M.cwiseAbs().maxCoeff(); }

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

/// Fixed seed so every run sees the same samples.
inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(20240611);
  return engine;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

/// Random symplectic matrix exp(J K) for a random symmetric K.
inline Eigen::MatrixXd random_symplectic(int n_modes, Ordering ordering, double scale) {
  Eigen::MatrixXd K(2 * n_modes, 2 * n_modes);
  for (int i = 0; i < K.rows(); ++i) {
    for (int j = 0; j <= i; ++j) K(i, j) = K(j, i) = uniform(-scale, scale);
  }
  const Eigen::MatrixXd JK = symplectic_form(n_modes, ordering) * K;
  return JK.exp();
}

/// Random physical two-mode matrix: symplectic image of a thermal state.
inline TwoModeCM random_two_mode(double scale = 0.6, double max_nu = 4.0) {
  const double nu1 = uniform(1.0, max_nu);
  const double nu2 = uniform(1.0, max_nu);
  const Eigen::Vector4d d(nu1, nu1, nu2, nu2);
  const Eigen::MatrixXd S = random_symplectic(2, Ordering::QPQP, scale);
  const Eigen::Matrix4d V = S * d.asDiagonal() * S.transpose();
  return TwoModeCM(0.5 * (V + V.transpose()));
}

/// Moduli of the eigenvalues of i J V, ascending.
inline std::vector<double> ijv_moduli(const TwoModeCM& V) {
  const Eigen::Matrix4cd M = std::complex<double>(0.0, 1.0) *
                             (symplectic_form(2, Ordering::QPQP) * V.data()).cast<std::complex<double>>();
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(M);
  std::vector<double> out;
  for (int i = 0; i < 4; ++i) out.push_back(std::abs(es.eigenvalues()(i)));
  std::sort(out.begin(), out.end());
  return out;
}

/// Local phase-space rotation of one mode of a QPQP two-mode matrix.
inline TwoModeCM rotate_modes(const TwoModeCM& V, double phi_u, double phi_v) {
  Eigen::Matrix4d R = Eigen::Matrix4d::Zero();
  R.topLeftCorner<2, 2>() << std::cos(phi_u), std::sin(phi_u), -std::sin(phi_u), std::cos(phi_u);
  R.bottomRightCorner<2, 2>() << std::cos(phi_v), std::sin(phi_v), -std::sin(phi_v),
      std::cos(phi_v);
  return TwoModeCM(R * V.data() * R.transpose());
}

/// Generator [[0, H], [-H, 0]] of the effective propagator.
inline Eigen::MatrixXd hamiltonian_generator(const EffectiveParams& p) {
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(8, 8);
  G.topRightCorner<4, 4>() = p.H;
  G.bottomLeftCorner<4, 4>() = -p.H;
  return G;
}

/// Plain fixed-step RK4 on dV/dt = G V + V G^T + D.
inline Eigen::MatrixXd rk4_oracle(const Eigen::MatrixXd& G, const Eigen::MatrixXd& D,
                                  Eigen::MatrixXd V, double t, int steps) {
  const double h = t / steps;
  const auto f = [&](const Eigen::MatrixXd& X) -> Eigen::MatrixXd {
    return G * X + X * G.transpose() + D;
  };
  for (int s = 0; s < steps; ++s) {
    const Eigen::MatrixXd k1 = f(V);
    const Eigen::MatrixXd k2 = f(V + 0.5 * h * k1);
    const Eigen::MatrixXd k3 = f(V + 0.5 * h * k2);
    const Eigen::MatrixXd k4 = f(V + h * k3);
    V += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return V;
}

}  // namespace qbus::test
