#pragma once

#include <vector>

#include <Eigen/Sparse>

#include "qbus/gaussian.hpp"

namespace qbus {

/// Chain of N sites with Hooke coupling kappa, external oscillators a and b
/// attached at sites alpha and beta (1-based) with coupling epsilon, and an
/// uncoupled oscillator c. External frequencies are pinned to the m-th
/// normal-mode frequency of the chain.
struct ChainSpec {
  int N = 10;
  double omega = 1.0;
  double kappa = 20.0;
  int alpha = 10;
  int beta = 1;
  double epsilon = 0.03;
  int m = 1;
};

struct BathSpec {
  double zeta = 0.0;
  double n_th = 0.0;
};

/// Throws InvalidAttachment or DimensionMismatch for an unusable spec.
void validate(const ChainSpec& spec);
void validate(const BathSpec& bath);

/// True when epsilon is not small against kappa and varsigma_m, i.e. the
/// reduced model is outside its accuracy regime.
bool outside_weak_coupling(const ChainSpec& spec);

/// varsigma_k, k = 1..N (returned 0-based), nondecreasing.
std::vector<double> eigenfrequencies(const ChainSpec& spec);

/// N x N orthogonal matrix O; row j holds the site amplitudes of normal mode j.
Matrix mode_matrix(const ChainSpec& spec);

/// Mode indices shared by the full and the effective layouts.
inline constexpr int kModeA = 0;
inline constexpr int kModeB = 1;
inline constexpr int kModeC = 2;
/// In the full model chain site k (1-based) is mode 2 + k; in the effective
/// model the resonant normal mode is mode 3.
inline constexpr int kModeNormal = 3;
inline int chain_site_mode(int site) { return 2 + site; }

/// Whole system (a, b, c, sites 1..N), QQPP ordering, dimension 2(N+3).
/// dV/dt = gamma V + V gamma^T + diffusion.
struct FullModel {
  ChainSpec chain;
  BathSpec bath;
  int n_modes = 0;
  Matrix gamma;
  Eigen::SparseMatrix<double> gamma_sparse;
  Matrix diffusion;
  /// Position Hessian B_q and momentum Hessian B_p of the Hamiltonian.
  Matrix hessian_q;
  Matrix hessian_p;
};

FullModel build_full_model(const ChainSpec& spec, const BathSpec& bath);

/// Reduced (a, b, c, mode m) model in the interaction picture.
struct EffectiveParams {
  double omega = 1.0;
  double epsilon = 0.0;
  double varsigma_m = 1.0;
  double O_ma = 0.0;
  double O_mb = 0.0;
  double chi = 1.0;
  Matrix4 H = Matrix4::Zero();
  Matrix gamma;      // 8x8
  Matrix diffusion;  // 8x8
};

EffectiveParams build_effective_params(const ChainSpec& spec, const BathSpec& bath);

}  // namespace qbus
