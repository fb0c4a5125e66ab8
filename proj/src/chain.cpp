#include "qbus/chain.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qbus/error.hpp"

namespace qbus {

void validate(const ChainSpec& spec) {
  if (spec.N < 2) throw Error(ErrorCode::DimensionMismatch, "chain needs N >= 2");
  if (!(spec.omega > 0.0)) throw Error(ErrorCode::ConfigError, "omega must be positive");
  if (spec.kappa < 0.0) throw Error(ErrorCode::ConfigError, "kappa must be >= 0");
  if (spec.epsilon < 0.0) throw Error(ErrorCode::ConfigError, "epsilon must be >= 0");
  if (spec.alpha < 1 || spec.alpha > spec.N || spec.beta < 1 || spec.beta > spec.N) {
    throw Error(ErrorCode::InvalidAttachment,
                "attachment sites must lie in 1.." + std::to_string(spec.N));
  }
  if (spec.alpha == spec.beta) {
    throw Error(ErrorCode::InvalidAttachment, "alpha and beta must differ");
  }
  if (spec.m < 1 || spec.m > spec.N) {
    throw Error(ErrorCode::IndexOutOfRange, "resonant mode m must lie in 1..N");
  }
}

void validate(const BathSpec& bath) {
  if (bath.zeta < 0.0) throw Error(ErrorCode::ConfigError, "zeta must be >= 0");
  if (bath.n_th < 0.0) throw Error(ErrorCode::ConfigError, "n_th must be >= 0");
}

bool outside_weak_coupling(const ChainSpec& spec) {
  const double varsigma = eigenfrequencies(spec)[spec.m - 1];
  return spec.epsilon >= 0.1 * spec.kappa || spec.epsilon >= 0.1 * varsigma;
}

std::vector<double> eigenfrequencies(const ChainSpec& spec) {
  std::vector<double> out(spec.N);
  const double w = spec.omega;
  for (int k = 0; k < spec.N; ++k) {
    const double c = std::cos(k * std::numbers::pi / spec.N);
    out[k] = std::sqrt(w * (w + spec.kappa) - w * spec.kappa * c);
  }
  // cos(0) may round so that the first radicand is not exactly w^2.
  out[0] = std::sqrt(w * w);
  return out;
}

Matrix mode_matrix(const ChainSpec& spec) {
  const int N = spec.N;
  Matrix O(N, N);
  for (int j = 0; j < N; ++j) {
    const double norm = std::sqrt((j == 0 ? 1.0 : 2.0) / N);
    for (int k = 0; k < N; ++k) {
      O(j, k) = norm * std::cos(j * (2 * k + 1) * std::numbers::pi / (2.0 * N));
    }
  }
  return O;
}

FullModel build_full_model(const ChainSpec& spec, const BathSpec& bath) {
  validate(spec);
  validate(bath);
  const int n = spec.N + 3;
  const double Omega = eigenfrequencies(spec)[spec.m - 1];

  Matrix Bq = Matrix::Zero(n, n);
  Matrix Bp = Matrix::Zero(n, n);
  for (int e : {kModeA, kModeB, kModeC}) {
    Bq(e, e) = Omega;
    Bp(e, e) = Omega;
  }
  for (int site = 1; site <= spec.N; ++site) {
    const int i = chain_site_mode(site);
    Bq(i, i) += spec.omega;
    Bp(i, i) = spec.omega;
  }
  // (x/4)(q_i - q_j)^2 contributes x/2 on both diagonals and -x/2 off them.
  const auto spring = [&Bq](int i, int j, double strength) {
    Bq(i, i) += 0.5 * strength;
    Bq(j, j) += 0.5 * strength;
    Bq(i, j) -= 0.5 * strength;
    Bq(j, i) -= 0.5 * strength;
  };
  for (int site = 1; site < spec.N; ++site) {
    spring(chain_site_mode(site), chain_site_mode(site + 1), spec.kappa);
  }
  spring(chain_site_mode(spec.alpha), kModeA, spec.epsilon);
  spring(chain_site_mode(spec.beta), kModeB, spec.epsilon);

  FullModel model;
  model.chain = spec;
  model.bath = bath;
  model.n_modes = n;
  model.hessian_q = Bq;
  model.hessian_p = Bp;
  model.gamma = Matrix::Zero(2 * n, 2 * n);
  model.gamma.topRightCorner(n, n) = Bp;
  model.gamma.bottomLeftCorner(n, n) = -Bq;
  model.gamma.diagonal().array() -= 0.5 * bath.zeta;
  model.gamma_sparse = model.gamma.sparseView();
  model.gamma_sparse.makeCompressed();
  model.diffusion = Matrix::Identity(2 * n, 2 * n) * (bath.zeta * (bath.n_th + 0.5));
  return model;
}

EffectiveParams build_effective_params(const ChainSpec& spec, const BathSpec& bath) {
  validate(spec);
  validate(bath);
  EffectiveParams p;
  p.omega = spec.omega;
  p.epsilon = spec.epsilon;
  p.varsigma_m = eigenfrequencies(spec)[spec.m - 1];
  const Matrix O = mode_matrix(spec);
  p.O_ma = O(spec.m - 1, spec.alpha - 1);
  p.O_mb = O(spec.m - 1, spec.beta - 1);
  const double ratio = spec.omega / p.varsigma_m;
  p.chi = ratio * (p.O_ma * p.O_ma + p.O_mb * p.O_mb) + 1.0;

  const double e = spec.epsilon / 4.0;
  const double g = e * std::sqrt(ratio);
  Matrix4 H = Matrix4::Zero();
  H(0, 0) = e;
  H(1, 1) = e;
  H(0, 3) = H(3, 0) = -g * p.O_ma;
  H(1, 3) = H(3, 1) = -g * p.O_mb;
  H(3, 3) = e * ratio * (p.O_ma * p.O_ma + p.O_mb * p.O_mb);
  p.H = H;

  p.gamma = Matrix::Zero(8, 8);
  p.gamma.topRightCorner<4, 4>() = H;
  p.gamma.bottomLeftCorner<4, 4>() = -H;
  p.gamma.diagonal().array() -= 0.5 * bath.zeta;

  Vector diag = Vector::Ones(8);
  diag(3) = p.varsigma_m / spec.omega;
  diag(7) = spec.omega / p.varsigma_m;
  p.diffusion = (bath.zeta * (bath.n_th + 0.5) * diag).asDiagonal();
  return p;
}

}  // namespace qbus
