#include "qbus/initial_states.hpp"

#include <cmath>
#include <string>

#include "qbus/error.hpp"

namespace qbus {

namespace {

void check_occupation(double r, double n) {
  if (!(r >= 0.0)) throw Error(ErrorCode::ConfigError, "squeezing r must be >= 0");
  if (!(n >= 0.0)) throw Error(ErrorCode::ConfigError, "thermal occupation must be >= 0");
}

}  // namespace

CovarianceMatrix tmtss_cm(double r, double n_c) {
  check_occupation(r, n_c);
  const double sh_half = std::sinh(0.5 * r);
  const double ch_half = std::cosh(0.5 * r);
  const double s = 2.0 * n_c * sh_half * sh_half + std::cosh(r);
  const double y = 2.0 * n_c * ch_half * ch_half + std::cosh(r);
  const double w = (n_c + 1.0) * std::sinh(r);
  Matrix V = Matrix::Identity(8, 8);
  // q block, then p block with the correlation sign flipped.
  V(1, 1) = s;
  V(2, 2) = y;
  V(1, 2) = V(2, 1) = w;
  V(5, 5) = s;
  V(6, 6) = y;
  V(5, 6) = V(6, 5) = -w;
  return CovarianceMatrix(0.5 * V, Ordering::QQPP);
}

CovarianceMatrix thermal_tmtss_cm(double r, double n) {
  check_occupation(r, n);
  return CovarianceMatrix((2.0 * n + 1.0) * tmtss_cm(r, 0.0).data(), Ordering::QQPP);
}

CovarianceMatrix initial_cm(const InitialStateSpec& spec) {
  return spec.kind == InitialStateSpec::Kind::PureEnv ? tmtss_cm(spec.r, spec.occupation)
                                                      : thermal_tmtss_cm(spec.r, spec.occupation);
}

Matrix4 bc_block(const CovarianceMatrix& effective) {
  if (effective.n_modes() != 4) {
    throw Error(ErrorCode::DimensionMismatch, "expected the 4-mode effective layout");
  }
  const int idx[4] = {effective.q_index(kModeB), effective.q_index(kModeC),
                      effective.p_index(kModeB), effective.p_index(kModeC)};
  Matrix4 out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out(i, j) = effective.data()(idx[i], idx[j]);
  }
  return out;
}

CovarianceMatrix embed_full(const Matrix& bc, const ChainSpec& spec, double env_n) {
  if (bc.rows() != 4 || bc.cols() != 4) {
    throw Error(ErrorCode::DimensionMismatch, "(b, c) block must be 4x4, got " +
                                                  std::to_string(bc.rows()) + "x" +
                                                  std::to_string(bc.cols()));
  }
  if (spec.N < 2) throw Error(ErrorCode::DimensionMismatch, "chain needs N >= 2");
  if (!(env_n >= 0.0)) throw Error(ErrorCode::ConfigError, "thermal occupation must be >= 0");
  const int n = spec.N + 3;
  Matrix V = Matrix::Identity(2 * n, 2 * n) * (env_n + 0.5);
  const int idx[4] = {kModeB, kModeC, n + kModeB, n + kModeC};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) V(idx[i], idx[j]) = bc(i, j);
  }
  return CovarianceMatrix(std::move(V), Ordering::QQPP);
}

CovarianceMatrix initial_full_cm(const InitialStateSpec& spec, const ChainSpec& chain) {
  const double env = spec.kind == InitialStateSpec::Kind::ThermalEnv ? spec.occupation : 0.0;
  return embed_full(bc_block(initial_cm(spec)), chain, env);
}

InitialCorrelations initial_correlations(const InitialStateSpec& spec) {
  check_occupation(spec.r, spec.occupation);
  const double r = spec.r;
  InitialCorrelations out;
  if (spec.kind == InitialStateSpec::Kind::ThermalEnv) {
    const double scale = 2.0 * spec.occupation + 1.0;
    out.sigma_tilde_minus = scale * std::exp(-r);
    out.E = std::max(0.0, r - std::log(scale));
    out.S_fwd = out.S_rev = std::max(0.0, std::log(std::cosh(r) / scale));
    return out;
  }
  const double n = spec.occupation;
  const double ch = std::cosh(r);
  const double a = (n + 1.0) * ch;
  const double inner = std::max(a * a - (2.0 * n + 1.0), 0.0);
  // The explicit radical 2a^2 - m - 2a sqrt(a^2 - m), m = 2n + 1, cancels
  // badly for large r; its product with the conjugate radical is m^2.
  const double m = 2.0 * n + 1.0;
  const double conj = 2.0 * a * a - m + 2.0 * a * std::sqrt(inner);
  out.sigma_tilde_minus = m / std::sqrt(conj);
  out.E = std::max(0.0, -std::log(out.sigma_tilde_minus));
  out.S_fwd = std::max(0.0, std::log(std::abs((n - a) / (1.0 + 2.0 * n))));
  out.S_rev = std::max(0.0, std::log(std::abs((n + a) / (1.0 + 2.0 * n))));
  return out;
}

}  // namespace qbus
