#pragma once

#include "qbus/chain.hpp"
#include "qbus/gaussian.hpp"

namespace qbus {

/// Two-mode squeezed state of (b, c) with squeezing r.
///   PureEnv:    thermal occupation n_c in c only, every other oscillator in vacuum.
///   ThermalEnv: every oscillator (the squeezed pair included) at occupation n.
struct InitialStateSpec {
  enum class Kind { PureEnv, ThermalEnv };
  Kind kind = Kind::PureEnv;
  double r = 1.0;
  double occupation = 0.0;
};

/// 8x8 (a, b, c, mode m) QQPP matrix of the pure-environment family.
CovarianceMatrix tmtss_cm(double r, double n_c);

/// (2n + 1) times tmtss_cm(r, 0).
CovarianceMatrix thermal_tmtss_cm(double r, double n);

CovarianceMatrix initial_cm(const InitialStateSpec& spec);

/// The (q_b, q_c, p_b, p_c) block of a 4-mode effective-layout matrix.
Matrix4 bc_block(const CovarianceMatrix& effective);

/// Whole-system matrix: every oscillator thermal at env_n, with the rows and
/// columns of (b, c) replaced by `bc` (QQPP order q_b, q_c, p_b, p_c).
CovarianceMatrix embed_full(const Matrix& bc, const ChainSpec& spec, double env_n);

/// Whole-system initial matrix matching initial_cm(spec).
CovarianceMatrix initial_full_cm(const InitialStateSpec& spec, const ChainSpec& chain);

struct InitialCorrelations {
  double E = 0.0;
  double S_fwd = 0.0;
  double S_rev = 0.0;
  double sigma_tilde_minus = 1.0;
};

/// Closed-form E, S->, S<- of the pair [bc] at t = 0. Independent of the
/// generic measures in correlations.hpp.
InitialCorrelations initial_correlations(const InitialStateSpec& spec);

}  // namespace qbus
