#pragma once

#include <limits>
#include <vector>

#include "qbus/chain.hpp"
#include "qbus/gaussian.hpp"

namespace qbus {

/// E_t = [[C, S], [-S, C]] with C = cos(H t), S = sin(H t); symplectic and
/// orthogonal.
struct EffectivePropagator {
  double t = 0.0;
  double tau = 0.0;  // epsilon t / 4
  double chi = 1.0;
  Matrix4 C = Matrix4::Identity();
  Matrix4 S = Matrix4::Zero();
  Matrix E = Matrix::Identity(8, 8);
};

/// Time-dependent (F, I) and constant (G, H) functions entering the pair
/// invariants of [ac] and [bc].
struct AuxFunctions {
  double F = 0.0;
  double G = 0.0;
  double H = 0.0;
  double I = 0.0;
};

/// Closed-form E_t. Throws DegenerateChi when chi is within 1e-12 of 1.
EffectivePropagator effective_symplectic(const EffectiveParams& params, double t);

AuxFunctions aux_functions(const EffectiveParams& params, double t);

/// V(t) = e^{-zeta t} E_t V0 E_t^T + (1 - e^{-zeta t})/zeta D for the
/// 4-mode (a, b, c, mode m) matrix V0 in QQPP order.
CovarianceMatrix propagate_effective(const EffectiveParams& params, const BathSpec& bath,
                                     const CovarianceMatrix& V0, double t);

enum class ExactMethod {
  /// Fixed-step RK4 on the Lyapunov equation.
  RK4,
  /// Exact discrete map from the block exponential of [[-Gamma, D], [0, Gamma^T]].
  VanLoan,
};

struct ExactOptions {
  ExactMethod method = ExactMethod::RK4;
  /// RK4 step; <= 0 selects min(0.01/varsigma_max, span/1e5).
  double step = 0.0;
  /// Maximum entry change tolerated when halving the step on the probe span.
  double convergence_tolerance = 1e-8;
  /// Length of the step-halving probe, clipped to the requested span. The
  /// default checks the whole span; shorten it for chains too large for the
  /// lifted map, where each probe costs a full stepwise run.
  double probe_span = std::numeric_limits<double>::infinity();
  /// Let RK4 apply its one-step map raised to the step count (same result up
  /// to rounding, much faster) when the chain is small enough to form it.
  bool lifted = true;
  /// Tolerance on the uncertainty check of every emitted matrix.
  double physical_tolerance = kPhysicalTolerance;
};

/// Solves dV/dt = Gamma V + V Gamma^T + D of the full model from V(0) = V0 and
/// returns V at each time of `t_grid` (nondecreasing, >= 0).
/// Throws NonPhysicalInput, DimensionMismatch, StepSizeUnderflow, IntegrationFailure.
std::vector<CovarianceMatrix> propagate_exact(const FullModel& model, const CovarianceMatrix& V0,
                                              const std::vector<double>& t_grid,
                                              const ExactOptions& options = {});

/// Step actually used by the RK4 path after the convergence probe.
double rk4_step(const FullModel& model, const CovarianceMatrix& V0, double span,
                const ExactOptions& options = {});

/// Removes the free rotation of a, b and c at frequency varsigma over time t
/// from a full-model matrix, giving the frame of the effective model. Local
/// invariants are unchanged; frame-dependent quantities such as the Bell
/// measure become comparable between the two models.
CovarianceMatrix to_rotating_frame(const CovarianceMatrix& V, double varsigma, double t);

/// Closed-form invariants of the pair [ac] (u = a, v = c) under unitary
/// effective evolution from the pure-environment squeezed state (r, n_c).
LocalInvariants pair_invariants_ac(const EffectiveParams& params, double r, double n_c, double t);
/// Same for the pair [bc] (u = b, v = c).
LocalInvariants pair_invariants_bc(const EffectiveParams& params, double r, double n_c, double t);

}  // namespace qbus
