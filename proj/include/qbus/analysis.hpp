#pragma once

#include <functional>
#include <vector>

#include "qbus/chain.hpp"

namespace qbus {

/// Roots of a critical-point equation inside a time window, in both the
/// rescaled time tau = epsilon t / 4 and the plotted time omega t.
struct CriticalTimes {
  std::vector<double> tau;
  std::vector<double> omega_t;
  double chi = 1.0;
  double tau_min = 0.0;
  double tau_max = 0.0;
};

/// Sign-change scan resolution per window, and bisection tolerance in tau.
inline constexpr int kScanPoints = 100000;
inline constexpr double kBisectionTolerance = 1e-12;

/// Residual of sin(chi tau) = sin(tau) + sin((chi - 1) tau); its roots are the
/// critical points of F, hence of E, S and det of the pair [ac].
double cpt_residual(const EffectiveParams& params, double tau);
/// Residual of (O_mb/O_ma)^2 sin(chi tau) = -sin(tau) - sin((chi - 1) tau),
/// the critical points of I (pair [bc]).
double cpt2_residual(const EffectiveParams& params, double tau);

/// The window [t_min, t_max] is in units of time (1/omega). Throws
/// EmptyWindow when t_max <= t_min or epsilon = 0.
CriticalTimes solve_cpt(const EffectiveParams& params, double t_min, double t_max);
CriticalTimes solve_cpt2(const EffectiveParams& params, double t_min, double t_max);

/// Earliest root of solve_cpt at which F reaches its largest value over all
/// roots in the window: the time of maximal transfer from [bc] to [ac].
/// Returned as omega t.
double transfer_time(const EffectiveParams& params, double t_min, double t_max);

struct CriticalEntanglement {
  double value = 0.0;
  /// Set for r = 0, where there is nothing to transfer and value is 0.
  bool zero_squeezing = false;
};

/// Log-negativity of [ac] at t_star from the closed-form invariants.
CriticalEntanglement entanglement_at_critical(const EffectiveParams& params, double r, double n_c,
                                              double t_star);

/// Closed interval in omega t.
struct Interval {
  double t_on = 0.0;
  double t_off = 0.0;
};

/// F(t) level above which S->_ac is nonzero.
double direct_steering_threshold(double r, double n_c);

/// Intervals where S->_ac > 0. Windows and results are in omega t.
std::vector<Interval> direct_steering_window(const EffectiveParams& params, double r, double n_c,
                                             double t_min, double t_max);

/// Intervals where S->_bc vanishes.
std::vector<Interval> bc_steering_window(const EffectiveParams& params, double r, double n_c,
                                         double t_min, double t_max);

/// Intervals of [t_min, t_max] where f > 0; edges refined by bisection.
std::vector<Interval> positive_intervals(const std::function<double(double)>& f, double t_min,
                                         double t_max, int scan_points = kScanPoints);

enum class ThresholdKind {
  /// r_c = arccosh[(3n + 1)/(n + 1)]: S->_bc(0) > 0 iff r > r_c.
  DirectSteering,
  /// r_sep = ln(2n + 1): the thermal pair is entangled iff r > r_sep.
  Separability,
  /// r_steer = arccosh(2n + 1): the thermal pair is steerable iff r > r_steer.
  Steerability,
};

double threshold(ThresholdKind kind, double occupation);

}  // namespace qbus
