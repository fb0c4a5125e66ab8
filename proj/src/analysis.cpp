#include "qbus/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qbus/error.hpp"
#include "qbus/propagation.hpp"

namespace qbus {

namespace {

double bisect(const std::function<double(double)>& f, double lo, double hi, double f_lo,
              double tolerance) {
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

CriticalTimes scan_roots(const EffectiveParams& params, double t_min, double t_max,
                         const std::function<double(double)>& residual) {
  if (!(t_max > t_min) || !(params.epsilon > 0.0)) {
    throw Error(ErrorCode::EmptyWindow, "critical-time window is empty");
  }
  CriticalTimes out;
  out.chi = params.chi;
  out.tau_min = params.epsilon * t_min / 4.0;
  out.tau_max = params.epsilon * t_max / 4.0;
  const double step = (out.tau_max - out.tau_min) / kScanPoints;

  std::vector<double> roots;
  double prev_tau = out.tau_min;
  double prev = residual(prev_tau);
  if (prev == 0.0) roots.push_back(prev_tau);
  for (int i = 1; i <= kScanPoints; ++i) {
    const double tau = i == kScanPoints ? out.tau_max : out.tau_min + i * step;
    const double value = residual(tau);
    if (value == 0.0) {
      roots.push_back(tau);
    } else if (prev != 0.0 && (value > 0.0) != (prev > 0.0)) {
      roots.push_back(bisect(residual, prev_tau, tau, prev, kBisectionTolerance));
    }
    prev_tau = tau;
    prev = value;
  }

  for (double tau : roots) {
    if (std::abs(residual(tau)) > 1e-10) continue;
    if (!out.tau.empty() && tau - out.tau.back() < 1e-8) continue;
    out.tau.push_back(tau);
    out.omega_t.push_back(params.omega * 4.0 * tau / params.epsilon);
  }
  return out;
}

}  // namespace

double cpt_residual(const EffectiveParams& p, double tau) {
  return std::sin(p.chi * tau) - std::sin(tau) - std::sin((p.chi - 1.0) * tau);
}

double cpt2_residual(const EffectiveParams& p, double tau) {
  const double ratio = (p.O_mb / p.O_ma) * (p.O_mb / p.O_ma);
  return ratio * std::sin(p.chi * tau) + std::sin(tau) + std::sin((p.chi - 1.0) * tau);
}

CriticalTimes solve_cpt(const EffectiveParams& params, double t_min, double t_max) {
  return scan_roots(params, t_min, t_max,
                    [&params](double tau) { return cpt_residual(params, tau); });
}

CriticalTimes solve_cpt2(const EffectiveParams& params, double t_min, double t_max) {
  return scan_roots(params, t_min, t_max,
                    [&params](double tau) { return cpt2_residual(params, tau); });
}

double transfer_time(const EffectiveParams& params, double t_min, double t_max) {
  const CriticalTimes roots = solve_cpt(params, t_min, t_max);
  double best_t = std::numeric_limits<double>::quiet_NaN();
  double best_F = -std::numeric_limits<double>::infinity();
  for (double t : roots.omega_t) {
    const double F = aux_functions(params, t / params.omega).F;
    if (F > best_F + 1e-12) {
      best_F = F;
      best_t = t;
    }
  }
  if (std::isnan(best_t)) throw Error(ErrorCode::EmptyWindow, "no critical time in window");
  return best_t;
}

CriticalEntanglement entanglement_at_critical(const EffectiveParams& params, double r, double n_c,
                                              double t_star) {
  CriticalEntanglement out;
  if (r == 0.0) {
    out.zero_squeezing = true;
    return out;
  }
  const LocalInvariants inv = pair_invariants_ac(params, r, n_c, t_star / params.omega);
  const double dt = inv.delta_tilde;
  const double plus2 = 0.5 * dt + 0.5 * std::sqrt(std::max(dt * dt - 4.0 * inv.det, 0.0));
  const double minus = std::sqrt(inv.det / plus2);
  out.value = std::max(0.0, -std::log(minus));
  return out;
}

std::vector<Interval> positive_intervals(const std::function<double(double)>& f, double t_min,
                                         double t_max, int scan_points) {
  std::vector<Interval> out;
  const double step = (t_max - t_min) / scan_points;
  double prev_t = t_min;
  double prev = f(t_min);
  bool inside = prev > 0.0;
  double start = t_min;
  for (int i = 1; i <= scan_points; ++i) {
    const double t = i == scan_points ? t_max : t_min + i * step;
    const double value = f(t);
    const bool now = value > 0.0;
    if (now != inside) {
      const double edge = bisect(f, prev_t, t, prev, 1e-10 * std::max(1.0, std::abs(t)));
      if (now) {
        start = edge;
      } else {
        out.push_back({start, edge});
      }
      inside = now;
    }
    prev_t = t;
    prev = value;
  }
  if (inside) out.push_back({start, t_max});
  return out;
}

double direct_steering_threshold(double r, double n_c) {
  return 0.25 + n_c / (2.0 * (n_c + 1.0) * (std::cosh(r) - 1.0));
}

std::vector<Interval> direct_steering_window(const EffectiveParams& params, double r, double n_c,
                                             double t_min, double t_max) {
  if (!(r > 0.0)) return {};
  const double level = direct_steering_threshold(r, n_c);
  return positive_intervals(
      [&](double t) { return aux_functions(params, t / params.omega).F - level; }, t_min, t_max);
}

std::vector<Interval> bc_steering_window(const EffectiveParams& params, double r, double n_c,
                                         double t_min, double t_max) {
  // S->_bc = max[(ln I_b - ln det)/2, 0] vanishes where ln det - ln I_b >= 0.
  return positive_intervals(
      [&](double t) {
        const LocalInvariants inv = pair_invariants_bc(params, r, n_c, t / params.omega);
        return std::log(inv.det) - std::log(inv.I_u);
      },
      t_min, t_max);
}

double threshold(ThresholdKind kind, double n) {
  if (!(n >= 0.0)) throw Error(ErrorCode::ConfigError, "occupation must be >= 0");
  switch (kind) {
    case ThresholdKind::DirectSteering: return std::acosh((3.0 * n + 1.0) / (n + 1.0));
    case ThresholdKind::Separability: return std::log(2.0 * n + 1.0);
    case ThresholdKind::Steerability: return std::acosh(2.0 * n + 1.0);
  }
  return 0.0;
}

}  // namespace qbus
