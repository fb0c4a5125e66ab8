#include "qbus/correlations.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qbus/error.hpp"

namespace qbus {

namespace {

void require_physical(const TwoModeCM& V) {
  const double margin = V.uncertainty_margin();
  if (margin < -kPhysicalTolerance) {
    throw Error(ErrorCode::NonPhysicalInput,
                "V + iJ has eigenvalue " + std::to_string(margin));
  }
}

double x_log_x(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// Second argument of the discord formula, measurement on v. In the
// vacuum-equals-identity normalisation it is >= 1 and equals 1 for pure states.
double conditional_width(const LocalInvariants& inv) {
  const double su = std::sqrt(inv.I_u);
  const double sv = std::sqrt(inv.I_v);
  return (su + su * sv + inv.I_uv) / (1.0 + sv);
}

double discord_forward(const TwoModeCM& V) {
  const LocalInvariants inv = local_invariants(V);
  const SymplecticSpectrum s = symplectic_eigenvalues(V);
  return std::max(entropy_function(std::sqrt(inv.I_v)) - entropy_function(s.plus) -
                      entropy_function(s.minus) + entropy_function(conditional_width(inv)),
                  0.0);
}

double steering_forward(const TwoModeCM& V) {
  const LocalInvariants inv = local_invariants(V);
  if (inv.det <= 0.0) {
    throw Error(ErrorCode::NonPositiveDeterminant, "det V = " + std::to_string(inv.det));
  }
  return std::max(0.5 * (std::log(inv.I_u) - std::log(inv.det)), 0.0);
}

struct BellForm {
  // <B>(theta) = [1 + e^{-a_v th^2} + e^{-a_u th^2} - e^{-a_uv th^2}] / sqrt(det)
  double a_u, a_v, a_uv, inv_sqrt_det;

  explicit BellForm(const TwoModeCM& V) {
    const double det = local_invariants(V).det;
    if (det <= 1e-14) throw Error(ErrorCode::SingularCM, "det V = " + std::to_string(det));
    const Matrix4 inv = V.data().inverse();
    a_u = inv(0, 0);
    a_v = inv(2, 2);
    a_uv = inv(0, 0) + inv(2, 2) - 2.0 * inv(0, 2);
    inv_sqrt_det = 1.0 / std::sqrt(det);
  }

  double operator()(double theta) const {
    const double t2 = theta * theta;
    return (1.0 + std::exp(-a_v * t2) + std::exp(-a_u * t2) - std::exp(-a_uv * t2)) *
           inv_sqrt_det;
  }
};

}  // namespace

double entropy_function(double x) {
  if (x < 1.0 - kEntropyClamp) {
    throw Error(ErrorCode::NonPhysicalInput,
                "symplectic eigenvalue " + std::to_string(x) + " below 1");
  }
  if (x <= 1.0) return 0.0;
  return x_log_x(0.5 * (x + 1.0)) - x_log_x(0.5 * (x - 1.0));
}

double mutual_information(const TwoModeCM& V) {
  require_physical(V);
  const LocalInvariants inv = local_invariants(V);
  const SymplecticSpectrum s = symplectic_eigenvalues(V);
  return std::max(entropy_function(std::sqrt(inv.I_u)) + entropy_function(std::sqrt(inv.I_v)) -
                      entropy_function(s.plus) - entropy_function(s.minus),
                  0.0);
}

double gaussian_discord(const TwoModeCM& V, Direction direction) {
  require_physical(V);
  return direction == Direction::Forward ? discord_forward(V) : discord_forward(V.swapped());
}

double log_negativity(const TwoModeCM& V) {
  require_physical(V);
  const SymplecticSpectrum s = symplectic_eigenvalues(V, true);
  if (s.minus >= 1.0 - kEntropyClamp) return 0.0;
  return -std::log(s.minus);
}

double steering(const TwoModeCM& V, Direction direction) {
  if (const double det = local_invariants(V).det; det <= 0.0) {
    throw Error(ErrorCode::NonPositiveDeterminant, "det V = " + std::to_string(det));
  }
  require_physical(V);
  return direction == Direction::Forward ? steering_forward(V) : steering_forward(V.swapped());
}

double bell_expectation(const TwoModeCM& V, double theta) { return BellForm(V)(theta); }

BellResult bell_max(const TwoModeCM& V, const BellSearch& search) {
  require_physical(V);
  if (search.grid_points < 2 || !(search.theta_max > 0.0)) {
    throw Error(ErrorCode::ConfigError, "Bell search needs >= 2 grid points and theta_max > 0");
  }
  const BellForm form(V);
  const auto objective = [&form](double th) { return std::abs(form(th)); };

  const double step = search.theta_max / (search.grid_points - 1);
  int best = 0;
  double best_value = objective(0.0);
  for (int i = 1; i < search.grid_points; ++i) {
    const double value = objective(i * step);
    if (value > best_value) {
      best_value = value;
      best = i;
    }
  }

  // Golden-section refinement on the bracket around the best grid point.
  double lo = std::max(0.0, (best - 1) * step);
  double hi = std::min(search.theta_max, (best + 1) * step);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (hi - lo > search.tolerance) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    }
  }
  BellResult out{best_value, best * step};
  const double mid = 0.5 * (lo + hi);
  if (const double refined = objective(mid); refined > out.value) {
    out.value = refined;
    out.theta_star = mid;
  }
  return out;
}

CorrelationRecord correlation_record(const TwoModeCM& V, int u, int v, double t,
                                     const BellSearch& search) {
  CorrelationRecord rec;
  rec.t = t;
  rec.u = u;
  rec.v = v;
  rec.E = log_negativity(V);
  rec.S_fwd = steering(V, Direction::Forward);
  rec.S_rev = steering(V, Direction::Reverse);
  rec.D_fwd = gaussian_discord(V, Direction::Forward);
  rec.D_rev = gaussian_discord(V, Direction::Reverse);
  rec.M = mutual_information(V);
  const BellResult bell = bell_max(V, search);
  rec.B = bell.value;
  rec.theta_star = bell.theta_star;
  return rec;
}

CorrelationRecord correlation_record(const CovarianceMatrix& V, int u, int v, double t,
                                     const BellSearch& search, double hbar) {
  return correlation_record(extract_two_mode(V, u, v, hbar), u, v, t, search);
}

}  // namespace qbus
