#pragma once

#include "qbus/gaussian.hpp"

namespace qbus {

/// Forward quantities of the pair (u, v) use u as the first-named party:
/// S-> uses I_u, D-> measures v. Reverse swaps the roles.
enum class Direction { Forward, Reverse };

/// Symplectic entropy h(x) = ((x+1)/2) ln((x+1)/2) - ((x-1)/2) ln((x-1)/2).
/// Arguments within kEntropyClamp below 1 map to 0; smaller ones throw
/// NonPhysicalInput.
inline constexpr double kEntropyClamp = 1e-12;
double entropy_function(double x);

double mutual_information(const TwoModeCM& V);
double gaussian_discord(const TwoModeCM& V, Direction direction);
double log_negativity(const TwoModeCM& V);
double steering(const TwoModeCM& V, Direction direction);

/// Grid-then-golden-section search over theta in [0, theta_max] (units of
/// sqrt(hbar)).
struct BellSearch {
  double theta_max = 5.0;
  int grid_points = 2001;
  double tolerance = 1e-10;
};

struct BellResult {
  double value = 0.0;
  double theta_star = 0.0;
};

/// <B>(theta) for displacements xi_u = xi_v = 0, xi'_u = -xi'_v = (theta, 0).
double bell_expectation(const TwoModeCM& V, double theta);
BellResult bell_max(const TwoModeCM& V, const BellSearch& search = {});

struct CorrelationRecord {
  double t = 0.0;
  int u = 0;
  int v = 0;
  double E = 0.0;
  double S_fwd = 0.0;
  double S_rev = 0.0;
  double D_fwd = 0.0;
  double D_rev = 0.0;
  double M = 0.0;
  double B = 0.0;
  double theta_star = 0.0;
};

CorrelationRecord correlation_record(const TwoModeCM& V, int u, int v, double t,
                                     const BellSearch& search = {});
CorrelationRecord correlation_record(const CovarianceMatrix& V, int u, int v, double t,
                                     const BellSearch& search = {}, double hbar = 1.0);

}  // namespace qbus
