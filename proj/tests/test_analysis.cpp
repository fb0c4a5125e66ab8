#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qbus/analysis.hpp"
#include "qbus/correlations.hpp"
#include "qbus/error.hpp"
#include "qbus/initial_states.hpp"
#include "qbus/propagation.hpp"
#include "support.hpp"

using namespace qbus;

namespace {

ChainSpec sites(int alpha, int beta) {
  ChainSpec spec;
  spec.alpha = alpha;
  spec.beta = beta;
  return spec;
}

/// Interior extrema of f on a uniform grid, as grid times.
std::vector<double> dense_extrema(const std::function<double(double)>& f, double t_max, int n) {
  std::vector<double> out;
  const double h = t_max / n;
  double a = f(0), b = f(h);
  for (int i = 2; i <= n; ++i) {
    const double c = f(i * h);
    if ((b - a) * (c - b) < 0) out.push_back((i - 1) * h);
    a = b;
    b = c;
  }
  return out;
}

double nearest(const std::vector<double>& xs, double x) {
  double best = 1e300;
  for (double y : xs) best = std::min(best, std::abs(x - y));
  return best;
}

double effective_E_ac(const EffectiveParams& p, double r, double n, double omega_t) {
  const CovarianceMatrix V = propagate_effective(p, {}, tmtss_cm(r, n), omega_t / p.omega);
  return log_negativity(extract_two_mode(V, kModeA, kModeC));
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("zero is always a critical time") {
    for (auto spec : {sites(1, 10), sites(3, 7), sites(2, 5)}) {
      const EffectiveParams p = build_effective_params(spec, {});
      CHECK(solve_cpt(p, 0, 3000).tau.front() == 0.0);
      CHECK(solve_cpt2(p, 0, 3000).tau.front() == 0.0);
    }
  }

  TEST_CASE("transfer time of the reference chain") {
    for (auto spec : {sites(1, 10), sites(10, 1)}) {
      const EffectiveParams p = build_effective_params(spec, {});
      const CriticalTimes roots = solve_cpt(p, 0, 4200);
      CHECK(nearest(roots.omega_t, 2094.4) < 0.5);
      CHECK(transfer_time(p, 0, 4200) == doctest::Approx(2094.4).epsilon(0.5 / 2094.4));
    }
    // The two layouts share every root.
    const auto a = solve_cpt(build_effective_params(sites(1, 10), {}), 0, 4200).omega_t;
    const auto b = solve_cpt(build_effective_params(sites(10, 1), {}), 0, 4200).omega_t;
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]));
  }

  TEST_CASE("roots satisfy their equations") {
    for (auto spec : {sites(1, 10), sites(2, 9), sites(4, 6)}) {
      const EffectiveParams p = build_effective_params(spec, {});
      const CriticalTimes one = solve_cpt(p, 0, 20000);
      for (double tau : one.tau) CHECK(std::abs(cpt_residual(p, tau)) <= 1e-10);
      const CriticalTimes two = solve_cpt2(p, 0, 20000);
      for (double tau : two.tau) CHECK(std::abs(cpt2_residual(p, tau)) <= 1e-10);
      CHECK(one.chi == p.chi);
      CHECK(one.tau_max == doctest::Approx(p.epsilon * 20000 / 4));
    }
  }

  TEST_CASE("symmetric sites reduce the second equation") {
    const EffectiveParams p = build_effective_params(sites(1, 10), {});
    REQUIRE(std::abs(p.O_ma * p.O_ma - p.O_mb * p.O_mb) < 1e-15);
    for (double tau : {0.3, 1.7, 12.0}) {
      CHECK(cpt2_residual(p, tau) ==
            doctest::Approx(std::sin(p.chi * tau) + std::sin(tau) + std::sin((p.chi - 1) * tau)));
    }
  }

  TEST_CASE("roots coincide with the extrema of F and I") {
    for (auto spec : {sites(1, 10), sites(2, 7)}) {
      const EffectiveParams p = build_effective_params(spec, {});
      const double t_max = 9000;
      const int n = 200000;
      const double resolution = 2 * t_max / n;
      const auto F = [&](double t) { return aux_functions(p, t).F; };
      const auto I = [&](double t) { return aux_functions(p, t).I; };
      const auto roots_F = solve_cpt(p, 0, t_max).omega_t;
      const auto roots_I = solve_cpt2(p, 0, t_max).omega_t;
      const auto ext_F = dense_extrema(F, t_max, n);
      const auto ext_I = dense_extrema(I, t_max, n);
      for (double t : ext_F) CHECK(nearest(roots_F, t) <= resolution);
      // A root without a nearby extremum must be a stationary inflection,
      // i.e. a multiple root of the residual.
      const auto multiple = [](const auto& residual, double tau) {
        const double h = 1e-6;
        return std::abs(residual(tau + h) - residual(tau - h)) / (2 * h) < 1e-4;
      };
      const double to_tau = p.epsilon / (4 * p.omega);
      for (double t : roots_F) {
        if (t <= resolution || t >= t_max - resolution || nearest(ext_F, t) <= resolution) continue;
        CHECK(multiple([&](double tau) { return cpt_residual(p, tau); }, t * to_tau));
      }
      for (double t : ext_I) CHECK(nearest(roots_I, t) <= resolution);
      for (double t : roots_I) {
        if (t <= resolution || t >= t_max - resolution || nearest(ext_I, t) <= resolution) continue;
        CHECK(multiple([&](double tau) { return cpt2_residual(p, tau); }, t * to_tau));
      }
    }
  }

  TEST_CASE("critical times do not depend on the initial state") {
    const EffectiveParams p = build_effective_params({}, {});
    const auto a = solve_cpt(p, 0, 4200);
    const auto b = solve_cpt(p, 0, 4200);
    CHECK(a.tau == b.tau);
    // Extrema of E_ac and S<-_ac sit on the critical times whatever (r, n_c).
    const auto roots = a.omega_t;
    for (double r : {0.5, 1.0, 2.0}) {
      for (double n : {0.0, 10.0}) {
        double peak = 0;
        for (double t = 0; t <= 4200; t += 10) peak = std::max(peak, effective_E_ac(p, r, n, t));
        const double bound = 1e-4 * peak / 4200.0;
        const double h = 0.01;
        for (double t : roots) {
          if (t < 1.0 || t > 4199.0) continue;
          const double slope_E =
              (effective_E_ac(p, r, n, t + h) - effective_E_ac(p, r, n, t - h)) / (2 * h);
          CHECK(std::abs(slope_E) <= bound);
          const auto S_rev = [&](double s) {
            const CovarianceMatrix V = propagate_effective(p, {}, tmtss_cm(r, n), s);
            return steering(extract_two_mode(V, kModeA, kModeC), Direction::Reverse);
          };
          CHECK(std::abs((S_rev(t + h) - S_rev(t - h)) / (2 * h)) <= bound);
        }
      }
    }
  }

  TEST_CASE("entanglement at the critical time") {
    const EffectiveParams p = build_effective_params(sites(1, 10), {});
    const double t_star = transfer_time(p, 0, 4200);
    for (double r : {0.3, 1.0, 2.0, 5.0}) {
      for (double n : {0.0, 10.0, 50.0}) {
        const CriticalEntanglement e = entanglement_at_critical(p, r, n, t_star);
        CHECK_FALSE(e.zero_squeezing);
        CHECK(std::abs(e.value - effective_E_ac(p, r, n, t_star)) < 1e-8);
        const double initial = initial_correlations({InitialStateSpec::Kind::PureEnv, r, n}).E;
        CHECK(e.value == doctest::Approx(initial).epsilon(0.01));
      }
    }
    const CriticalEntanglement none = entanglement_at_critical(p, 0.0, 3.0, t_star);
    CHECK(none.zero_squeezing);
    CHECK(none.value == 0.0);
  }

  TEST_CASE("direct steering window of the reference run") {
    const EffectiveParams p = build_effective_params(sites(10, 1), {});
    const auto ac = direct_steering_window(p, 1.0, 0.0, 0, 4200);
    REQUIRE(ac.size() == 1);
    CHECK(std::abs(ac[0].t_on - 1143.1) <= 0.5);
    CHECK(std::abs(ac[0].t_off - 3045.8) <= 0.5);
    const auto bc = bc_steering_window(p, 1.0, 0.0, 0, 4200);
    REQUIRE(bc.size() == 1);
    CHECK(std::abs(bc[0].t_on - 951.3) <= 0.5);
    CHECK(std::abs(bc[0].t_off - 3237.5) <= 0.5);
    // Both steerings vanish in the gaps between the windows.
    CHECK(bc[0].t_on < ac[0].t_on);
    CHECK(ac[0].t_off < bc[0].t_off);
    const double gap = 0.5 * (bc[0].t_on + ac[0].t_on);
    const CovarianceMatrix V = propagate_effective(p, {}, tmtss_cm(1.0, 0.0), gap);
    CHECK(steering(extract_two_mode(V, kModeA, kModeC), Direction::Forward) == 0.0);
    CHECK(steering(extract_two_mode(V, kModeB, kModeC), Direction::Forward) == 0.0);
  }

  TEST_CASE("window edges agree with the propagated steering") {
    const EffectiveParams p = build_effective_params({}, {});
    for (double r : {0.8, 1.5}) {
      for (const Interval& w : direct_steering_window(p, r, 0.5, 0, 4200)) {
        for (double t : {w.t_on, w.t_off}) {
          if (t < 1.0 || t > 4199.0) continue;
          const auto S = [&](double s) {
            return steering(
                extract_two_mode(propagate_effective(p, {}, tmtss_cm(r, 0.5), s), kModeA, kModeC),
                Direction::Forward);
          };
          CHECK(S(t - 1.0) * S(t + 1.0) == 0.0);
          CHECK(S(t - 1.0) + S(t + 1.0) > 0.0);
        }
      }
    }
  }

  TEST_CASE("no direct steering when c is too hot") {
    const EffectiveParams p = build_effective_params({}, {});
    double F_max = 0;
    for (double t = 0; t <= 4200; t += 1) F_max = std::max(F_max, aux_functions(p, t).F);
    const double r = 1.0;
    // Threshold 1/4 + n / (2 (n + 1)(cosh r - 1)) exceeds F_max for this n.
    const double x = 2 * (std::cosh(r) - 1) * (F_max - 0.25);
    const double n = x < 1 ? 1.1 * x / (1 - x) : 1e6;
    REQUIRE(direct_steering_threshold(r, n) > F_max);
    CHECK(direct_steering_window(p, r, n, 0, 4200).empty());
    CHECK(direct_steering_threshold(40.0, 3.0) == doctest::Approx(0.25));
  }

  TEST_CASE("bc window matches the initial steering") {
    const EffectiveParams p = build_effective_params({}, {});
    for (double n : {0.0, 10.0}) {
      const auto windows = bc_steering_window(p, 1.0, n, 0, 4200);
      const bool null_at_zero = !windows.empty() && windows.front().t_on == 0.0;
      const double S0 = initial_correlations({InitialStateSpec::Kind::PureEnv, 1.0, n}).S_fwd;
      CHECK(null_at_zero == (S0 == 0.0));
    }
  }

  TEST_CASE("thresholds") {
    CHECK(threshold(ThresholdKind::DirectSteering, 0.0) == 0.0);
    CHECK(threshold(ThresholdKind::Separability, 0.0) == 0.0);
    CHECK(threshold(ThresholdKind::Steerability, 0.0) == 0.0);
    const double r_c = threshold(ThresholdKind::DirectSteering, 10.0);
    CHECK(r_c == doctest::Approx(std::acosh(31.0 / 11.0)));
    // Sign change of S->(0) on an r grid brackets r_c.
    double last_zero = 0, first_positive = 10;
    for (double r = 0.001; r < 3; r += 0.001) {
      const double S = initial_correlations({InitialStateSpec::Kind::PureEnv, r, 10.0}).S_fwd;
      if (S == 0) last_zero = r;
      else first_positive = std::min(first_positive, r);
    }
    CHECK(last_zero <= r_c);
    CHECK(first_positive >= r_c);
    CHECK(first_positive - last_zero < 0.0011);
    CHECK(threshold(ThresholdKind::Separability, 10.0) == doctest::Approx(std::log(21.0)));
    CHECK(threshold(ThresholdKind::Steerability, 10.0) == doctest::Approx(std::acosh(21.0)));
    CHECK_THROWS_AS(threshold(ThresholdKind::Separability, -1.0), Error);
  }

  TEST_CASE("empty windows") {
    const EffectiveParams p = build_effective_params({}, {});
    CHECK_THROWS_AS(solve_cpt(p, 10, 10), Error);
    try {
      solve_cpt2(p, 10, 5);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptyWindow);
    }
    ChainSpec spec;
    spec.epsilon = 0.0;
    CHECK_THROWS_AS(solve_cpt(build_effective_params(spec, {}), 0, 10), Error);
  }
}
