#include "qbus/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "qbus/error.hpp"

namespace qbus {

namespace {

void check_chi(double chi) {
  if (std::abs(chi - 1.0) < 1e-12) {
    throw Error(ErrorCode::DegenerateChi, "chi = 1: resonant mode decoupled from a and b");
  }
}

LocalInvariants assemble(double I_u, double I_v, double I_uv, double det) {
  LocalInvariants inv;
  inv.I_u = I_u;
  inv.I_v = I_v;
  inv.I_uv = I_uv;
  inv.det = det;
  inv.delta = I_u + I_v + 2.0 * I_uv;
  inv.delta_tilde = I_u + I_v - 2.0 * I_uv;
  return inv;
}

void require_physical(const CovarianceMatrix& V, const char* what) {
  if (!is_physical(V)) {
    throw Error(ErrorCode::NonPhysicalInput,
                std::string(what) + " violates the uncertainty relation");
  }
}

}  // namespace

EffectivePropagator effective_symplectic(const EffectiveParams& p, double t) {
  check_chi(p.chi);
  const double chi = p.chi;
  const double tau = p.epsilon * t / 4.0;
  const double r = p.omega / p.varsigma_m;
  const double sr = std::sqrt(r);
  const double A = p.O_ma;
  const double B = p.O_mb;
  const double den = (chi - 1.0) * chi;
  const double s1 = std::sin(tau);
  const double sx = std::sin(chi * tau);
  // Half-angle forms, so that E_0 is exactly the identity. They use
  // chi - 1 = r (A^2 + B^2).
  const double h1 = std::sin(0.5 * tau);
  const double half = std::sin(0.5 * chi * tau);
  const double h1_2 = h1 * h1, half_2 = half * half;

  EffectivePropagator out;
  out.t = t;
  out.tau = tau;
  out.chi = chi;

  Matrix4& C = out.C;
  C.setZero();
  C(0, 0) = 1.0 - 2.0 * r * (A * A * half_2 + chi * B * B * h1_2) / den;
  C(0, 1) = C(1, 0) = 2.0 * r * A * B * (chi * h1_2 - half_2) / den;
  C(0, 3) = C(3, 0) = 2.0 * sr * A / chi * half_2;
  C(1, 1) = 1.0 - 2.0 * r * (chi * A * A * h1_2 + B * B * half_2) / den;
  C(1, 3) = C(3, 1) = 2.0 * sr * B / chi * half_2;
  C(2, 2) = 1.0;
  C(3, 3) = 1.0 - 2.0 * (chi - 1.0) / chi * half_2;

  Matrix4& S = out.S;
  S.setZero();
  S(0, 0) = r * (A * A * sx + chi * B * B * s1) / den;
  S(0, 1) = S(1, 0) = r * A * B * (sx - chi * s1) / den;
  S(0, 3) = S(3, 0) = -sr * A / chi * sx;
  S(1, 1) = r * (A * A * chi * s1 + B * B * sx) / den;
  S(1, 3) = S(3, 1) = -sr * B / chi * sx;
  S(3, 3) = (chi - 1.0) / chi * sx;

  out.E.resize(8, 8);
  out.E << C, S, -S, C;
  return out;
}

AuxFunctions aux_functions(const EffectiveParams& p, double t) {
  check_chi(p.chi);
  const double chi = p.chi;
  const double tau = p.epsilon * t / 4.0;
  const double r = p.omega / p.varsigma_m;
  const double A2 = p.O_ma * p.O_ma;
  const double B2 = p.O_mb * p.O_mb;
  const double cm1 = chi - 1.0;

  AuxFunctions f;
  const double pref = r * r * A2 * B2 / (chi * cm1);
  f.F = pref * ((chi - std::cos(cm1 * tau)) / cm1 + (std::cos(chi * tau) - 1.0) / chi -
                std::cos(tau));
  f.G = r * r * A2 * A2 / (cm1 * cm1) +
        r * r * B2 * B2 * (chi * chi - 2.0 * chi + 2.0) / (chi * chi * cm1 * cm1);
  f.H = r * B2 / (chi * chi) + r * r * A2 * B2 * (chi * chi - chi + 1.0) / (chi * chi * cm1 * cm1);
  f.I = pref * (std::cos(cm1 * tau) / cm1 + (B2 / A2) * std::cos(chi * tau) / chi + std::cos(tau));
  return f;
}

CovarianceMatrix propagate_effective(const EffectiveParams& params, const BathSpec& bath,
                                     const CovarianceMatrix& V0, double t) {
  if (V0.n_modes() != 4) {
    throw Error(ErrorCode::DimensionMismatch, "effective model expects a 4-mode matrix");
  }
  const Matrix v0 = V0.with_ordering(Ordering::QQPP).data();
  require_physical(V0, "initial matrix");
  const EffectivePropagator prop = effective_symplectic(params, t);
  const double zt = bath.zeta * t;
  // (1 - e^{-zeta t}) / zeta, with its t (1 - zeta t / 2) expansion near zero.
  const double noise = zt < 1e-8 ? t * (1.0 - 0.5 * zt) : -std::expm1(-zt) / bath.zeta;
  Matrix V = std::exp(-zt) * (prop.E * v0 * prop.E.transpose());
  V += noise * params.diffusion;
  return CovarianceMatrix(std::move(V), Ordering::QQPP);
}

namespace {

double default_step(const FullModel& model, double span, const ExactOptions& options) {
  if (options.step > 0.0) return options.step;
  const double w_max = eigenfrequencies(model.chain).back();
  double h = 0.01 / w_max;
  if (span > 0.0) h = std::min(h, span / 1e5);
  return h;
}

class Rk4Lyapunov {
 public:
  Rk4Lyapunov(const FullModel& model, bool allow_lifted)
      : G_(model.gamma_sparse), Gd_(model.gamma), D_(model.diffusion),
        has_noise_(model.diffusion.any()) {
    const auto n = model.gamma.rows();
    lifted_ = allow_lifted && n <= kMaxLiftedDim;
    k1_.resize(n, n);
    k2_.resize(n, n);
    k3_.resize(n, n);
    k4_.resize(n, n);
    tmp_.resize(n, n);
    gv_.resize(n, n);
  }

  /// Advances V by `count` steps of size h.
  void advance(Matrix& V, double h, long count) {
    if (lifted_) {
      const MatrixL& M = lifted_map(h, count);
      const auto n = V.rows();
      VectorL x(M.rows());
      Eigen::Index k = 0;
      for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = j; i < n; ++i) x(k++) = V(i, j);
      }
      x(k) = 1.0L;
      const VectorL y = M * x;
      k = 0;
      for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = j; i < n; ++i) V(i, j) = V(j, i) = static_cast<double>(y(k++));
      }
      return;
    }
    for (long s = 0; s < count; ++s) {
      rhs(V, k1_);
      tmp_ = V + (0.5 * h) * k1_;
      rhs(tmp_, k2_);
      tmp_ = V + (0.5 * h) * k2_;
      rhs(tmp_, k3_);
      tmp_ = V + h * k3_;
      rhs(tmp_, k4_);
      V += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    }
  }

 private:
  using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using VectorL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

  // Largest system dimension for which the step map is formed explicitly.
  static constexpr Eigen::Index kMaxLiftedDim = 40;

  void rhs(const Matrix& V, Matrix& out) {
    gv_.noalias() = G_ * V;
    out = gv_ + gv_.transpose();
    if (has_noise_) out += D_;
  }

  // With x = (lower triangle of V, 1) the equation reads x' = A x, and one RK4
  // step is exactly the Taylor polynomial T(hA) = I + hA + ... + (hA)^4/24.
  // `count` steps are T(hA)^count by repeated squaring. The map is reused
  // thousands of times, so it is kept in extended precision to stop its
  // rounding from accumulating coherently.
  const MatrixL& lifted_map(double h, long count) {
    for (const auto& entry : maps_) {
      if (entry.count == count && std::abs(entry.h - h) <= 1e-12 * h) return entry.map;
    }
    const Eigen::Index n = Gd_.rows();
    const Eigen::Index half = n * (n + 1) / 2;
    const auto index = [n](Eigen::Index i, Eigen::Index j) {
      if (i < j) std::swap(i, j);
      return j * n - j * (j - 1) / 2 + (i - j);
    };
    MatrixL A = MatrixL::Zero(half + 1, half + 1);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = j; i < n; ++i) {
        const Eigen::Index row = index(i, j);
        for (Eigen::Index k = 0; k < n; ++k) {
          A(row, index(k, j)) += Gd_(i, k);
          A(row, index(i, k)) += Gd_(j, k);
        }
        A(row, half) = D_(i, j);
      }
    }
    A *= static_cast<long double>(h);
    MatrixL step = MatrixL::Identity(half + 1, half + 1);
    MatrixL term = step;
    for (int k = 1; k <= 4; ++k) {
      term = (term * A / static_cast<long double>(k)).eval();
      step += term;
    }
    MatrixL result = MatrixL::Identity(half + 1, half + 1);
    for (long e = count; e > 0; e >>= 1) {
      if (e & 1) result = (result * step).eval();
      if (e > 1) step = (step * step).eval();
    }
    if (maps_.size() >= 4) maps_.erase(maps_.begin());
    maps_.push_back({h, count, std::move(result)});
    return maps_.back().map;
  }

  struct CachedMap {
    double h;
    long count;
    MatrixL map;
  };

  const Eigen::SparseMatrix<double>& G_;
  const Matrix& Gd_;
  const Matrix& D_;
  bool has_noise_;
  bool lifted_ = false;
  std::vector<CachedMap> maps_;
  Matrix k1_, k2_, k3_, k4_, tmp_, gv_;
};

long steps_for(double span, double h) {
  return std::max(1L, static_cast<long>(std::ceil(span / h - 1e-9)));
}

void check_grid(const std::vector<double>& t_grid) {
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0) || (i > 0 && t_grid[i] < t_grid[i - 1])) {
      throw Error(ErrorCode::ConfigError, "time grid must be nondecreasing and start at t >= 0");
    }
  }
}

}  // namespace

double rk4_step(const FullModel& model, const CovarianceMatrix& V0, double span,
                const ExactOptions& options) {
  double h = default_step(model, span, options);
  const double probe = std::min(span, options.probe_span);
  if (probe <= 0.0) return h;
  const Matrix v0 = V0.with_ordering(Ordering::QQPP).data();
  Rk4Lyapunov rk(model, options.lifted);
  for (int halvings = 0; halvings < 30; ++halvings) {
    Matrix coarse = v0;
    Matrix fine = v0;
    const long n = steps_for(probe, h);
    rk.advance(coarse, probe / n, n);
    rk.advance(fine, probe / (2 * n), 2 * n);
    const double scale = std::max(1.0, fine.cwiseAbs().maxCoeff());
    if ((coarse - fine).cwiseAbs().maxCoeff() < options.convergence_tolerance * scale) return h;
    h *= 0.5;
  }
  throw Error(ErrorCode::StepSizeUnderflow, "RK4 step did not converge after 30 halvings");
}

std::vector<CovarianceMatrix> propagate_exact(const FullModel& model, const CovarianceMatrix& V0,
                                              const std::vector<double>& t_grid,
                                              const ExactOptions& options) {
  if (V0.dim() != model.gamma.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "initial matrix has dimension " + std::to_string(V0.dim()) + ", model needs " +
                    std::to_string(model.gamma.rows()));
  }
  require_physical(V0, "initial matrix");
  check_grid(t_grid);

  std::vector<CovarianceMatrix> out;
  out.reserve(t_grid.size());
  if (t_grid.empty()) return out;

  Matrix V = V0.with_ordering(Ordering::QQPP).data();
  double t = 0.0;
  const double span = t_grid.back();

  const auto emit = [&](double when) {
    CovarianceMatrix cm(V, Ordering::QQPP);
    if (!is_physical(cm, 1.0, options.physical_tolerance)) {
      throw Error(ErrorCode::IntegrationFailure,
                  "uncertainty relation violated at t = " + std::to_string(when));
    }
    out.push_back(std::move(cm));
  };

  if (options.method == ExactMethod::RK4) {
    const double h = rk4_step(model, V0, span, options);
    Rk4Lyapunov rk(model, options.lifted);
    for (double target : t_grid) {
      if (target > t) {
        const long n = steps_for(target - t, h);
        rk.advance(V, (target - t) / n, n);
        V = 0.5 * (V + V.transpose()).eval();
        t = target;
      }
      emit(t);
    }
    return out;
  }

  const auto n = model.gamma.rows();
  std::map<double, std::pair<Matrix, Matrix>> maps;
  const auto discrete_map = [&](double dt) -> const std::pair<Matrix, Matrix>& {
    // Grid spacings that differ only by rounding share one map.
    auto it = maps.lower_bound(dt * (1.0 - 1e-12));
    if (it != maps.end() && it->first <= dt * (1.0 + 1e-12)) return it->second;
    Matrix M = Matrix::Zero(2 * n, 2 * n);
    M.topLeftCorner(n, n) = -model.gamma * dt;
    M.topRightCorner(n, n) = model.diffusion * dt;
    M.bottomRightCorner(n, n) = model.gamma.transpose() * dt;
    const Matrix expM = M.exp();
    Matrix phi = expM.bottomRightCorner(n, n).transpose();
    Matrix noise = phi * expM.topRightCorner(n, n);
    noise = 0.5 * (noise + noise.transpose()).eval();
    return maps.emplace(dt, std::make_pair(std::move(phi), std::move(noise))).first->second;
  };
  for (double target : t_grid) {
    if (target > t) {
      const auto& [phi, noise] = discrete_map(target - t);
      V = phi * V * phi.transpose() + noise;
      V = 0.5 * (V + V.transpose()).eval();
      t = target;
    }
    emit(t);
  }
  return out;
}

CovarianceMatrix to_rotating_frame(const CovarianceMatrix& V, double varsigma, double t) {
  const int n = V.n_modes();
  const double c = std::cos(varsigma * t);
  const double s = std::sin(varsigma * t);
  // Heisenberg solution q(t) = q c + p s, p(t) = p c - q s, inverted.
  Matrix R = Matrix::Identity(2 * n, 2 * n);
  for (int k : {kModeA, kModeB, kModeC}) {
    R(k, k) = c;
    R(k, n + k) = -s;
    R(n + k, k) = s;
    R(n + k, n + k) = c;
  }
  const Matrix v = V.with_ordering(Ordering::QQPP).data();
  return CovarianceMatrix(R * v * R.transpose(), Ordering::QQPP);
}

LocalInvariants pair_invariants_ac(const EffectiveParams& params, double r, double n_c, double t) {
  const double F = aux_functions(params, t).F;
  const double ch = std::cosh(r);
  const double sh = std::sinh(r);
  const double det_root = 2.0 * n_c + 1.0 - (n_c + 1.0) * (ch - 1.0) * (2.0 * F - 1.0);
  const double a_root = 1.0 + 2.0 * (n_c + 1.0) * (ch - 1.0) * F;
  const double c_root = n_c + (n_c + 1.0) * ch;
  return assemble(a_root * a_root, c_root * c_root, -2.0 * (n_c + 1.0) * (n_c + 1.0) * F * sh * sh,
                  det_root * det_root);
}

LocalInvariants pair_invariants_bc(const EffectiveParams& params, double r, double n_c, double t) {
  const AuxFunctions f = aux_functions(params, t);
  const double ch = std::cosh(r);
  const double sh = std::sinh(r);
  const double c_root = n_c + (n_c + 1.0) * ch;
  const double det_root =
      (2.0 * n_c + 1.0) * f.G + 2.0 * c_root * f.H - 2.0 * (n_c + 1.0) * (ch - 1.0) * f.I;
  const double b_root =
      (n_c - (n_c + 1.0) * ch) * f.G - 2.0 * f.H - 2.0 * (n_c + 1.0) * (ch - 1.0) * f.I;
  return assemble(b_root * b_root, c_root * c_root, -(n_c + 1.0) * (n_c + 1.0) * (f.G + 2.0 * f.I) * sh * sh,
                  det_root * det_root);
}

}  // namespace qbus
