#include "qbus/gaussian.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/Eigenvalues>

#include "qbus/error.hpp"

namespace qbus {

namespace {

// Position in `ordering` of the k-th canonical coordinate of mode `mode`
// (k = 0 for q, 1 for p).
int coordinate_index(int n_modes, Ordering ordering, int mode, int k) {
  return ordering == Ordering::QQPP ? k * n_modes + mode : 2 * mode + k;
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

Matrix symplectic_form(int n_modes, Ordering ordering) {
  Matrix J = Matrix::Zero(2 * n_modes, 2 * n_modes);
  for (int mode = 0; mode < n_modes; ++mode) {
    const int q = coordinate_index(n_modes, ordering, mode, 0);
    const int p = coordinate_index(n_modes, ordering, mode, 1);
    J(q, p) = 1.0;
    J(p, q) = -1.0;
  }
  return J;
}

Matrix reorder(const Matrix& V, Ordering from, Ordering to) {
  if (from == to) return V;
  const int n = static_cast<int>(V.rows()) / 2;
  Eigen::VectorXi src(2 * n);
  for (int mode = 0; mode < n; ++mode) {
    for (int k = 0; k < 2; ++k) {
      src(coordinate_index(n, to, mode, k)) = coordinate_index(n, from, mode, k);
    }
  }
  Matrix out(V.rows(), V.cols());
  for (int i = 0; i < 2 * n; ++i) {
    for (int j = 0; j < 2 * n; ++j) out(i, j) = V(src(i), src(j));
  }
  return out;
}

CovarianceMatrix::CovarianceMatrix(Matrix data, Ordering ordering)
    : data_(std::move(data)), ordering_(ordering), n_modes_(0) {
  if (data_.rows() != data_.cols() || data_.rows() == 0 || data_.rows() % 2 != 0) {
    throw Error(ErrorCode::DimensionMismatch,
                "covariance matrix must be square with even positive dimension, got " +
                    std::to_string(data_.rows()) + "x" + std::to_string(data_.cols()));
  }
  const double scale = max_abs(data_);
  if (max_abs(data_ - data_.transpose()) > 1e-12 * scale) {
    throw Error(ErrorCode::NonPhysicalInput, "covariance matrix is not symmetric");
  }
  data_ = 0.5 * (data_ + data_.transpose()).eval();
  n_modes_ = static_cast<int>(data_.rows()) / 2;
}

int CovarianceMatrix::q_index(int mode) const {
  if (mode < 0 || mode >= n_modes_) {
    throw Error(ErrorCode::IndexOutOfRange, "mode " + std::to_string(mode));
  }
  return coordinate_index(n_modes_, ordering_, mode, 0);
}

int CovarianceMatrix::p_index(int mode) const {
  if (mode < 0 || mode >= n_modes_) {
    throw Error(ErrorCode::IndexOutOfRange, "mode " + std::to_string(mode));
  }
  return coordinate_index(n_modes_, ordering_, mode, 1);
}

CovarianceMatrix CovarianceMatrix::with_ordering(Ordering ordering) const {
  return CovarianceMatrix(reorder(data_, ordering_, ordering), ordering);
}

double uncertainty_margin(const Matrix& V, Ordering ordering, double hbar) {
  const int n = static_cast<int>(V.rows()) / 2;
  const Eigen::MatrixXcd M =
      V.cast<std::complex<double>>() +
      std::complex<double>(0.0, 0.5 * hbar) * symplectic_form(n, ordering).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(M, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool is_physical(const CovarianceMatrix& V, double hbar, double tolerance) {
  return uncertainty_margin(V.data(), V.ordering(), hbar) >= -tolerance;
}

TwoModeCM::TwoModeCM(const Matrix4& data) : data_(data) {
  if ((data_ - data_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * data_.cwiseAbs().maxCoeff()) {
    throw Error(ErrorCode::NonPhysicalInput, "two-mode matrix is not symmetric");
  }
  data_ = 0.5 * (data_ + data_.transpose()).eval();
}

TwoModeCM TwoModeCM::swapped() const {
  Matrix4 out;
  out << data_.bottomRightCorner<2, 2>(), data_.bottomLeftCorner<2, 2>(),
      data_.topRightCorner<2, 2>(), data_.topLeftCorner<2, 2>();
  return TwoModeCM(out);
}

TwoModeCM TwoModeCM::partial_transpose() const {
  const Eigen::DiagonalMatrix<double, 4> T(1.0, 1.0, 1.0, -1.0);
  return TwoModeCM(T * data_ * T);
}

double TwoModeCM::uncertainty_margin() const {
  // V is dimensionless here, so the commutator term is iJ rather than i(hbar/2)J.
  return qbus::uncertainty_margin(Matrix(data_), Ordering::QPQP, 2.0);
}

TwoModeCM extract_two_mode(const CovarianceMatrix& V, int u, int v, double hbar) {
  if (u == v) throw Error(ErrorCode::IndexOutOfRange, "pair needs two distinct modes");
  const int idx[4] = {V.q_index(u), V.p_index(u), V.q_index(v), V.p_index(v)};
  Matrix4 out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out(i, j) = (2.0 / hbar) * V.data()(idx[i], idx[j]);
  }
  TwoModeCM result(out);
  if (result.uncertainty_margin() < -kPhysicalTolerance) {
    throw Error(ErrorCode::NonPhysicalInput,
                "reduced state of modes " + std::to_string(u) + "," + std::to_string(v) +
                    " violates the uncertainty relation");
  }
  return result;
}

LocalInvariants local_invariants(const TwoModeCM& V) {
  LocalInvariants inv;
  inv.I_u = V.block_u().determinant();
  inv.I_v = V.block_v().determinant();
  inv.I_uv = V.block_uv().determinant();
  // Partial-pivot LU; the cofactor formula loses ~eps I_u I_v on squeezed states.
  inv.det = Eigen::PartialPivLU<Matrix4>(V.data()).determinant();
  inv.delta = inv.I_u + inv.I_v + 2.0 * inv.I_uv;
  inv.delta_tilde = inv.I_u + inv.I_v - 2.0 * inv.I_uv;
  return inv;
}

SymplecticSpectrum symplectic_eigenvalues(const TwoModeCM& V, bool transposed) {
  const LocalInvariants inv = local_invariants(V);
  const double delta = transposed ? inv.delta_tilde : inv.delta;
  double disc = delta * delta - 4.0 * inv.det;
  // Rounding in delta^2 - 4 det grows with delta^2 (hot states), so the clamp
  // window is scaled by it.
  const double window = kClampTolerance * std::max(1.0, delta * delta);
  if (disc < -window) {
    throw Error(ErrorCode::NegativeDiscriminant,
                "Delta^2 - 4 det V = " + std::to_string(disc) + " < 0");
  }
  disc = std::max(disc, 0.0);
  SymplecticSpectrum s;
  // Near a degenerate pair (pure and nearly pure states) the square root
  // magnifies rounding in disc to ~1e-8; the Hermitian form L^T iJ L, with
  // V = L L^T, has the same spectrum and stays accurate there.
  if (disc < 1e-6 * delta * delta) {
    const Matrix4 W = transposed ? V.partial_transpose().data() : V.data();
    const Eigen::LLT<Matrix4> llt(W);
    if (llt.info() == Eigen::Success) {
      const Matrix4 L = llt.matrixL();
      const Eigen::Matrix4cd iJ = std::complex<double>(0.0, 1.0) *
                                  symplectic_form(2, Ordering::QPQP).cast<std::complex<double>>();
      const Eigen::Matrix4cd H = L.transpose().cast<std::complex<double>>() * iJ *
                                 L.cast<std::complex<double>>();
      const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(H, Eigen::EigenvaluesOnly);
      // Ascending: -sigma+, -sigma-, sigma-, sigma+.
      s.plus = 0.5 * (es.eigenvalues()(3) - es.eigenvalues()(0));
      s.minus = 0.5 * (es.eigenvalues()(2) - es.eigenvalues()(1));
      return s;
    }
  }
  const double root = std::sqrt(disc);
  s.plus = std::sqrt(0.5 * delta + 0.5 * root);
  // sigma+ sigma- = sqrt(det) avoids the cancellation in delta/2 - root/2.
  s.minus = inv.det > 0.0 ? std::sqrt(inv.det) / s.plus
                          : std::sqrt(std::max(0.5 * delta - 0.5 * root, 0.0));
  return s;
}

double wigner(const TwoModeCM& V, const Vector4& xi, double hbar) {
  const double det = Eigen::PartialPivLU<Matrix4>(V.data()).determinant();
  if (det <= 1e-14) throw Error(ErrorCode::SingularCM, "det V = " + std::to_string(det));
  const double quad = xi.dot(V.data().inverse() * xi);
  const double norm = std::numbers::pi * std::numbers::pi * hbar * hbar * std::sqrt(det);
  return std::exp(-quad / hbar) / norm;
}

}  // namespace qbus
