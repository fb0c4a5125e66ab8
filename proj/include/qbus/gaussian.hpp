#pragma once

#include <Eigen/Dense>

namespace qbus {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Matrix2 = Eigen::Matrix2d;
using Matrix4 = Eigen::Matrix4d;
using Vector4 = Eigen::Vector4d;

/// Values in [-kClampTolerance, 0] are treated as zero in radicands and logs.
inline constexpr double kClampTolerance = 1e-10;
/// Tolerance on the smallest eigenvalue of V + i(hbar/2)J.
inline constexpr double kPhysicalTolerance = 1e-10;

/// Phase-space ordering of a covariance matrix.
///   QQPP: (q_1..q_n, p_1..p_n), the layout used for whole-system matrices.
///   QPQP: (q_1, p_1, q_2, p_2, ...), the layout of two-mode blocks.
enum class Ordering { QQPP, QPQP };

Matrix symplectic_form(int n_modes, Ordering ordering);

/// Permutes rows and columns of V from one ordering to the other.
Matrix reorder(const Matrix& V, Ordering from, Ordering to);

/// Second-moment matrix of a zero-mean n-mode Gaussian state, in physical
/// units (vacuum = hbar/2 * identity).
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(Matrix data, Ordering ordering = Ordering::QQPP);

  int n_modes() const noexcept { return n_modes_; }
  int dim() const noexcept { return 2 * n_modes_; }
  const Matrix& data() const noexcept { return data_; }
  Ordering ordering() const noexcept { return ordering_; }

  int q_index(int mode) const;
  int p_index(int mode) const;

  CovarianceMatrix with_ordering(Ordering ordering) const;

 private:
  Matrix data_;
  Ordering ordering_;
  int n_modes_;
};

/// Smallest eigenvalue of the Hermitian matrix V + i(hbar/2)J.
double uncertainty_margin(const Matrix& V, Ordering ordering, double hbar = 1.0);
bool is_physical(const CovarianceMatrix& V, double hbar = 1.0,
                 double tolerance = kPhysicalTolerance);

/// Dimensionless two-mode matrix in QPQP order (q_u, p_u, q_v, p_v) whose
/// physical counterpart is (hbar/2) times it. Vacuum is the identity.
class TwoModeCM {
 public:
  explicit TwoModeCM(const Matrix4& data);

  const Matrix4& data() const noexcept { return data_; }
  Matrix2 block_u() const { return data_.topLeftCorner<2, 2>(); }
  Matrix2 block_v() const { return data_.bottomRightCorner<2, 2>(); }
  Matrix2 block_uv() const { return data_.topRightCorner<2, 2>(); }

  /// The same state with the roles of u and v exchanged.
  TwoModeCM swapped() const;
  /// T V T with T = diag(1, 1, 1, -1).
  TwoModeCM partial_transpose() const;
  /// Smallest eigenvalue of V + iJ_4.
  double uncertainty_margin() const;

 private:
  Matrix4 data_;
};

struct LocalInvariants {
  double I_u = 0.0;
  double I_v = 0.0;
  double I_uv = 0.0;
  double det = 0.0;
  double delta = 0.0;        // I_u + I_v + 2 I_uv
  double delta_tilde = 0.0;  // I_u + I_v - 2 I_uv
};

struct SymplecticSpectrum {
  double plus = 0.0;
  double minus = 0.0;
};

/// Reduced state of modes (u, v), rescaled by 2/hbar and reordered to QPQP.
/// Throws IndexOutOfRange or NonPhysicalInput.
TwoModeCM extract_two_mode(const CovarianceMatrix& V, int u, int v, double hbar = 1.0);

LocalInvariants local_invariants(const TwoModeCM& V);

/// sigma^{+-}; with `transposed` the partially transposed spectrum is returned
/// (Delta replaced by Delta-tilde). Throws NegativeDiscriminant.
SymplecticSpectrum symplectic_eigenvalues(const TwoModeCM& V, bool transposed = false);

/// Two-mode Wigner function at phase-space point xi = (q_u, p_u, q_v, p_v).
/// Throws SingularCM when det V <= 1e-14.
double wigner(const TwoModeCM& V, const Vector4& xi, double hbar = 1.0);

}  // namespace qbus
