#pragma once

// Finite-dimensional complex inner-product spaces, orthogonal projections
// ("propositions"), and the boolean operations on commuting propositions.

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qprob/sequence_space.hpp"

namespace qprob {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

// Relative Frobenius tolerances for the projection invariants.
inline constexpr double kHermTol = 1e-9;
inline constexpr double kIdemTol = 1e-9;
inline constexpr double kCommTol = 1e-9;
inline constexpr double kDiagTol = 1e-9;
// Absolute threshold below which a norm or an atom weight counts as zero.
inline constexpr double kZeroTol = 1e-12;

class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(Vector amplitudes);

  Index dim() const noexcept { return amplitudes_.size(); }
  const Vector& amplitudes() const noexcept { return amplitudes_; }
  double norm() const { return amplitudes_.norm(); }
  double squared_norm() const { return amplitudes_.squaredNorm(); }
  bool is_zero() const { return norm() <= kZeroTol; }

 private:
  Vector amplitudes_;
};

/// Throws ZeroVector unless the state has norm above kZeroTol.
void require_nonzero(const StateVector& psi);

/// Hermitian idempotent operator. Projections that are exactly diagonal in
/// the working basis keep only their diagonal; everything else is a dense
/// matrix. Both forms obey the same invariants and produce the same results.
class Projection {
 public:
  static Projection identity(Index dim);
  static Projection zero(Index dim);
  /// Validating constructor for a 0/1-valued diagonal.
  static Projection from_diagonal(Eigen::VectorXd diagonal);

  Index dim() const noexcept { return dim_; }
  bool is_diagonal() const noexcept { return diagonal_.has_value(); }
  /// Only meaningful when is_diagonal().
  const Eigen::VectorXd& diagonal() const { return *diagonal_; }

  Matrix matrix() const;
  Vector apply(const Vector& v) const;
  double frobenius_norm() const;
  double trace() const;
  /// Number of eigenvalues above 1/2.
  Index rank() const;

 private:
  friend Projection make_projection(const Matrix& m);
  friend Projection product_unchecked(const Projection& p, const Projection& q);
  friend Projection combine_unchecked(const Projection& p, const Projection& q, double a, double b, double c);

  Projection(Index dim, Eigen::VectorXd diagonal);
  Projection(Index dim, Matrix dense);

  Index dim_ = 0;
  std::optional<Eigen::VectorXd> diagonal_;
  Matrix dense_;
};

/// Validating constructor. Throws NotHermitian / NotIdempotent with the
/// measured residual in the message, DimMismatch for non-square input.
Projection make_projection(const Matrix& m);

/// Raw product P Q with no validation. Correct only when P and Q commute.
Projection product_unchecked(const Projection& p, const Projection& q);
/// Raw a P + b Q + c P Q with no validation.
Projection combine_unchecked(const Projection& p, const Projection& q, double a, double b, double c);

double hermiticity_residual(const Matrix& m);
double idempotency_residual(const Matrix& m);

double commutator_norm(const Projection& p, const Projection& q);
bool commutes(const Projection& p, const Projection& q);

Projection meet(const Projection& p, const Projection& q);
Projection join(const Projection& p, const Projection& q);
Projection complement(const Projection& p);

/// Frobenius distance between two projections.
double distance(const Projection& p, const Projection& q);
bool approx_equal(const Projection& p, const Projection& q, double tol = 1e-9);

/// P <= Q in the propositional order, i.e. P Q = P.
bool leq(const Projection& p, const Projection& q, double tol = 1e-9);
/// P Q = 0.
bool orthogonal(const Projection& p, const Projection& q, double tol = 1e-9);

struct PerpendicularDecomposition {
  Projection shared;  // P Q
  Projection only_p;  // P - P Q
  Projection only_q;  // Q - P Q
};

PerpendicularDecomposition perpendicular_decomposition(const Projection& p, const Projection& q);

/// Ordered family of pairwise commuting propositions on one space.
class PropositionFamily {
 public:
  PropositionFamily() = default;
  /// Validates dimensions and pairwise commutation.
  explicit PropositionFamily(std::vector<Projection> members);

  Index dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return members_.size(); }
  const Projection& operator[](std::size_t n) const { return members_[n]; }
  const std::vector<Projection>& members() const noexcept { return members_; }
  bool all_diagonal() const noexcept;

 private:
  Index dim_ = 0;
  std::vector<Projection> members_;
};

struct JointEigenbasis {
  Matrix unitary;                   // columns are common eigenvectors
  std::vector<BinaryWord> labels;   // labels[j][n] = eigenvalue of P_n on column j
};

/// Common eigenbasis of a commuting family, found by splitting the space
/// into the 0/1 eigenspaces of each member in turn.
JointEigenbasis simultaneous_eigenbasis(const PropositionFamily& family);

}  // namespace qprob
