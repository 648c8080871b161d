#include "qprob/linalg_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qprob/error.hpp"

namespace qprob {

namespace {

std::string sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

void require_same_dim(const Projection& p, const Projection& q) {
  if (p.dim() != q.dim()) {
    fail(ErrorKind::DimMismatch, "projections of dimension " + std::to_string(p.dim()) + " and " +
                                     std::to_string(q.dim()));
  }
}

void require_commuting(const Projection& p, const Projection& q) {
  require_same_dim(p, q);
  const double r = commutator_norm(p, q);
  if (r > kCommTol) fail(ErrorKind::NotCommuting, "commutator norm " + sci(r));
}

bool exactly_diagonal(const Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != Complex(0.0, 0.0)) return false;
    }
    if (m(j, j).imag() != 0.0) return false;
  }
  return true;
}

}  // namespace

StateVector::StateVector(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() < 1) fail(ErrorKind::DimMismatch, "state vector must have positive dimension");
  if (!amplitudes_.allFinite()) fail(ErrorKind::DomainError, "state vector has non-finite entries");
}

void require_nonzero(const StateVector& psi) {
  if (psi.is_zero()) fail(ErrorKind::ZeroVector, "state vector norm " + sci(psi.norm()) + " is not above zero_tol");
}

Projection::Projection(Index dim, Eigen::VectorXd diagonal) : dim_(dim), diagonal_(std::move(diagonal)) {}

Projection::Projection(Index dim, Matrix dense) : dim_(dim), dense_(std::move(dense)) {}

Projection Projection::identity(Index dim) { return Projection(dim, Eigen::VectorXd(Eigen::VectorXd::Ones(dim))); }

Projection Projection::zero(Index dim) { return Projection(dim, Eigen::VectorXd(Eigen::VectorXd::Zero(dim))); }

Projection Projection::from_diagonal(Eigen::VectorXd diagonal) {
  if (!diagonal.allFinite()) fail(ErrorKind::DomainError, "non-finite diagonal entry");
  const Eigen::VectorXd sq = diagonal.array().square();
  const double residual = (sq - diagonal).norm();
  if (residual > kIdemTol * std::max(1.0, diagonal.norm())) {
    fail(ErrorKind::NotIdempotent, "diagonal idempotency residual " + sci(residual));
  }
  const Index dim = diagonal.size();
  return Projection(dim, std::move(diagonal));
}

Matrix Projection::matrix() const {
  if (diagonal_) return diagonal_->cast<Complex>().asDiagonal();
  return dense_;
}

Vector Projection::apply(const Vector& v) const {
  if (v.size() != dim_) fail(ErrorKind::DimMismatch, "vector dimension does not match projection");
  if (diagonal_) return diagonal_->cast<Complex>().cwiseProduct(v);
  return dense_ * v;
}

double Projection::frobenius_norm() const { return diagonal_ ? diagonal_->norm() : dense_.norm(); }

double Projection::trace() const { return diagonal_ ? diagonal_->sum() : dense_.trace().real(); }

Index Projection::rank() const {
  if (diagonal_) return static_cast<Index>((diagonal_->array() > 0.5).count());
  if (dim_ == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(dense_, Eigen::EigenvaluesOnly);
  return static_cast<Index>((solver.eigenvalues().array() > 0.5).count());
}

double hermiticity_residual(const Matrix& m) { return (m - m.adjoint()).norm(); }

double idempotency_residual(const Matrix& m) { return (m * m - m).norm(); }

Projection make_projection(const Matrix& m) {
  if (m.rows() != m.cols()) {
    fail(ErrorKind::DimMismatch, "projection must be square, got " + std::to_string(m.rows()) + "x" +
                                     std::to_string(m.cols()));
  }
  if (!m.allFinite()) fail(ErrorKind::DomainError, "matrix has non-finite entries");
  const double fro = m.norm();
  const double herm = hermiticity_residual(m);
  if (herm > kHermTol * std::max(1.0, fro)) fail(ErrorKind::NotHermitian, "hermiticity residual " + sci(herm));
  const double idem = idempotency_residual(m);
  if (idem > kIdemTol * std::max(1.0, fro)) fail(ErrorKind::NotIdempotent, "idempotency residual " + sci(idem));
  if (exactly_diagonal(m)) return Projection(m.rows(), Eigen::VectorXd(m.diagonal().real()));
  return Projection(m.rows(), m);
}

Projection product_unchecked(const Projection& p, const Projection& q) {
  require_same_dim(p, q);
  if (p.is_diagonal() && q.is_diagonal()) {
    return Projection(p.dim(), Eigen::VectorXd(p.diagonal().cwiseProduct(q.diagonal())));
  }
  if (p.is_diagonal()) return Projection(p.dim(), Matrix(p.diagonal().cast<Complex>().asDiagonal() * q.dense_));
  if (q.is_diagonal()) return Projection(p.dim(), Matrix(p.dense_ * q.diagonal().cast<Complex>().asDiagonal()));
  return Projection(p.dim(), Matrix(p.dense_ * q.dense_));
}

Projection combine_unchecked(const Projection& p, const Projection& q, double a, double b, double c) {
  require_same_dim(p, q);
  if (p.is_diagonal() && q.is_diagonal()) {
    const auto& x = p.diagonal();
    const auto& y = q.diagonal();
    return Projection(p.dim(), Eigen::VectorXd(a * x + b * y + c * x.cwiseProduct(y)));
  }
  const Matrix pm = p.matrix();
  const Matrix qm = q.matrix();
  return Projection(p.dim(), Matrix(a * pm + b * qm + c * (pm * qm)));
}

double commutator_norm(const Projection& p, const Projection& q) {
  require_same_dim(p, q);
  if (p.is_diagonal() && q.is_diagonal()) return 0.0;
  const Matrix pm = p.matrix();
  const Matrix qm = q.matrix();
  return (pm * qm - qm * pm).norm();
}

bool commutes(const Projection& p, const Projection& q) { return commutator_norm(p, q) <= kCommTol; }

Projection meet(const Projection& p, const Projection& q) {
  require_commuting(p, q);
  return make_projection(product_unchecked(p, q).matrix());
}

Projection join(const Projection& p, const Projection& q) {
  require_commuting(p, q);
  return make_projection(combine_unchecked(p, q, 1.0, 1.0, -1.0).matrix());
}

Projection complement(const Projection& p) {
  if (p.is_diagonal()) return Projection::from_diagonal(Eigen::VectorXd::Ones(p.dim()) - p.diagonal());
  return make_projection(Matrix::Identity(p.dim(), p.dim()) - p.matrix());
}

double distance(const Projection& p, const Projection& q) {
  require_same_dim(p, q);
  if (p.is_diagonal() && q.is_diagonal()) return (p.diagonal() - q.diagonal()).norm();
  return (p.matrix() - q.matrix()).norm();
}

bool approx_equal(const Projection& p, const Projection& q, double tol) { return distance(p, q) <= tol; }

bool leq(const Projection& p, const Projection& q, double tol) {
  return distance(product_unchecked(p, q), p) <= tol;
}

bool orthogonal(const Projection& p, const Projection& q, double tol) {
  return product_unchecked(p, q).frobenius_norm() <= tol;
}

PerpendicularDecomposition perpendicular_decomposition(const Projection& p, const Projection& q) {
  require_commuting(p, q);
  auto shared = make_projection(product_unchecked(p, q).matrix());
  auto only_p = make_projection(combine_unchecked(p, q, 1.0, 0.0, -1.0).matrix());
  auto only_q = make_projection(combine_unchecked(p, q, 0.0, 1.0, -1.0).matrix());
  return {std::move(shared), std::move(only_p), std::move(only_q)};
}

PropositionFamily::PropositionFamily(std::vector<Projection> members) : members_(std::move(members)) {
  if (members_.empty()) fail(ErrorKind::DomainError, "a proposition family needs at least one member");
  dim_ = members_.front().dim();
  for (std::size_t m = 0; m < members_.size(); ++m) {
    if (members_[m].dim() != dim_) fail(ErrorKind::DimMismatch, "family member " + std::to_string(m) + " has wrong dim");
    for (std::size_t n = m + 1; n < members_.size(); ++n) {
      const double r = commutator_norm(members_[m], members_[n]);
      if (r > kCommTol) {
        fail(ErrorKind::NotCommuting,
             "members " + std::to_string(m) + " and " + std::to_string(n) + " have commutator norm " + sci(r));
      }
    }
  }
}

bool PropositionFamily::all_diagonal() const noexcept {
  return std::all_of(members_.begin(), members_.end(), [](const Projection& p) { return p.is_diagonal(); });
}

JointEigenbasis simultaneous_eigenbasis(const PropositionFamily& family) {
  const Index dim = family.dim();
  const std::size_t n_members = family.size();

  if (family.all_diagonal()) {
    JointEigenbasis out{Matrix::Identity(dim, dim), {}};
    out.labels.reserve(static_cast<std::size_t>(dim));
    for (Index j = 0; j < dim; ++j) {
      std::vector<std::uint8_t> bits(n_members);
      for (std::size_t n = 0; n < n_members; ++n) bits[n] = family[n].diagonal()(j) > 0.5 ? 1 : 0;
      out.labels.emplace_back(std::move(bits));
    }
    return out;
  }

  struct Block {
    Matrix basis;
    std::vector<std::uint8_t> bits;
  };
  std::vector<Block> blocks{{Matrix::Identity(dim, dim), {}}};
  for (std::size_t n = 0; n < n_members; ++n) {
    const Matrix pm = family[n].matrix();
    std::vector<Block> next;
    for (auto& block : blocks) {
      const Matrix reduced = block.basis.adjoint() * pm * block.basis;
      Eigen::SelfAdjointEigenSolver<Matrix> solver(Matrix(0.5 * (reduced + reduced.adjoint())));
      const auto& values = solver.eigenvalues();
      const Matrix rotated = block.basis * solver.eigenvectors();
      std::vector<Index> low;
      std::vector<Index> high;
      for (Index k = 0; k < values.size(); ++k) (values(k) > 0.5 ? high : low).push_back(k);
      for (int bit = 0; bit < 2; ++bit) {
        const auto& cols = bit == 0 ? low : high;
        if (cols.empty()) continue;
        Block child{Matrix(dim, static_cast<Index>(cols.size())), block.bits};
        for (std::size_t k = 0; k < cols.size(); ++k) child.basis.col(static_cast<Index>(k)) = rotated.col(cols[k]);
        child.bits.push_back(static_cast<std::uint8_t>(bit));
        next.push_back(std::move(child));
      }
    }
    blocks = std::move(next);
  }

  JointEigenbasis out{Matrix(dim, dim), {}};
  Index col = 0;
  for (const auto& block : blocks) {
    for (Index k = 0; k < block.basis.cols(); ++k) {
      out.unitary.col(col++) = block.basis.col(k);
      out.labels.emplace_back(block.bits);
    }
  }

  for (std::size_t n = 0; n < n_members; ++n) {
    const Matrix conj = out.unitary.adjoint() * family[n].matrix() * out.unitary;
    Eigen::VectorXd expected(dim);
    for (Index j = 0; j < dim; ++j) expected(j) = out.labels[static_cast<std::size_t>(j)][n];
    const double residual = (conj - Matrix(expected.cast<Complex>().asDiagonal())).norm();
    if (residual > kDiagTol * std::max(1.0, family[n].frobenius_norm())) {
      fail(ErrorKind::NotCommuting, "joint diagonalisation residual " + sci(residual) + " for member " +
                                        std::to_string(n));
    }
  }
  return out;
}

}  // namespace qprob
