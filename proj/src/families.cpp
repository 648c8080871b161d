#include "qprob/families.hpp"

#include <cmath>
#include <sstream>

#include "qprob/error.hpp"

namespace qprob {

namespace {

void check_length(int n, const char* what) {
  if (n < 1) fail(ErrorKind::DomainError, std::string(what) + " must be at least 1");
  if (n > kMaxChainLength) {
    fail(ErrorKind::SizeGuard, std::string(what) + " = " + std::to_string(n) + " exceeds limit " +
                                   std::to_string(kMaxChainLength));
  }
}

// Diagonal projections selecting basis indices whose bit (from the top) n is set.
std::vector<Projection> digit_projections(int n_bits) {
  const Index dim = Index{1} << n_bits;
  std::vector<Projection> members;
  members.reserve(static_cast<std::size_t>(n_bits));
  for (int n = 0; n < n_bits; ++n) {
    Eigen::VectorXd d(dim);
    for (Index j = 0; j < dim; ++j) d(j) = static_cast<double>((j >> (n_bits - 1 - n)) & 1);
    members.push_back(Projection::from_diagonal(std::move(d)));
  }
  return members;
}

}  // namespace

FamilyWithState qubit_chain(int n, double q) {
  check_length(n, "chain length");
  if (!(q > 0.0 && q < 1.0)) fail(ErrorKind::DomainError, "q must lie strictly between 0 and 1");
  const Index dim = Index{1} << n;
  const double a0 = std::sqrt(1.0 - q);
  const double a1 = std::sqrt(q);
  Vector psi(dim);
  for (Index j = 0; j < dim; ++j) {
    double amp = 1.0;
    for (int m = 0; m < n; ++m) amp *= ((j >> (n - 1 - m)) & 1) ? a1 : a0;
    psi(j) = amp;
  }
  return {PropositionFamily(digit_projections(n)), StateVector(std::move(psi))};
}

FamilyWithState box_digits(int d) {
  check_length(d, "digit count");
  const Index cells = Index{1} << d;
  Vector psi = Vector::Constant(cells, Complex(1.0 / std::sqrt(static_cast<double>(cells)), 0.0));
  return {PropositionFamily(digit_projections(d)), StateVector(std::move(psi))};
}

std::vector<double> branch_weights(const StateVector& theta, std::span<const Projection> outcomes) {
  std::vector<double> w;
  w.reserve(outcomes.size());
  for (const auto& p : outcomes) w.push_back(p.apply(theta.amplitudes()).squaredNorm());
  return w;
}

StateVector measurement_entangle(const StateVector& theta, std::span<const Projection> outcomes, Index pointer_dim) {
  const Index dim = theta.dim();
  if (outcomes.empty()) fail(ErrorKind::NotDecomposition, "no outcomes given");
  if (pointer_dim < static_cast<Index>(outcomes.size())) {
    fail(ErrorKind::DimMismatch, "pointer dimension " + std::to_string(pointer_dim) + " is smaller than " +
                                     std::to_string(outcomes.size()) + " outcomes");
  }
  Matrix total = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].dim() != dim) fail(ErrorKind::DimMismatch, "outcome projection has the wrong dimension");
    total += outcomes[i].matrix();
    for (std::size_t j = i + 1; j < outcomes.size(); ++j) {
      if (!orthogonal(outcomes[i], outcomes[j])) {
        fail(ErrorKind::NotDecomposition, "outcomes " + std::to_string(i) + " and " + std::to_string(j) +
                                              " are not orthogonal");
      }
    }
  }
  const double residual = (total - Matrix::Identity(dim, dim)).norm();
  if (residual > 1e-9 * std::max(1.0, std::sqrt(static_cast<double>(dim)))) {
    std::ostringstream os;
    os << "outcomes sum to the identity only within " << residual;
    fail(ErrorKind::NotDecomposition, os.str());
  }

  Vector out = Vector::Zero(dim * pointer_dim);
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    Vector pointer = Vector::Zero(pointer_dim);
    pointer(static_cast<Index>(i)) = 1.0;
    out += kron(outcomes[i].apply(theta.amplitudes()), pointer);
  }
  return StateVector(std::move(out));
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Projection lift(const Projection& p, Index left_dim, Index right_dim) {
  if (p.is_diagonal()) {
    Eigen::VectorXd d(left_dim * p.dim() * right_dim);
    for (Index l = 0; l < left_dim; ++l) {
      for (Index k = 0; k < p.dim(); ++k) d.segment((l * p.dim() + k) * right_dim, right_dim).setConstant(p.diagonal()(k));
    }
    return Projection::from_diagonal(std::move(d));
  }
  return make_projection(kron(kron(Matrix::Identity(left_dim, left_dim), p.matrix()), Matrix::Identity(right_dim, right_dim)));
}

}  // namespace qprob
