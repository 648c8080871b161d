#pragma once

// The homomorphism X -> P(X) from the depth-d cylinder algebra onto the
// propositional algebra generated by a commuting family, materialised through
// its atoms P(I_sigma), together with integrals of simple functions against it
// and the Cantor spectral operator.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "qprob/linalg_core.hpp"
#include "qprob/sequence_space.hpp"

namespace qprob {

inline constexpr int kMaxMapDepth = 12;
/// Upper bound on stored scalars across the whole atom table.
inline constexpr std::size_t kMaxMapEntries = std::size_t{1} << 24;

class ProjectionValuedMap {
 public:
  const PropositionFamily& family() const noexcept { return family_; }
  int depth() const noexcept { return depth_; }
  Index dim() const noexcept { return family_.dim(); }
  std::size_t atom_count() const noexcept { return atoms_.size(); }
  const Projection& atom(WordCode code) const { return atoms_.at(code); }
  const Projection& atom(const BinaryWord& word) const;
  const std::vector<Projection>& atoms() const noexcept { return atoms_; }

 private:
  friend ProjectionValuedMap build_pvm(const PropositionFamily& family, int depth);

  PropositionFamily family_;
  int depth_ = 0;
  std::vector<Projection> atoms_;
};

/// atom[sigma] = prod_m Q_m with Q_m = P_m if sigma(m) = 1 and 1 - P_m
/// otherwise. Verifies that the atoms are projections resolving the identity
/// and that they reassemble every generator.
ProjectionValuedMap build_pvm(const PropositionFamily& family, int depth);

/// Storage the atom table of `family` at `depth` would need, in scalars.
std::size_t pvm_storage_entries(const PropositionFamily& family, int depth);

/// P(X) as the sum of the atoms of X. Shallower sets are refined first.
Projection apply(const ProjectionValuedMap& map, const CylinderUnion& x);

/// sum_sigma G(sigma) P(I_sigma) for a simple function given by its value on
/// each depth-d atom (indexed by word code).
Matrix integrate(const ProjectionValuedMap& map, std::span<const double> values);
Matrix integrate(const ProjectionValuedMap& map, const std::function<double(const BinaryWord&)>& g);

/// (sum_sigma G(sigma) P(I_sigma)) psi without forming the operator.
Vector integrate_apply(const ProjectionValuedMap& map, std::span<const double> values, const Vector& psi);

/// A = sum_sigma x_sigma P(I_sigma) where x_sigma is the Cantor point of sigma.
Matrix cantor_operator(const ProjectionValuedMap& map);

/// F_X(A): spectral projector of a Hermitian `a` onto the eigenvalues whose
/// Cantor cell at `depth` lies in X.
Matrix indicator_calculus(const Matrix& a, const CylinderUnion& x);

/// Spectral projectors of `a` grouped by Cantor cell, one per depth-d word.
std::vector<Matrix> cantor_spectral_atoms(const Matrix& a, int depth);

/// Atoms annihilated by the map: ||P(I_sigma)||_F <= kZeroTol.
CylinderUnion kernel(const ProjectionValuedMap& map);
bool in_kernel(const ProjectionValuedMap& map, const CylinderUnion& x);

}  // namespace qprob
