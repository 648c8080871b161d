#pragma once

// Measures induced by states on the depth-d cylinder algebra, q-homogeneity,
// cyclic subspaces, absolute continuity and the Radon-Nikodym construction
// of a state realising a given measure.

#include <optional>
#include <utility>
#include <vector>

#include "qprob/linalg_core.hpp"
#include "qprob/pvm.hpp"
#include "qprob/sequence_space.hpp"

namespace qprob {

inline constexpr double kUnitMeasureTol = 1e-10;

/// Finitely additive measure on the depth-d algebra, stored by atom.
class MeasureTable {
 public:
  MeasureTable() = default;
  /// weights[code] for every depth-d word; entries must be finite and >= 0.
  MeasureTable(int depth, std::vector<double> weights);

  int depth() const noexcept { return depth_; }
  const std::vector<double>& weights() const& noexcept { return weights_; }
  std::vector<double> weights() && noexcept { return std::move(weights_); }
  double weight(WordCode code) const { return weights_.at(code); }
  double weight(const BinaryWord& word) const;
  double total() const noexcept { return total_; }
  bool is_unit() const noexcept;

  /// Sum of atom weights of x (refined to this depth when shallower).
  double mass(const CylinderUnion& x) const;
  /// Mass of the cylinder I_prefix for a prefix of length <= depth.
  double prefix_mass(const BinaryWord& prefix) const;
  /// Prefix masses for every prefix length 0..depth; level[m][code].
  std::vector<std::vector<double>> prefix_tree() const;

  MeasureTable normalized() const;
  MeasureTable scaled(double factor) const;

 private:
  int depth_ = 0;
  std::vector<double> weights_;
  double total_ = 0.0;
};

/// Largest atomwise |a - b|; depths must agree.
double max_atom_deviation(const MeasureTable& a, const MeasureTable& b);

/// mu_psi(I_sigma) = ||P(I_sigma) psi||^2.
MeasureTable induced_measure(const ProjectionValuedMap& map, const StateVector& psi);

/// Product measure with mu_q(I_sigma) = prod q_{sigma(i)}, q_1 = q, q_0 = 1 - q.
MeasureTable homogeneous_measure(double q, int depth);

struct HomogeneityReport {
  bool homogeneous = false;
  double max_violation = 0.0;   // over all prefixes shorter than the depth
  BinaryWord worst_prefix;
  double max_atom_deviation = 0.0;  // |mu_psi - mu_q| over atoms
};

/// Checks ||P(I_{sigma 1}) psi||^2 = q ||P(I_sigma) psi||^2 for every prefix
/// sigma shorter than the map depth. psi must be a unit vector.
HomogeneityReport is_q_homogeneous(const ProjectionValuedMap& map, const StateVector& psi, double q,
                                   double tol = 1e-9);

class CyclicSubspace {
 public:
  const std::vector<Vector>& basis() const noexcept { return basis_; }
  const StateVector& source() const noexcept { return source_; }
  std::size_t dimension() const noexcept { return basis_.size(); }
  /// Norm of the component of v orthogonal to the subspace.
  double residual(const Vector& v) const;
  Vector project(const Vector& v) const;

 private:
  friend CyclicSubspace cyclic_subspace(const ProjectionValuedMap& map, const StateVector& psi);

  std::vector<Vector> basis_;
  StateVector source_;
};

/// Orthonormalisation of { P(I_sigma) psi } with vanishing images dropped.
CyclicSubspace cyclic_subspace(const ProjectionValuedMap& map, const StateVector& psi);

/// Every mu-null atom is nu-null (both judged against kZeroTol).
bool is_absolutely_continuous(const MeasureTable& nu, const MeasureTable& mu);

/// psi' = { integral sqrt(F) dP } psi where F = d nu / d(mu_psi / ||psi||^2).
/// Throws NotUnitMeasure, NotAbsolutelyContinuous, DepthError, ZeroVector.
StateVector radon_nikodym_vector(const ProjectionValuedMap& map, const StateVector& psi, const MeasureTable& nu);

/// The density F itself, zero on null atoms.
std::vector<double> radon_nikodym_density(const MeasureTable& nu, const MeasureTable& mu_normalized);

struct ContinuityReport {
  bool absolutely_continuous = false;
  double max_violation = 0.0;        // largest mu_psi' weight on a mu_psi-null atom
  double subspace_residual = 0.0;    // distance of psi' from [psi]
  bool in_cyclic_subspace = false;
};

/// Forward direction: null atoms of mu_psi must be null for mu_psi'.
ContinuityReport absolute_continuity_forward_check(const ProjectionValuedMap& map, const StateVector& psi,
                                                   const StateVector& psi_prime);
/// Same check for psi' = P(X) psi.
ContinuityReport absolute_continuity_forward_check(const ProjectionValuedMap& map, const StateVector& psi,
                                                   const CylinderUnion& x);

}  // namespace qprob
