#pragma once

// Concrete commuting families with homogeneous states: a chain of independent
// binary measurements, the binary digits of a particle's position in a box,
// and the measurement interaction that entangles a system with pointer
// states.

#include <span>
#include <vector>

#include "qprob/linalg_core.hpp"

namespace qprob {

inline constexpr int kMaxChainLength = 12;

struct FamilyWithState {
  PropositionFamily family;
  StateVector state;
};

/// N binary outcomes on (C^2)^{(x)N}; factor 0 is the most significant bit of
/// the basis index. P_n = |1><1| on factor n, and every factor of the state
/// is sqrt(1-q)|0> + sqrt(q)|1>.
FamilyWithState qubit_chain(int n, double q);

/// 2^d equal cells of [0,1); P_n selects the cells whose n-th binary digit
/// (after the point) is 1, and the state is uniform over cells.
FamilyWithState box_digits(int d);

/// sum_i (P_i theta) (x) e_i for an orthogonal decomposition {P_i} of the
/// identity and orthonormal pointer states e_0 .. e_{k-1} in C^pointer_dim.
/// The result lives on theta-space (x) pointer-space.
StateVector measurement_entangle(const StateVector& theta, std::span<const Projection> outcomes, Index pointer_dim);

/// ||P_i theta||^2 for each outcome.
std::vector<double> branch_weights(const StateVector& theta, std::span<const Projection> outcomes);

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);
/// 1_left (x) P (x) 1_right.
Projection lift(const Projection& p, Index left_dim, Index right_dim);

}  // namespace qprob
