#pragma once

// Finite-dimensional von Neumann algebra computations: generated
// *-algebras, commutants, centres and fixed-point spaces of channels.

#include <vector>

#include "fcs/matcore.hpp"

namespace fcs {

/// Smallest unital *-closed subalgebra of M_n containing gens.
OperatorSubspace generated_algebra(Index n, const std::vector<CMatrix>& gens);

/// {x : [x, b] = 0 for all b in space}. Requires space to be *-closed.
OperatorSubspace commutant(const OperatorSubspace& space, double tol = kDefaultTol);

struct CenterReport {
  OperatorSubspace center;
  bool is_factor = false;
};

CenterReport center_and_factor(const OperatorSubspace& algebra, double tol = kDefaultTol);

/// Fixed points of x -> sum_k K x K^* (or x -> sum_k K^* x K when adjoint).
/// The family must be unital for the chosen direction.
OperatorSubspace channel_fixed_points(const std::vector<CMatrix>& kraus, bool adjoint = false,
                                      double tol = kDefaultTol);

/// || sum_k K K^* - I || (or sum_k K^* K when adjoint).
double unitality_residual(const std::vector<CMatrix>& kraus, bool adjoint = false);

/// Subspace of the given algebra fixed by a channel that leaves it
/// invariant; the channel is restricted to the algebra before solving.
OperatorSubspace fixed_points_within(const OperatorSubspace& algebra, const CMatrix& channel_superop,
                                     double kernel_tol = kKernelTol);

}  // namespace fcs
