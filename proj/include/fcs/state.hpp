#pragma once

// The translation-invariant chain state determined by a Popescu system and
// an invariant density: local expectations via nested E-maps, two-point
// functions, cluster decay and a cutoff-bounded gauge-group estimate.

#include <string>
#include <vector>

#include "fcs/popescu.hpp"

namespace fcs {

/// A_1 (x) ... (x) A_m on consecutive sites, each A_i a d x d matrix.
struct LocalObservable {
  std::vector<CMatrix> site_ops;
};

/// Superoperator of E_A(B) = sum_{ij} A_ij v_i B v_j^*.
CMatrix e_map(const PopescuSystem& sys, const CMatrix& a);

CMatrix apply_e_map(const PopescuSystem& sys, const CMatrix& a, const CMatrix& b);

/// omega(A_1 (x) ... (x) A_m) = phi(E_{A_1} o ... o E_{A_m}(I)).
cplx local_expectation(const PopescuSystem& sys, const DensityState& rho, const LocalObservable& obs,
                       double tol = kDefaultTol);

/// omega(A (x) I^{(x) gap} (x) B).
cplx two_point(const PopescuSystem& sys, const DensityState& rho, const CMatrix& a, const CMatrix& b, int gap,
               double tol = kDefaultTol);

/// Matrix unit e^i_j in M_d.
CMatrix matrix_unit(Index d, Index i, Index j);

struct ClusterDecay {
  std::vector<double> c;  // c[g] = max over matrix-unit pairs of the connected correlator at gap g
  double lambda2 = 0;     // second-largest eigenvalue modulus of the transfer channel
  double envelope = 0;    // smallest C with c[g] <= C |lambda2|^g for g >= 1
};

ClusterDecay cluster_decay(const PopescuSystem& sys, const DensityState& rho, int max_gap, double tol = kDefaultTol);

struct GaugeGroup {
  bool full_circle = false;     // no nonzero length difference found up to the cutoff
  long order = 1;               // cyclic group order otherwise
  std::vector<int> differences; // sorted set D of |I| - |J| with nonzero moment
  int cutoff = 0;

  std::string describe() const;
};

/// Cutoff-bounded estimate of {z : psi o beta_z = psi} from word moments.
GaugeGroup gauge_group(const PopescuSystem& sys, const DensityState& rho, int length_cutoff = 4,
                       double tol = kDefaultTol);

}  // namespace fcs
