#pragma once

// Modular data of (M, phi) on the GNS space and the dual Popescu elements
// v~_k = J sigma_{i/2}(v_k^*) J, which lie in the commutant of M.

#include <vector>

#include "fcs/popescu.hpp"

namespace fcs {

struct ModularResiduals {
  double delta_positivity = 0;  // -min eigenvalue of Delta, clipped at 0
  double tomita = 0;            // max_x || J Delta^{1/2} x Omega - x^* Omega ||
  double j_squared = 0;         // || J^2 - I ||
  double j_delta_j = 0;         // || J Delta J - Delta^{-1} ||
  double delta_omega = 0;       // || Delta Omega - Omega ||
  double j_omega = 0;           // || J Omega - Omega ||

  double max() const;
};

struct ModularData {
  CanonicalSystem can;
  CMatrix delta;
  AntilinearOp s;  // x Omega -> x^* Omega
  AntilinearOp j;
  std::vector<CMatrix> dual_v;
  ModularResiduals residuals;

  Index gns_dim() const { return can.gns_dim(); }
  const std::vector<CMatrix>& pi_v() const { return can.base.v(); }
  const CVector& omega() const { return can.omega; }
};

/// Builds S, Delta = S^* S, J = S Delta^{-1/2} and the dual elements.
/// Throws ConsistencyError if a modular identity fails beyond tol.
ModularData modular_data(const CanonicalSystem& can, double tol = kDefaultTol);

/// sigma_z(x) = Delta^{iz} x Delta^{-iz} for x in pi(M).
CMatrix sigma(const ModularData& md, const CMatrix& x, cplx z, double tol = kDefaultTol);

struct DualDiagnostics {
  double sum = 0;        // || sum_k v~_k v~_k^* - I ||
  double commutant = 0;  // max_{k,b} || [v~_k, b] || over a basis of pi(M)
  double vacuum = 0;     // max_{|I|<=3} || v~_I^* Omega - pi(v_{rev I})^* Omega ||
  double duality = 0;    // max_{|I|,|J|<=4} | phi(v_I v_J^*) - <Omega, v~_{rev I} v~_{rev J}^* Omega> |

  double max() const;
  bool ok(double tol) const { return max() <= tol; }
};

/// Evaluates the dual-element identities for an arbitrary candidate family.
/// Moments on the left-hand side of the duality check are taken on the
/// source system, independently of the GNS construction.
DualDiagnostics dual_diagnostics(const ModularData& md, const std::vector<CMatrix>& dual_v, int vacuum_len = 3,
                                 int moment_len = 4);

struct DualSystem {
  std::vector<CMatrix> dual_v;
  DualDiagnostics diagnostics;
};

/// The dual elements of md with all diagnostics; throws ConsistencyError
/// naming the failing identity if any residual exceeds tol.
DualSystem dual_popescu(const ModularData& md, double tol = kDefaultTol);

struct DualChannel {
  CMatrix superop;  // y -> sum_k v~_k y v~_k^*
  double unital = 0;
  double kms = 0;   // max | <y Omega, tau(x) Omega> - <tau~(y) Omega, x Omega> |
};

DualChannel dual_channel(const ModularData& md, double tol = kDefaultTol);

/// Flips the sign of the largest-modulus entry of v~_k (negative control).
std::vector<CMatrix> corrupt_dual(const std::vector<CMatrix>& dual_v, Index k = 0);

}  // namespace fcs
