#pragma once

// The purity decision battery: factoriality, ergodicity, the support
// identity Fix(tau) = pi(M)', the dual certificate Fix(tau~) = pi(M), a
// spectral mixing proxy and the consolidated report.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fcs/modular.hpp"
#include "fcs/state.hpp"

namespace fcs {

/// All n^2 eigenvalues of the transfer channel, by decreasing modulus
/// (ties: decreasing real part, then decreasing imaginary part).
std::vector<cplx> channel_spectrum(const PopescuSystem& sys);

struct ErgodicityReport {
  bool ergodic = false;
  Index fixed_dim = 0;   // dimension of {x in pi(M) : tau(x) = x}
  Index center_dim = 0;
  bool is_factor = false;
};

/// Simple eigenvalue 1 of tau restricted to pi(M), cross-checked against the
/// centre; disagreement raises ConsistencyError.
ErgodicityReport ergodicity(const CanonicalSystem& can, double tol = kDefaultTol);

struct MixingProxy {
  bool strongly_mixing = false;
  double gap = 0;  // 1 - |lambda_2|
};

MixingProxy kolmogorov_proxy(const PopescuSystem& sys, double tol = kDefaultTol);

struct BatteryOptions {
  double tol = kDefaultTol;
  double subspace_tol = kSubspaceTol;
  int cutoff = 4;
  std::optional<DensityState> rho;  // analyse this invariant state instead of the Cesaro average
};

struct SubspaceDims {
  Index input_n = 0;
  Index support_n = 0;
  Index gns = 0;
  Index algebra = 0;
  Index commutant = 0;
  Index center = 0;
  Index fix_tau = 0;
  Index fix_dual = 0;
};

struct PurityReport {
  bool validated = false;
  Index invariant_multiplicity = 0;
  Index extremal_count = 0;
  bool is_factor = false;
  bool is_ergodic = false;
  bool support_identity_ok = false;
  std::optional<bool> dual_identity_ok;  // empty when the state is not extremal
  bool is_pure = false;
  std::string purity_reason;
  std::vector<cplx> channel_spectrum;
  std::optional<double> mixing_gap;
  std::optional<bool> strongly_mixing;
  GaugeGroup gauge_h;
  SubspaceDims dims;
  std::map<std::string, double> residuals;

  /// Checks the logical relations between the verdict fields; returns an
  /// empty string when consistent, else a description of the violation.
  std::string consistency_violation() const;
};

/// Everything the battery computed, for callers that continue with the
/// intermediate objects (amalgam, correlations).
struct BatteryResult {
  PurityReport report;
  PopescuSystem analyzed;  // the system on the support of the analysed state
  DensityState state;
  CanonicalSystem can;
  ModularData modular;
  InvariantStates invariant;
};

BatteryResult run_battery(const PopescuSystem& sys, const BatteryOptions& opts = {});

PurityReport purity_battery(const PopescuSystem& sys, const BatteryOptions& opts = {});

}  // namespace fcs
