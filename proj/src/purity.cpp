#include "fcs/purity.hpp"

#include <algorithm>
#include <cmath>

#include "fcs/algebra.hpp"

namespace fcs {

std::vector<cplx> channel_spectrum(const PopescuSystem& sys) {
  Eigen::ComplexEigenSolver<CMatrix> es(sys.transfer(), false);
  std::vector<cplx> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::stable_sort(out.begin(), out.end(), [](cplx a, cplx b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (std::abs(ma - mb) > 1e-12) return ma > mb;
    if (std::abs(a.real() - b.real()) > 1e-12) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return out;
}

ErgodicityReport ergodicity(const CanonicalSystem& can, double tol) {
  ErgodicityReport r;
  r.fixed_dim = fixed_points_within(can.algebra, can.base.transfer()).dim();
  const CenterReport cr = center_and_factor(can.algebra, tol);
  r.center_dim = cr.center.dim();
  r.is_factor = cr.is_factor;
  r.ergodic = r.fixed_dim == 1;
  if (r.ergodic != r.is_factor || r.fixed_dim != r.center_dim)
    throw ConsistencyError("ergodicity: fixed points in pi(M) (dim " + std::to_string(r.fixed_dim) +
                           ") disagree with the centre (dim " + std::to_string(r.center_dim) + ")");
  return r;
}

MixingProxy kolmogorov_proxy(const PopescuSystem& sys, double tol) {
  const auto spec = channel_spectrum(sys);
  MixingProxy p;
  const double second = spec.size() > 1 ? std::abs(spec[1]) : 0.0;
  p.gap = 1.0 - second;
  const bool simple_one = std::abs(spec.front() - cplx(1)) <= std::sqrt(tol);
  p.strongly_mixing = simple_one && second < 1.0 - tol;
  return p;
}

std::string PurityReport::consistency_violation() const {
  if (is_pure && !is_factor) return "is_pure without is_factor";
  if (is_ergodic != is_factor) return "is_ergodic differs from is_factor";
  const bool expected = dual_identity_ok.value_or(false) && is_ergodic;
  if (is_pure != expected) return "is_pure differs from dual_identity_ok and is_ergodic";
  if (is_ergodic && !dual_identity_ok.has_value()) return "ergodic report without a dual certificate";
  if (!support_identity_ok) return "support identity failed";
  return {};
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConsistencyError("purity_battery: " + what);
}

}  // namespace

BatteryResult run_battery(const PopescuSystem& sys, const BatteryOptions& opts) {
  const double tol = opts.tol;
  BatteryResult res;
  PurityReport& rep = res.report;
  auto& resid = rep.residuals;

  const ValidationReport val = validate(sys, tol);
  resid["validate.unitality"] = val.residual;
  if (!val.ok) throw ValidationError("system is not unital: ||sum v v^* - I|| = " + std::to_string(val.residual));
  rep.validated = true;
  rep.dims.input_n = sys.n();

  res.invariant = invariant_states(sys, tol);
  rep.invariant_multiplicity = res.invariant.multiplicity;
  for (const auto& s : res.invariant.states)
    resid["invariant.residual"] = std::max(resid["invariant.residual"], invariance_residual(sys, s.rho));

  DensityState chosen = res.invariant.barycenter;
  if (opts.rho) {
    const double inv = invariance_residual(sys, opts.rho->rho);
    if (inv > tol) throw ValidationError("supplied state is not invariant: residual " + std::to_string(inv));
    chosen = *opts.rho;
  }
  const Compression comp = compress_to_support(sys, chosen, tol);
  res.analyzed = comp.sys;
  res.state = comp.rho;
  rep.dims.support_n = comp.sys.n();
  resid["compress.unitality"] = unitality_residual(comp.sys.v());

  res.can = canonicalize(res.analyzed, res.state, tol);
  const CanonicalSystem& can = res.can;
  rep.dims.gns = can.gns_dim();
  rep.dims.algebra = can.algebra.dim();
  {
    double worst = 0;
    const std::vector<CMatrix> rv = can.base.v();
    const CMatrix omega_state = can.omega * can.omega.adjoint();
    for (const auto& i : words_up_to(int(sys.d()), 2))
      for (const auto& j : words_up_to(int(sys.d()), 2))
        worst = std::max(worst, std::abs(word_moment(res.analyzed.v(), res.state.rho, i, j) - word_moment(rv, omega_state, i, j)));
    resid["canonical.moments"] = worst;
  }

  const OperatorSubspace comm = commutant(can.algebra, tol);
  rep.dims.commutant = comm.dim();
  const ErgodicityReport erg = ergodicity(can, tol);
  rep.is_factor = erg.is_factor;
  rep.dims.center = erg.center_dim;
  rep.extremal_count = static_cast<Index>(res.invariant.states.size());

  res.modular = modular_data(can, tol);
  const ModularData& md = res.modular;
  resid["modular.max"] = md.residuals.max();
  const DualSystem dual = dual_popescu(md, tol);
  resid["dual.sum"] = dual.diagnostics.sum;
  resid["dual.commutant"] = dual.diagnostics.commutant;
  resid["dual.vacuum"] = dual.diagnostics.vacuum;
  resid["dual.duality"] = dual.diagnostics.duality;
  const DualChannel dch = dual_channel(md, tol);
  resid["dual.kms"] = dch.kms;

  // Fix(tau) against pi(M)'
  const OperatorSubspace fix_tau = channel_fixed_points(can.base.v(), false, tol);
  rep.dims.fix_tau = fix_tau.dim();
  resid["support.containment"] = containment_residual(fix_tau, comm);
  const SubspaceComparison sup = subspace_equal(fix_tau, comm, opts.subspace_tol);
  resid["support.equality"] = sup.residual;
  rep.support_identity_ok = sup.equal;
  require(resid["support.containment"] <= opts.subspace_tol, "pi(M)' is not contained in Fix(tau)");
  require(sup.equal, "Fix(tau) differs from pi(M)' after canonicalization");

  // Fix(tau~) against pi(M)
  const OperatorSubspace fix_dual = channel_fixed_points(md.dual_v, false, tol);
  rep.dims.fix_dual = fix_dual.dim();
  resid["dual_fix.containment"] = containment_residual(fix_dual, can.algebra);
  require(resid["dual_fix.containment"] <= opts.subspace_tol, "pi(M) is not contained in Fix(tau~)");
  const SubspaceComparison dcmp = subspace_equal(fix_dual, can.algebra, opts.subspace_tol);
  resid["dual_fix.equality"] = dcmp.residual;

  rep.channel_spectrum = channel_spectrum(res.analyzed);
  rep.gauge_h = gauge_group(res.analyzed, res.state, opts.cutoff, tol);

  if (erg.is_factor) {
    rep.is_ergodic = erg.ergodic;
    rep.dual_identity_ok = dcmp.equal;
    rep.is_pure = dcmp.equal && rep.is_ergodic;
    rep.purity_reason = rep.is_pure ? "Fix(tau~) = pi(M) and the state is ergodic"
                                    : "Fix(tau~) is strictly larger than pi(M)";
    const MixingProxy mp = kolmogorov_proxy(res.analyzed, tol);
    rep.mixing_gap = mp.gap;
    rep.strongly_mixing = mp.strongly_mixing;
  } else {
    rep.is_ergodic = false;
    rep.is_pure = false;
    rep.purity_reason = "state not extremal/ergodic";
  }
  if (const std::string bad = rep.consistency_violation(); !bad.empty()) throw ConsistencyError("purity_battery: " + bad);
  return res;
}

PurityReport purity_battery(const PopescuSystem& sys, const BatteryOptions& opts) {
  return run_battery(sys, opts).report;
}

}  // namespace fcs
