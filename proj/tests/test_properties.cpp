// Invariants checked over seeded random systems.

#include <doctest.h>

#include <cmath>

#include "fcs/algebra.hpp"
#include "fcs/amalgam.hpp"
#include "fcs/fixtures.hpp"
#include "fcs/purity.hpp"
#include "oracles.hpp"

using namespace fcs;

namespace {

constexpr std::uint64_t kSeeds = 12;

}  // namespace

TEST_CASE("random fixtures are unital with a unique faithful-on-support invariant state") {
  for (std::uint64_t s = 0; s < kSeeds; ++s) {
    const PopescuSystem sys = random_system(s);
    CAPTURE(s);
    CHECK(sys.n() == Index(2 + s % 3));
    CHECK(sys.d() == Index(2 + (s / 3) % 2));
    CHECK(validate(sys).residual < 1e-12);
    const InvariantStates inv = invariant_states(sys);
    CHECK(inv.multiplicity == 1);
    CHECK(invariance_residual(sys, inv.barycenter.rho) < 1e-12);
    CHECK(std::abs(inv.barycenter.rho.trace() - 1.0) < 1e-12);
    CHECK(herm_eig(inv.barycenter.rho).values(0) > -1e-12);
  }
}

TEST_CASE("battery invariants on random systems") {
  for (std::uint64_t s = 0; s < kSeeds; ++s) {
    CAPTURE(s);
    const BatteryResult br = run_battery(random_system(s));
    const PurityReport& r = br.report;
    CHECK(r.consistency_violation().empty());
    CHECK(r.support_identity_ok);
    CHECK(r.residuals.at("support.containment") <= 1e-10);
    CHECK(r.residuals.at("dual_fix.containment") <= 1e-10);
    // is_pure implies is_factor implies decaying correlations
    if (r.is_pure) CHECK(r.is_factor);
    if (r.is_factor) {
      const ClusterDecay cd = cluster_decay(br.analyzed, br.state, 30);
      CHECK(cd.c.back() < 1e-3 * std::max(1.0, cd.c[1]) + 1e-12);
    }
    // canonical moments agree with the source moments
    CHECK(r.residuals.at("canonical.moments") < 1e-10);
    // standard form: J maps pi(M) onto its commutant
    CHECK(r.dims.commutant == r.dims.algebra);
  }
}

TEST_CASE("spectrum is closed under conjugation and bounded by one") {
  for (std::uint64_t s = 0; s < kSeeds; ++s) {
    const auto spec = channel_spectrum(random_system(s));
    for (const cplx& z : spec) {
      CHECK(std::abs(z) <= 1.0 + 1e-10);
      double nearest = 1e9;
      for (const cplx& w : spec) nearest = std::min(nearest, std::abs(w - std::conj(z)));
      CHECK(nearest < 1e-8);
    }
  }
}

TEST_CASE("amalgam invariants on small random systems") {
  for (std::uint64_t s : {0u, 1u, 6u}) {
    CAPTURE(s);
    const BatteryResult br = run_battery(random_system(s, 2, 2));
    const AmalgamRep rep = build_amalgam(br.modular, 2);
    CHECK(rep.gram_min_eig >= -1e-8);
    CHECK(rep.gram_hermiticity < 1e-12);
    const RelationReport rel = check_relations(rep);
    CHECK(rel.interior_max() <= 1e-8);
    CHECK(moment_check(rep, br.analyzed, br.state, 1) <= 1e-8);
    const ShiftReport sh = shift_unitary(rep);
    CHECK(sh.covariance <= 1e-8);
    CHECK(sh.vacuum <= 1e-8);
  }
}

TEST_CASE("random fixture generation is deterministic") {
  const PopescuSystem a = random_system(42), b = random_system(42);
  for (Index k = 0; k < a.d(); ++k) CHECK((a[k] - b[k]).norm() == 0.0);
  CHECK((random_system(42)[0] - random_system(43)[0]).norm() > 0.1);
}
