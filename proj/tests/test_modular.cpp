#include <doctest.h>

#include <cmath>

#include "fcs/algebra.hpp"
#include "fcs/errors.hpp"
#include "fcs/fixtures.hpp"
#include "fcs/modular.hpp"
#include "oracles.hpp"

using namespace fcs;

namespace {

ModularData modular_of(const PopescuSystem& sys) {
  const InvariantStates inv = invariant_states(sys);
  const Compression c = compress_to_support(sys, inv.barycenter);
  return modular_data(canonicalize(c.sys, c.rho));
}

CVector apply_word_star(const std::vector<CMatrix>& ops, const Word& w, CVector x) {
  // (u_{w_1} ... u_{w_m})^* x
  for (int a : w) x = ops[std::size_t(a)].adjoint() * x;
  return x;
}

}  // namespace

TEST_CASE("Bernoulli: trivial modular data") {
  const double s = std::sqrt(0.5);
  const ModularData md = modular_of(bernoulli_system({cplx(s, 0), cplx(0, s)}));
  CHECK(md.gns_dim() == 1);
  CHECK(std::abs(md.delta(0, 0) - 1.0) < 1e-14);
  CHECK(std::abs(md.j.mat(0, 0) - 1.0) < 1e-14);
  for (std::size_t k = 0; k < 2; ++k) CHECK(std::abs(md.dual_v[k](0, 0) - md.pi_v()[k](0, 0)) < 1e-14);
}

TEST_CASE("AKLT: tracial state, trivial modular group") {
  const ModularData md = modular_of(aklt_system());
  CHECK((md.delta - CMatrix::Identity(4, 4)).norm() < 1e-12);
  CHECK(md.residuals.max() < 1e-12);
  const CMatrix x = md.pi_v()[0] + 0.3 * md.pi_v()[1];
  CHECK((sigma(md, x, cplx(0, 0.5)) - x).norm() < 1e-12);
  for (std::size_t k = 0; k < 3; ++k) {
    const CMatrix expect = conjugate_by(md.j, CMatrix(md.pi_v()[k].adjoint()), md.j);
    CHECK((md.dual_v[k] - expect).norm() < 1e-12);
  }
  CMatrix sum = CMatrix::Zero(4, 4);
  for (const auto& w : md.dual_v) sum += w * w.adjoint();
  CHECK((sum - CMatrix::Identity(4, 4)).norm() < 1e-10);
}

TEST_CASE("random system: modular identities and the KMS condition") {
  const ModularData md = modular_of(random_system(11, 3, 2));
  CHECK(md.residuals.max() < 1e-9);
  CHECK((md.delta * md.omega() - md.omega()).norm() < 1e-10);
  CHECK(herm_eig(md.delta).values(0) > 0);
  const auto basis = md.can.algebra.basis();
  const auto comm = commutant(md.can.algebra);
  double kms = 0, jmj = 0, auto_res = 0;
  for (const auto& x : basis) {
    jmj = std::max(jmj, comm.distance(conjugate_by(md.j, x, md.j)));
    auto_res = std::max(auto_res, md.can.algebra.distance(sigma(md, x, cplx(0.37))));
    for (const auto& y : basis) {
      // phi(x sigma_{-i}(y)) = phi(y x)
      const cplx lhs = md.omega().dot(x * sigma(md, y, cplx(0, -1)) * md.omega());
      const cplx rhs = md.omega().dot(y * x * md.omega());
      kms = std::max(kms, std::abs(lhs - rhs));
    }
  }
  CHECK(kms < 1e-10);
  CHECK(jmj < 1e-10);
  CHECK(auto_res < 1e-10);
}

TEST_CASE("dual elements against brute-force moments") {
  for (std::uint64_t seed : {3u, 4u, 17u}) {
    const PopescuSystem sys = random_system(seed);
    const ModularData md = modular_of(sys);
    const InvariantStates inv = invariant_states(sys);
    const auto words = words_up_to(int(sys.d()), 3);
    double worst = 0, vacuum = 0;
    for (const auto& i : words) {
      const Word ri(i.rbegin(), i.rend());
      const CVector li = apply_word_star(md.dual_v, ri, md.omega());
      vacuum = std::max(vacuum, (apply_word_star(md.dual_v, i, md.omega()) -
                                 apply_word_star(md.pi_v(), ri, md.omega())).norm());
      for (const auto& j : words) {
        const Word rj(j.rbegin(), j.rend());
        const cplx rhs = li.dot(apply_word_star(md.dual_v, rj, md.omega()));
        worst = std::max(worst, std::abs(oracle::moment(sys.v(), inv.barycenter.rho, i, j) - rhs));
      }
    }
    CHECK(worst < 1e-9);
    CHECK(vacuum < 1e-9);
    const DualDiagnostics dd = dual_diagnostics(md, md.dual_v);
    CHECK(dd.ok(1e-9));
  }
}

TEST_CASE("negative control: a corrupted dual fails commutant membership and moment duality") {
  const ModularData md = modular_of(random_system(5));
  const DualDiagnostics good = dual_diagnostics(md, md.dual_v);
  const DualDiagnostics bad = dual_diagnostics(md, corrupt_dual(md.dual_v, 0));
  CHECK(good.max() < 1e-9);
  CHECK(bad.commutant > 1e-3);
  CHECK(bad.duality > 1e-3);
  // a global sign flip of one dual element is not detectable by these identities
  auto flipped = md.dual_v;
  flipped[0] = -flipped[0];
  CHECK(dual_diagnostics(md, flipped).commutant < 1e-9);
}

TEST_CASE("dual channel") {
  const ModularData a = modular_of(aklt_system());
  const DualChannel dc = dual_channel(a);
  CHECK(dc.unital < 1e-10);
  CHECK(dc.kms < 1e-10);
  for (const auto& x : a.can.algebra.basis()) CHECK((unvec(CVector(dc.superop * vec(x)), 4) - x).norm() < 1e-10);
  CHECK(subspace_equal(channel_fixed_points(a.dual_v), a.can.algebra).equal);

  // abelian fixture: both Fix(tau~) and pi(M) are the two-dimensional diagonal algebra
  const ModularData z = modular_data(canonicalize(nonergodic_z2_system(), {CMatrix(CMatrix::Identity(2, 2) / 2.0)}));
  const auto fz = channel_fixed_points(z.dual_v);
  CHECK(fz.dim() == 2);
  CHECK(subspace_equal(fz, z.can.algebra).equal);
}
