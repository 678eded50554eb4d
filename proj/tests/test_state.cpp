#include <doctest.h>

#include <cmath>
#include <random>

#include "fcs/errors.hpp"
#include "fcs/fixtures.hpp"
#include "fcs/state.hpp"
#include "oracles.hpp"

using namespace fcs;

namespace {

const DensityState kHalf{CMatrix::Identity(2, 2) / 2.0};

CMatrix sz() {
  CMatrix s = CMatrix::Zero(3, 3);
  s(0, 0) = 1;
  s(2, 2) = -1;
  return s;
}

}  // namespace

TEST_CASE("contraction oracle is normalized and reproduces the closed-form AKLT correlator") {
  const PopescuSystem a = aklt_system();
  for (int n = 1; n <= 8; ++n) {
    const CMatrix psi = oracle::purification(a.v(), kHalf.rho, n + 1);
    CHECK(std::abs(psi.squaredNorm() - 1.0) < 1e-12);
    std::vector<std::vector<double>> diag(std::size_t(n + 1), {1.0, 1.0, 1.0});
    diag.front() = {1.0, 0.0, -1.0};
    diag.back() = {1.0, 0.0, -1.0};
    const double contracted = oracle::diagonal_expectation(psi, 3, diag);
    const double closed = (4.0 / 3.0) * std::pow(-1.0 / 3.0, n);
    CHECK(std::abs(contracted - closed) < 1e-12);
    const cplx via_transfer = two_point(a, kHalf, sz(), sz(), n - 1);
    CHECK(std::abs(via_transfer - closed) < 1e-12);
  }
}

TEST_CASE("E-map examples") {
  const PopescuSystem a = aklt_system();
  CMatrix z = CMatrix::Zero(2, 2);
  z(0, 0) = 1;
  z(1, 1) = -1;
  CHECK((apply_e_map(a, sz(), CMatrix::Identity(2, 2)) - (2.0 / 3.0) * z).norm() < 1e-14);
  CHECK((e_map(a, sz()) * vec(CMatrix(CMatrix::Identity(2, 2))) - vec(CMatrix((2.0 / 3.0) * z))).norm() < 1e-14);
  CHECK(std::abs(local_expectation(a, kHalf, {{sz()}})) < 1e-15);
  CHECK(std::abs(local_expectation(a, kHalf, {{sz(), sz()}}) + 4.0 / 9.0) < 1e-14);

  const double s = std::sqrt(0.5);
  const PopescuSystem b = bernoulli_system({s, s});
  const DensityState one{CMatrix::Identity(1, 1)};
  CHECK(std::abs(local_expectation(b, one, {{matrix_unit(2, 0, 1)}}) - 0.5) < 1e-15);
  CHECK_THROWS_AS(local_expectation(a, {CMatrix(CMatrix::Identity(2, 2))}, {{sz()}}), PreconditionError);
  CHECK_THROWS_AS(two_point(a, kHalf, sz(), sz(), -1), PreconditionError);
}

TEST_CASE("local expectations agree with the purification for general observables") {
  const PopescuSystem sys = random_system(8, 3, 2);
  const DensityState rho = invariant_states(sys).barycenter;
  const CMatrix psi = oracle::purification(sys.v(), rho.rho, 3);
  std::mt19937 gen(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 5; ++trial) {
    LocalObservable obs;
    for (int s = 0; s < 3; ++s) {
      CMatrix x(2, 2);
      for (Index i = 0; i < 4; ++i) x(i) = cplx(g(gen), g(gen));
      obs.site_ops.push_back(x);
    }
    // full-chain operator A_1 (x) A_2 (x) A_3 with site 1 most significant
    CMatrix full = obs.site_ops[0];
    for (int s = 1; s < 3; ++s) {
      const CMatrix& b = obs.site_ops[std::size_t(s)];
      CMatrix k(full.rows() * 2, full.cols() * 2);
      for (Index i = 0; i < full.rows(); ++i)
        for (Index j = 0; j < full.cols(); ++j) k.block(i * 2, j * 2, 2, 2) = full(i, j) * b;
      full = k;
    }
    // <Psi, (A (x) 1) Psi> with rows of psi the site configurations: omega(A) = sum A_IJ <x_I, x_J>
    const CMatrix gram = psi.conjugate() * psi.transpose();
    const cplx expect = (full.transpose() * gram).trace();
    CHECK(std::abs(local_expectation(sys, rho, obs) - expect) < 1e-11);
  }
}

TEST_CASE("positivity on sitewise A^*A observables") {
  const PopescuSystem sys = random_system(9, 2, 3);
  const DensityState rho = invariant_states(sys).barycenter;
  std::mt19937 gen(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    LocalObservable obs;
    for (int s = 0; s < 3; ++s) {
      CMatrix x(3, 3);
      for (Index i = 0; i < 9; ++i) x(i) = cplx(g(gen), g(gen));
      obs.site_ops.push_back(x.adjoint() * x);
    }
    const cplx w = local_expectation(sys, rho, obs);
    CHECK(w.real() >= -1e-10);
    CHECK(std::abs(w.imag()) < 1e-10);
  }
}

TEST_CASE("cluster decay") {
  const ClusterDecay a = cluster_decay(aklt_system(), kHalf, 8);
  CHECK(std::abs(a.lambda2 - 1.0 / 3.0) < 1e-10);
  for (int gp = 2; gp < 8; ++gp) CHECK(std::abs(a.c[std::size_t(gp + 1)] / a.c[std::size_t(gp)] - 1.0 / 3.0) < 1e-6);

  const double s = std::sqrt(0.5);
  const ClusterDecay b = cluster_decay(bernoulli_system({s, s}), {CMatrix::Identity(1, 1)}, 4);
  for (double c : b.c) CHECK(c < 1e-14);

  // abelian fixture with the mixed state I/2: connected correlations persist
  const ClusterDecay z = cluster_decay(nonergodic_z2_system(), kHalf, 6);
  CHECK(z.c.back() > 0.1);
  CHECK(std::abs(z.c.back() - z.c[1]) < 1e-12);
}

TEST_CASE("gauge group by word enumeration") {
  const double s = std::sqrt(0.5);
  const GaugeGroup b = gauge_group(bernoulli_system({s, s}), {CMatrix::Identity(1, 1)}, 4);
  CHECK(b.describe() == "{1}");

  // oracle: difference set from explicit products
  const PopescuSystem a = aklt_system();
  std::vector<int> diffs;
  for (int li = 0; li <= 4; ++li)
    for (int lj = 0; lj <= 4; ++lj)
      for (const auto& i : oracle::words_of_length(3, li))
        for (const auto& j : oracle::words_of_length(3, lj))
          if (std::abs(oracle::moment(a.v(), kHalf.rho, i, j)) > 1e-9 && li != lj) diffs.push_back(li - lj);
  std::sort(diffs.begin(), diffs.end());
  diffs.erase(std::unique(diffs.begin(), diffs.end()), diffs.end());
  const GaugeGroup g = gauge_group(a, kHalf, 4);
  std::vector<int> nonzero;
  for (int x : g.differences)
    if (x != 0) nonzero.push_back(x);
  CHECK(nonzero == diffs);
  // v_+ v_- v_0 has nonzero trace: an odd difference occurs, so the group is trivial
  CHECK(std::abs(oracle::moment(a.v(), kHalf.rho, {0, 2, 1}, {})) > 0.1);
  CHECK(g.describe() == "{1}");

  // phi(v_1) = 1/sqrt2 for the abelian fixture
  CHECK(gauge_group(nonergodic_z2_system(), kHalf, 4).describe() == "{1}");
}

TEST_CASE("gauge group of a period-2 system") {
  // v_1 = sigma_x / sqrt2, v_2 = i sigma_y / sqrt2: every letter flips the basis, so odd differences vanish
  CMatrix x = CMatrix::Zero(2, 2), y = CMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = std::sqrt(0.5);
  y(0, 1) = std::sqrt(0.5);
  y(1, 0) = -std::sqrt(0.5);
  const GaugeGroup p = gauge_group(PopescuSystem({x, y}), kHalf, 4);
  CHECK(p.describe() == "Z2");
  CHECK(gauge_group(bernoulli_system({1.0, 0.0}), {CMatrix::Identity(1, 1)}, 4).describe() == "{1}");
}

TEST_CASE("gauge group description") {
  GaugeGroup g;
  g.full_circle = true;
  g.cutoff = 4;
  CHECK(g.describe() == "S1 (up to cutoff 4)");
  g.full_circle = false;
  g.order = 3;
  CHECK(g.describe() == "Z3");
}
