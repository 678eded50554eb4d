#pragma once

// Named Popescu systems used by the command-line tool and the tests.

#include <cstdint>
#include <string>
#include <vector>

#include "fcs/popescu.hpp"

namespace fcs {

struct Fixture {
  std::string name;
  std::string description;
  PopescuSystem sys;
};

/// Names accepted by make_fixture; "random-seeded:<seed>" is accepted in addition.
std::vector<std::string> fixture_names();

/// Throws ValidationError on an unknown name.
Fixture make_fixture(const std::string& name);

/// Spin-1 valence-bond chain on C^2, letters ordered (+, 0, -).
PopescuSystem aklt_system();
/// Product state on C^1 with amplitudes lambda, sum |lambda_k|^2 = 1.
PopescuSystem bernoulli_system(const std::vector<cplx>& lambda);
/// v_1 = I/sqrt2, v_2 = diag(1,-1)/sqrt2: abelian algebra, two invariant states.
PopescuSystem nonergodic_z2_system();
/// AKLT on C^2 direct sum the uniform three-letter Bernoulli system on C^1.
PopescuSystem two_block_system();
/// n = 2 + seed % 3, d = 2 + (seed / 3) % 2; Gaussian Kraus family normalized
/// by (sum v v^*)^{-1/2}. Bit-reproducible across platforms.
PopescuSystem random_system(std::uint64_t seed);
PopescuSystem random_system(std::uint64_t seed, Index n, Index d);

}  // namespace fcs
