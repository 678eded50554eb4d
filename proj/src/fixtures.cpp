#include "fcs/fixtures.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "fcs/errors.hpp"

namespace fcs {

std::vector<std::string> fixture_names() {
  return {"aklt", "bernoulli-uniform", "bernoulli-basis", "nonergodic-z2", "two-block"};
}

PopescuSystem aklt_system() {
  CMatrix up = CMatrix::Zero(2, 2), down = CMatrix::Zero(2, 2), z = CMatrix::Zero(2, 2);
  up(0, 1) = 1;
  down(1, 0) = 1;
  z(0, 0) = 1;
  z(1, 1) = -1;
  const double a = std::sqrt(2.0 / 3.0), b = 1.0 / std::sqrt(3.0);
  return PopescuSystem({a * up, -b * z, -a * down});
}

PopescuSystem bernoulli_system(const std::vector<cplx>& lambda) {
  std::vector<CMatrix> v;
  for (const cplx& l : lambda) v.push_back(CMatrix::Constant(1, 1, l));
  return PopescuSystem(std::move(v));
}

PopescuSystem nonergodic_z2_system() {
  const double s = std::numbers::sqrt2 / 2;
  CMatrix z = CMatrix::Zero(2, 2);
  z(0, 0) = s;
  z(1, 1) = -s;
  return PopescuSystem({CMatrix(s * CMatrix::Identity(2, 2)), z});
}

PopescuSystem two_block_system() {
  const PopescuSystem a = aklt_system();
  const double l = 1.0 / std::sqrt(3.0);
  std::vector<CMatrix> v;
  for (Index k = 0; k < 3; ++k) {
    CMatrix x = CMatrix::Zero(3, 3);
    x.topLeftCorner(2, 2) = a[k];
    x(2, 2) = l;
    v.push_back(x);
  }
  return PopescuSystem(std::move(v));
}

namespace {

// Box-Muller on the raw engine output; std::normal_distribution is not
// specified bit-exactly across standard libraries.
class Gaussian {
 public:
  explicit Gaussian(std::uint64_t seed) : eng_(seed) {}
  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0;
    while (u1 == 0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

 private:
  double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }
  std::mt19937_64 eng_;
  double spare_ = 0;
  bool has_spare_ = false;
};

}  // namespace

PopescuSystem random_system(std::uint64_t seed, Index n, Index d) {
  Gaussian g(seed);
  std::vector<CMatrix> v;
  for (Index k = 0; k < d; ++k) {
    CMatrix x(n, n);
    for (Index r = 0; r < n; ++r)
      for (Index c = 0; c < n; ++c) {
        const double re = g();
        x(r, c) = cplx(re, g());
      }
    v.push_back(x);
  }
  CMatrix sum = CMatrix::Zero(n, n);
  for (const auto& x : v) sum += x * x.adjoint();
  const CMatrix norm = pos_power(CMatrix((sum + sum.adjoint()) / 2.0), cplx(-0.5));
  for (auto& x : v) x = norm * x;
  return PopescuSystem(std::move(v));
}

PopescuSystem random_system(std::uint64_t seed) {
  return random_system(seed, Index(2 + seed % 3), Index(2 + (seed / 3) % 2));
}

Fixture make_fixture(const std::string& name) {
  const double s = std::numbers::sqrt2 / 2;
  if (name == "aklt") return {name, "AKLT valence-bond chain, letters (+, 0, -)", aklt_system()};
  if (name == "bernoulli-uniform") return {name, "Bernoulli product state, lambda = (1/sqrt2, 1/sqrt2)", bernoulli_system({s, s})};
  if (name == "bernoulli-basis") return {name, "Bernoulli product state, lambda = (1, 0)", bernoulli_system({1.0, 0.0})};
  if (name == "nonergodic-z2") return {name, "v1 = I/sqrt2, v2 = diag(1,-1)/sqrt2", nonergodic_z2_system()};
  if (name == "two-block") return {name, "AKLT direct sum uniform three-letter Bernoulli", two_block_system()};
  const std::string prefix = "random-seeded:";
  if (name.rfind(prefix, 0) == 0) {
    const std::string tail = name.substr(prefix.size());
    std::size_t used = 0;
    unsigned long long seed = 0;
    try {
      seed = std::stoull(tail, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (tail.empty() || used != tail.size() || tail.front() == '-')
      throw ValidationError("fixture: bad seed in '" + name + "'");
    return {name, "seeded random Kraus family", random_system(seed)};
  }
  throw ValidationError("fixture: unknown name '" + name + "'");
}

}  // namespace fcs
