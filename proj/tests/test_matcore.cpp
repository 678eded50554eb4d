#include <doctest.h>

#include <random>

#include "fcs/errors.hpp"
#include "fcs/matcore.hpp"

using namespace fcs;

namespace {

CMatrix random_matrix(Index r, Index c, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> g;
  CMatrix m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = cplx(g(gen), g(gen));
  return m;
}

}  // namespace

TEST_CASE("vectorization is column-major and sandwich matches vec(AXB)") {
  const CMatrix a = random_matrix(3, 3, 1), b = random_matrix(3, 3, 2), x = random_matrix(3, 3, 3);
  CHECK((unvec(vec(x), 3) - x).norm() == doctest::Approx(0.0));
  CHECK(vec(x)(1) == x(1, 0));
  CHECK((sandwich_superop(a, b) * vec(x) - vec(CMatrix(a * x * b))).norm() < 1e-12);
}

TEST_CASE("kraus superoperator and predual are adjoint") {
  const std::vector<CMatrix> k{random_matrix(3, 3, 4), random_matrix(3, 3, 5)};
  const CMatrix x = random_matrix(3, 3, 6), y = random_matrix(3, 3, 7);
  CMatrix tx = CMatrix::Zero(3, 3), py = CMatrix::Zero(3, 3);
  for (const auto& v : k) {
    tx += v * x * v.adjoint();
    py += v.adjoint() * y * v;
  }
  CHECK((kraus_superop(k) * vec(x) - vec(tx)).norm() < 1e-12);
  CHECK((kraus_predual_superop(k) * vec(y) - vec(py)).norm() < 1e-12);
  // Tr(y^* tau(x)) = Tr(tau_*(y)^* x)
  CHECK(std::abs((y.adjoint() * tx).trace() - (py.adjoint() * x).trace()) < 1e-11);
}

TEST_CASE("herm_eig reconstructs a random 6x6 Hermitian matrix") {
  const CMatrix g = random_matrix(6, 6, 8);
  const CMatrix h = g + g.adjoint();
  const HermEig e = herm_eig(h);
  for (Index i = 1; i < 6; ++i) CHECK(e.values(i) >= e.values(i - 1));
  CHECK((e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint() - h).norm() < 1e-12);
  CHECK((e.vectors.adjoint() * e.vectors - CMatrix::Identity(6, 6)).norm() < 1e-12);
  for (Index c = 0; c < 6; ++c) {
    Index first = 0;
    while (std::abs(e.vectors(first, c)) < 1e-12) ++first;
    CHECK(std::abs(e.vectors(first, c).imag()) < 1e-12);
    CHECK(e.vectors(first, c).real() > 0);
  }
}

TEST_CASE("herm_eig rejects non-Hermitian input with its residual") {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = 1;
  CHECK_THROWS_AS(herm_eig(m), PreconditionError);
  try {
    herm_eig(m);
  } catch (const PreconditionError& e) {
    CHECK(e.residual() > 0.5);
  }
}

TEST_CASE("pos_power") {
  const CMatrix g = random_matrix(4, 4, 9);
  const CMatrix p = g * g.adjoint() + CMatrix::Identity(4, 4);
  const CMatrix r = pos_power(p, cplx(0.5));
  CHECK((r * r - p).norm() < 1e-10);
  CHECK((pos_power(p, cplx(-0.5)) * r - CMatrix::Identity(4, 4)).norm() < 1e-10);
  // imaginary powers are unitary
  const CMatrix u = pos_power(p, cplx(0, 0.7));
  CHECK((u * u.adjoint() - CMatrix::Identity(4, 4)).norm() < 1e-10);

  CMatrix sing = CMatrix::Zero(2, 2);
  sing(0, 0) = 4;
  CHECK((pos_power(sing, cplx(0.5)) - CMatrix(sing / 2.0)).norm() < 1e-14);
  CHECK(std::abs(pos_power(sing, cplx(0.0))(1, 1)) < 1e-14);
  CHECK_THROWS_AS(pos_power(sing, cplx(-1.0)), PreconditionError);
  CHECK_THROWS_AS(pos_power(CMatrix(-CMatrix::Identity(2, 2)), cplx(0.5)), PreconditionError);
}

TEST_CASE("antilinear operators") {
  const AntilinearOp a{random_matrix(3, 3, 10)}, b{random_matrix(3, 3, 11)};
  const CVector xi = random_matrix(3, 1, 12), eta = random_matrix(3, 1, 13);
  CHECK((a(cplx(0, 1) * xi) - cplx(0, -1) * a(xi)).norm() < 1e-12);
  CHECK((compose(a, b) * xi - a(b(xi))).norm() < 1e-12);
  // <A^* eta, xi> = <A xi, eta>
  CHECK(std::abs(a.adjoint()(eta).dot(xi) - a(xi).dot(eta)) < 1e-12);
  const CMatrix l = random_matrix(3, 3, 14);
  CHECK((conjugate_by(a, l, b) * xi - a(CVector(l * b(xi)))).norm() < 1e-11);
  CHECK((compose(a, l)(xi) - a(CVector(l * xi))).norm() < 1e-11);
  CHECK((compose(l, a)(xi) - l * a(xi)).norm() < 1e-11);
}

TEST_CASE("kernel and solve_linear_space") {
  // commutant of diag(1, 2, 2) is block diagonal: dimension 1 + 4
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = 1;
  d(1, 1) = 2;
  d(2, 2) = 2;
  const CMatrix id = CMatrix::Identity(3, 3);
  const auto s = solve_linear_space<double>(3, std::vector<CMatrix>{CMatrix(sandwich_superop(id, d) - sandwich_superop(d, id))});
  CHECK(s.dim() == 5);
  CHECK(s.distance(d) < 1e-12);
  CHECK(s.star_residual() < 1e-12);
  // a matrix that is zero up to rounding has the whole space as kernel
  CHECK(kernel_basis(CMatrix(CMatrix::Constant(2, 2, 1e-17))).cols() == 2);
  CHECK(kernel_basis(CMatrix(CMatrix::Identity(3, 3))).cols() == 0);
}

TEST_CASE("svd factors are finite and orthonormal on rank-deficient input") {
  // commutant constraints of M_2 acting on C^2 (x) C^2: rank 12 of 16
  const Index n = 4;
  const CMatrix id2 = CMatrix::Identity(2, 2);
  std::vector<CMatrix> rows;
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) {
      CMatrix e = CMatrix::Zero(2, 2);
      e(i, j) = 1;
      const CMatrix b = Eigen::kroneckerProduct(e, id2).eval();
      rows.push_back(sandwich_superop(CMatrix(CMatrix::Identity(n, n)), b) - sandwich_superop(b, CMatrix(CMatrix::Identity(n, n))));
    }
  CMatrix stacked(4 * n * n, n * n);
  for (std::size_t i = 0; i < rows.size(); ++i) stacked.middleRows(Index(i) * n * n, n * n) = rows[i];
  Eigen::HouseholderQR<CMatrix> qr(stacked);
  const CMatrix r = qr.matrixQR().topRows(n * n).triangularView<Eigen::Upper>();
  const Svd dec = svd<double>(r, Eigen::ComputeFullV);
  CHECK(dec.v.allFinite());
  CHECK((dec.v.adjoint() * dec.v - CMatrix::Identity(n * n, n * n)).norm() < 1e-12);
  const CMatrix k = kernel_basis(stacked);
  CHECK(k.cols() == 4);
  CHECK((stacked * k).norm() < 1e-12);
}

TEST_CASE("subspace comparison and intersection") {
  const Index n = 2;
  CMatrix e00 = CMatrix::Zero(2, 2), e11 = CMatrix::Zero(2, 2), e01 = CMatrix::Zero(2, 2);
  e00(0, 0) = 1;
  e11(1, 1) = 1;
  e01(0, 1) = 1;
  const auto diag = OperatorSubspace::span(n, {e00, e11});
  const auto diag2 = OperatorSubspace::span(n, {CMatrix(e00 + e11), CMatrix(e00 - 2.0 * e11)});
  const auto upper = OperatorSubspace::span(n, {e00, e01});
  CHECK(subspace_equal(diag, diag2).equal);
  CHECK_FALSE(subspace_equal(diag, upper).equal);
  CHECK(containment_residual(diag, OperatorSubspace::scalars(n)) < 1e-12);
  CHECK(containment_residual(upper, OperatorSubspace::scalars(n)) > 0.1);
  const auto cap = intersect(diag, upper);
  REQUIRE(cap.dim() == 1);
  CHECK(cap.distance(e00) < 1e-12);
  CHECK(OperatorSubspace::full(n).dim() == 4);
}

TEST_CASE("templates instantiate for single precision") {
  CMatrixT<float> h(2, 2);
  h << 2.0f, std::complex<float>(0, 1), std::complex<float>(0, -1), 2.0f;
  const auto e = herm_eig(h, 1e-5f);
  CHECK(e.values(0) == doctest::Approx(1.0f).epsilon(1e-5));
  CHECK(e.values(1) == doctest::Approx(3.0f).epsilon(1e-5));
  const auto r = pos_power(h, std::complex<float>(0.5f), 1e-5f);
  CHECK((r * r - h).norm() < 1e-5f);
}
