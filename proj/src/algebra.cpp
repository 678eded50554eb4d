#include "fcs/algebra.hpp"

#include <string>

namespace fcs {

OperatorSubspace generated_algebra(Index n, const std::vector<CMatrix>& gens) {
  std::vector<CMatrix> seed{CMatrix::Identity(n, n)};
  for (const auto& g : gens) {
    if (g.rows() != n || g.cols() != n) throw PreconditionError("generated_algebra: generator has wrong shape", double(g.rows()));
    seed.push_back(g);
    seed.push_back(g.adjoint());
  }
  OperatorSubspace current = OperatorSubspace::span(n, seed);
  // Each round squares the maximal word length; the dimension is bounded by n^2.
  for (Index round = 0; round <= n * n; ++round) {
    const auto basis = current.basis();
    std::vector<CMatrix> products;
    products.reserve(basis.size() * basis.size());
    for (const auto& a : basis)
      for (const auto& b : basis) products.push_back(a * b);
    OperatorSubspace next = OperatorSubspace::span(n, products);
    if (next.dim() == current.dim()) return next;
    current = std::move(next);
  }
  throw ConsistencyError("generated_algebra: closure did not stabilise");
}

OperatorSubspace commutant(const OperatorSubspace& space, double tol) {
  const double star = space.star_residual();
  if (star > std::sqrt(tol)) throw PreconditionError("commutant: input subspace is not *-closed", star);
  const Index n = space.ambient_dim();
  const CMatrix id = CMatrix::Identity(n, n);
  std::vector<CMatrix> constraints;
  constraints.reserve(static_cast<std::size_t>(space.dim()));
  for (const auto& b : space.basis()) constraints.push_back(sandwich_superop(id, b) - sandwich_superop(b, id));
  return solve_linear_space(n, constraints);
}

CenterReport center_and_factor(const OperatorSubspace& algebra, double tol) {
  CenterReport out;
  out.center = intersect(algebra, commutant(algebra, tol));
  const Index n = algebra.ambient_dim();
  out.is_factor = out.center.dim() == 1 && out.center.distance(CMatrix::Identity(n, n)) <= std::sqrt(tol);
  return out;
}

double unitality_residual(const std::vector<CMatrix>& kraus, bool adjoint) {
  if (kraus.empty()) return 0.0;
  const Index n = kraus.front().rows();
  CMatrix sum = CMatrix::Zero(n, n);
  for (const auto& k : kraus) sum += adjoint ? CMatrix(k.adjoint() * k) : CMatrix(k * k.adjoint());
  return (sum - CMatrix::Identity(n, n)).norm();
}

OperatorSubspace channel_fixed_points(const std::vector<CMatrix>& kraus, bool adjoint, double tol) {
  if (kraus.empty()) throw PreconditionError("channel_fixed_points: empty Kraus family", 0.0);
  const double res = unitality_residual(kraus, adjoint);
  if (res > tol) throw PreconditionError("channel_fixed_points: Kraus family is not unital", res);
  const Index n = kraus.front().rows();
  const CMatrix t = adjoint ? kraus_predual_superop(kraus) : kraus_superop(kraus);
  auto fix = solve_linear_space<double>(n, std::vector<CMatrix>{CMatrix(t - CMatrix::Identity(n * n, n * n))});
  const double star = fix.star_residual();
  if (star > std::sqrt(tol)) throw ConsistencyError("channel_fixed_points: fixed-point space is not *-closed (" + std::to_string(star) + ")");
  return fix;
}

OperatorSubspace fixed_points_within(const OperatorSubspace& algebra, const CMatrix& channel_superop,
                                     double kernel_tol) {
  const CMatrix& q = algebra.frame();
  const CMatrix restricted = q.adjoint() * channel_superop * q - CMatrix::Identity(q.cols(), q.cols());
  const CMatrix k = kernel_basis(restricted, kernel_tol);
  CMatrix f = q * k;
  return OperatorSubspace::from_frame(algebra.ambient_dim(), std::move(f));
}

}  // namespace fcs
