#include "fcs/state.hpp"

#include <cmath>
#include <numeric>
#include <set>

#include "fcs/parallel.hpp"

namespace fcs {

namespace {

void check_site_op(const PopescuSystem& sys, const CMatrix& a) {
  if (a.rows() != sys.d() || a.cols() != sys.d())
    throw PreconditionError("site operator must be d x d", double(a.rows()));
}

void check_invariant(const PopescuSystem& sys, const DensityState& rho, double tol) {
  if (rho.rho.rows() != sys.n() || rho.rho.cols() != sys.n())
    throw PreconditionError("density has wrong shape", double(rho.rho.rows()));
  const double norm = std::abs(rho.rho.trace() - 1.0);
  if (norm > tol) throw PreconditionError("density does not have unit trace", norm);
  const double inv = invariance_residual(sys, rho.rho);
  if (inv > tol) throw PreconditionError("density is not invariant", inv);
}

}  // namespace

CMatrix e_map(const PopescuSystem& sys, const CMatrix& a) {
  check_site_op(sys, a);
  const Index n = sys.n();
  CMatrix t = CMatrix::Zero(n * n, n * n);
  for (Index i = 0; i < sys.d(); ++i)
    for (Index j = 0; j < sys.d(); ++j)
      if (a(i, j) != cplx(0)) t += a(i, j) * sandwich_superop(sys[i], sys[j].adjoint());
  return t;
}

CMatrix apply_e_map(const PopescuSystem& sys, const CMatrix& a, const CMatrix& b) {
  check_site_op(sys, a);
  CMatrix out = CMatrix::Zero(sys.n(), sys.n());
  for (Index j = 0; j < sys.d(); ++j) {
    const CMatrix bj = b * sys[j].adjoint();
    for (Index i = 0; i < sys.d(); ++i)
      if (a(i, j) != cplx(0)) out += a(i, j) * sys[i] * bj;
  }
  return out;
}

cplx local_expectation(const PopescuSystem& sys, const DensityState& rho, const LocalObservable& obs, double tol) {
  check_invariant(sys, rho, tol);
  CMatrix b = CMatrix::Identity(sys.n(), sys.n());
  for (auto it = obs.site_ops.rbegin(); it != obs.site_ops.rend(); ++it) b = apply_e_map(sys, *it, b);
  return (rho.rho * b).trace();
}

cplx two_point(const PopescuSystem& sys, const DensityState& rho, const CMatrix& a, const CMatrix& b, int gap,
               double tol) {
  if (gap < 0) throw PreconditionError("two_point: negative gap", double(gap));
  check_invariant(sys, rho, tol);
  CMatrix x = apply_e_map(sys, b, CMatrix::Identity(sys.n(), sys.n()));
  for (int g = 0; g < gap; ++g) x = sys.apply_transfer(x);
  return (rho.rho * apply_e_map(sys, a, x)).trace();
}

CMatrix matrix_unit(Index d, Index i, Index j) {
  CMatrix e = CMatrix::Zero(d, d);
  e(i, j) = 1;
  return e;
}

ClusterDecay cluster_decay(const PopescuSystem& sys, const DensityState& rho, int max_gap, double tol) {
  check_invariant(sys, rho, tol);
  const Index d = sys.d();
  const auto& r = rho.rho;
  ClusterDecay out;
  out.c.assign(static_cast<std::size_t>(max_gap + 1), 0.0);

  // omega(e^a_b (x) I^g (x) e^c_e) = Tr(rho v_a tau^g(v_c v_e^*) v_b^*)
  const std::size_t units = static_cast<std::size_t>(d * d);
  std::vector<cplx> one(units);
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b) one[static_cast<std::size_t>(a * d + b)] = (r * sys[a] * sys[b].adjoint()).trace();

  std::vector<std::vector<double>> per_unit(units, std::vector<double>(out.c.size(), 0.0));
  parallel_for(units, [&](std::size_t u) {
    const Index c = static_cast<Index>(u) / d;
    const Index e = static_cast<Index>(u) % d;
    CMatrix x = sys[c] * sys[e].adjoint();
    for (int g = 0; g <= max_gap; ++g) {
      if (g > 0) x = sys.apply_transfer(x);
      double worst = 0;
      for (Index a = 0; a < d; ++a)
        for (Index b = 0; b < d; ++b) {
          const cplx tp = (r * sys[a] * x * sys[b].adjoint()).trace();
          worst = std::max(worst, std::abs(tp - one[static_cast<std::size_t>(a * d + b)] * one[u]));
        }
      per_unit[u][static_cast<std::size_t>(g)] = worst;
    }
  });
  for (const auto& row : per_unit)
    for (std::size_t g = 0; g < row.size(); ++g) out.c[g] = std::max(out.c[g], row[g]);

  Eigen::ComplexEigenSolver<CMatrix> es(sys.transfer(), false);
  std::vector<double> mods;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) mods.push_back(std::abs(es.eigenvalues()(i)));
  std::sort(mods.begin(), mods.end(), std::greater<>());
  out.lambda2 = mods.size() > 1 ? mods[1] : 0.0;
  for (int g = 1; g <= max_gap; ++g) {
    const double scale = std::pow(out.lambda2, g);
    if (scale > 0) out.envelope = std::max(out.envelope, out.c[static_cast<std::size_t>(g)] / scale);
  }
  return out;
}

std::string GaugeGroup::describe() const {
  if (full_circle) return "S1 (up to cutoff " + std::to_string(cutoff) + ")";
  if (order == 1) return "{1}";
  return "Z" + std::to_string(order);
}

GaugeGroup gauge_group(const PopescuSystem& sys, const DensityState& rho, int length_cutoff, double tol) {
  check_invariant(sys, rho, tol);
  const auto words = words_up_to(static_cast<int>(sys.d()), length_cutoff);
  const CMatrix root = pos_power(rho.rho, cplx(0.5));
  const Index nw = static_cast<Index>(words.size());
  const Index n = sys.n();
  // phi(v_I v_J^*) = <s_I, s_J>, s_I = vec(v_I^* rho^{1/2})
  CMatrix s(n * n, nw);
  for (Index w = 0; w < nw; ++w) s.col(w) = vec(CMatrix(word_product(sys.v(), words[std::size_t(w)]).adjoint() * root));
  const CMatrix moments = s.adjoint() * s;

  std::set<int> diffs;
  for (Index i = 0; i < nw; ++i)
    for (Index j = 0; j < nw; ++j)
      if (std::abs(moments(i, j)) > tol)
        diffs.insert(static_cast<int>(words[std::size_t(i)].size()) - static_cast<int>(words[std::size_t(j)].size()));

  GaugeGroup g;
  g.cutoff = length_cutoff;
  g.differences.assign(diffs.begin(), diffs.end());
  long acc = 0;
  for (int x : diffs) acc = std::gcd(acc, static_cast<long>(std::abs(x)));
  g.full_circle = acc == 0;
  g.order = acc == 0 ? 0 : acc;
  return g;
}

}  // namespace fcs
