#include "fcs/modular.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fcs/algebra.hpp"

namespace fcs {

double ModularResiduals::max() const {
  return std::max({delta_positivity, tomita, j_squared, j_delta_j, delta_omega, j_omega});
}

double DualDiagnostics::max() const { return std::max({sum, commutant, vacuum, duality}); }

ModularData modular_data(const CanonicalSystem& can, double tol) {
  ModularData md;
  md.can = can;
  const Index m = can.gns_dim();
  const auto& e = can.gns_basis;
  const CMatrix& rho = can.source_state.rho;

  // S e_b = e_b^*, expanded in the phi-orthonormal basis: K_ab = phi(e_a^* e_b^*).
  CMatrix k(m, m);
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < m; ++b) k(a, b) = (rho * e[a].adjoint() * e[b].adjoint()).trace();
  md.s = AntilinearOp{k};
  md.delta = compose(md.s.adjoint(), md.s);
  md.delta = (md.delta + md.delta.adjoint()) / 2.0;

  const HermEig deig = herm_eig(md.delta, tol);
  const double scale = std::max(1.0, deig.values(m - 1));
  md.residuals.delta_positivity = std::max(0.0, -deig.values(0));
  if (md.residuals.delta_positivity > tol * scale)
    throw ConsistencyError("modular_data: Delta is not positive (" + std::to_string(md.residuals.delta_positivity) + ")");

  const CMatrix delta_inv_half = pos_power(md.delta, cplx(-0.5), tol);
  const CMatrix delta_half = pos_power(md.delta, cplx(0.5), tol);
  const CMatrix delta_inv = pos_power(md.delta, cplx(-1.0), tol);
  md.j = compose(md.s, delta_inv_half);

  const CVector& omega = can.omega;
  auto& r = md.residuals;
  r.j_squared = (compose(md.j, md.j) - CMatrix::Identity(m, m)).norm();
  r.j_delta_j = (conjugate_by(md.j, md.delta, md.j) - delta_inv).norm() / std::max(1.0, delta_inv.norm());
  r.delta_omega = (md.delta * omega - omega).norm();
  r.j_omega = (md.j(omega) - omega).norm();
  for (const auto& x : can.algebra.basis()) {
    const CVector lhs = md.j(CVector(delta_half * (x * omega)));
    r.tomita = std::max(r.tomita, (lhs - x.adjoint() * omega).norm());
  }
  if (r.max() > std::sqrt(tol)) throw ConsistencyError("modular_data: modular identities fail (max residual " + std::to_string(r.max()) + ")");

  for (const auto& v : can.base.v()) {
    const CMatrix s_half = delta_inv_half * CMatrix(v.adjoint()) * delta_half;  // sigma_{i/2}(v^*)
    md.dual_v.push_back(conjugate_by(md.j, s_half, md.j));
  }
  return md;
}

CMatrix sigma(const ModularData& md, const CMatrix& x, cplx z, double tol) {
  const double scale = std::max(1.0, x.norm());
  const double dist = md.can.algebra.distance(x);
  if (dist > std::sqrt(tol) * scale) throw PreconditionError("sigma: operator is not in pi(M)", dist);
  const cplx i(0, 1);
  const CMatrix out = pos_power(md.delta, i * z, tol) * x * pos_power(md.delta, -i * z, tol);
  const double out_dist = md.can.algebra.distance(out);
  if (out_dist > std::sqrt(tol) * std::max(1.0, out.norm()))
    throw ConsistencyError("sigma: image left pi(M) (" + std::to_string(out_dist) + ")");
  return out;
}

DualDiagnostics dual_diagnostics(const ModularData& md, const std::vector<CMatrix>& dual_v, int vacuum_len,
                                 int moment_len) {
  DualDiagnostics dd;
  const Index m = md.gns_dim();
  const int d = static_cast<int>(dual_v.size());
  const CVector& omega = md.omega();

  CMatrix sum = CMatrix::Zero(m, m);
  for (const auto& w : dual_v) sum += w * w.adjoint();
  dd.sum = (sum - CMatrix::Identity(m, m)).norm();

  for (const auto& w : dual_v)
    for (const auto& b : md.can.algebra.basis()) dd.commutant = std::max(dd.commutant, (w * b - b * w).norm());

  for (const auto& word : words_up_to(d, vacuum_len)) {
    const CVector lhs = word_product(dual_v, word).adjoint() * omega;
    const CVector rhs = word_product(md.pi_v(), word, WordOrder::Reversed).adjoint() * omega;
    dd.vacuum = std::max(dd.vacuum, (lhs - rhs).norm());
  }

  // phi(v_I v_J^*) = <s_I, s_J> with s_I = vec(v_I^* rho^{1/2}) on the source;
  // <Omega, v~_{rev I} v~_{rev J}^* Omega> = <t_I, t_J> with t_I = v~_{rev I}^* Omega.
  const auto words = words_up_to(d, moment_len);
  const auto& src = md.can.source;
  const CMatrix root = pos_power(md.can.source_state.rho, cplx(0.5));
  const Index nw = static_cast<Index>(words.size());
  CMatrix s(src.n() * src.n(), nw);
  CMatrix t(m, nw);
  for (Index w = 0; w < nw; ++w) {
    const Word& word = words[static_cast<std::size_t>(w)];
    s.col(w) = vec(CMatrix(word_product(src.v(), word).adjoint() * root));
    t.col(w) = word_product(dual_v, word, WordOrder::Reversed).adjoint() * omega;
  }
  const CMatrix lhs = s.adjoint() * s;
  const CMatrix rhs = t.adjoint() * t;
  dd.duality = (lhs - rhs).cwiseAbs().maxCoeff();
  return dd;
}

DualSystem dual_popescu(const ModularData& md, double tol) {
  DualSystem out{md.dual_v, dual_diagnostics(md, md.dual_v)};
  const auto& dg = out.diagnostics;
  if (dg.sum > tol) throw ConsistencyError("dual_popescu: sum_k v~_k v~_k^* != I (" + std::to_string(dg.sum) + ")");
  if (dg.commutant > tol) throw ConsistencyError("dual_popescu: dual elements leave the commutant (" + std::to_string(dg.commutant) + ")");
  if (dg.vacuum > tol) throw ConsistencyError("dual_popescu: v~_I^* Omega != v_{rev I}^* Omega (" + std::to_string(dg.vacuum) + ")");
  if (dg.duality > tol) throw ConsistencyError("dual_popescu: moment duality fails (" + std::to_string(dg.duality) + ")");
  return out;
}

DualChannel dual_channel(const ModularData& md, double tol) {
  DualChannel dc;
  dc.superop = kraus_superop(md.dual_v);
  dc.unital = unitality_residual(md.dual_v);
  const CVector& omega = md.omega();
  const auto xs = md.can.algebra.basis();
  const auto ys = commutant(md.can.algebra, tol).basis();
  const Index m = md.gns_dim();
  for (const auto& y : ys) {
    const CMatrix ty = unvec(dc.superop * vec(y), m);
    for (const auto& x : xs) {
      const cplx lhs = (y * omega).dot(md.can.base.apply_transfer(x) * omega);
      const cplx rhs = (ty * omega).dot(x * omega);
      dc.kms = std::max(dc.kms, std::abs(lhs - rhs));
    }
  }
  if (dc.unital > tol) throw ConsistencyError("dual_channel: dual channel is not unital (" + std::to_string(dc.unital) + ")");
  if (dc.kms > tol) throw ConsistencyError("dual_channel: KMS duality fails (" + std::to_string(dc.kms) + ")");
  return dc;
}

std::vector<CMatrix> corrupt_dual(const std::vector<CMatrix>& dual_v, Index k) {
  auto out = dual_v;
  CMatrix& w = out.at(static_cast<std::size_t>(k));
  Index br = 0, bc = 0;
  double best = -1;
  for (Index r = 0; r < w.rows(); ++r)
    for (Index c = 0; c < w.cols(); ++c)
      if (std::abs(w(r, c)) > best + 1e-12) {
        best = std::abs(w(r, c));
        br = r;
        bc = c;
      }
  w(br, bc) = -w(br, bc);
  return out;
}

}  // namespace fcs
