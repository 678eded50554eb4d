#include "fcs/popescu.hpp"

#include <cmath>
#include <string>

#include "fcs/algebra.hpp"

namespace fcs {

std::vector<Word> words_up_to(int d, int max_len) {
  std::vector<Word> out{Word{}};
  std::size_t begin = 0;
  for (int len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t w = begin; w < end; ++w) {
      for (int a = 0; a < d; ++a) {
        Word next = out[w];
        next.push_back(a);
        out.push_back(std::move(next));
      }
    }
    begin = end;
  }
  return out;
}

CMatrix word_product(const std::vector<CMatrix>& v, const Word& w, WordOrder order) {
  const Index n = v.front().rows();
  CMatrix p = CMatrix::Identity(n, n);
  if (order == WordOrder::Forward) {
    for (int a : w) p = p * v[static_cast<std::size_t>(a)];
  } else {
    for (auto it = w.rbegin(); it != w.rend(); ++it) p = p * v[static_cast<std::size_t>(*it)];
  }
  return p;
}

cplx word_moment(const std::vector<CMatrix>& v, const CMatrix& rho, const Word& i, const Word& j, WordOrder order) {
  return (rho * word_product(v, i, order) * word_product(v, j, order).adjoint()).trace();
}

PopescuSystem::PopescuSystem(std::vector<CMatrix> v) : v_(std::move(v)) {
  if (v_.size() < 2) throw ValidationError("PopescuSystem: at least two letters are required");
  const Index n = v_.front().rows();
  if (n < 1) throw ValidationError("PopescuSystem: empty operators");
  for (const auto& m : v_) {
    if (m.rows() != n || m.cols() != n) throw ValidationError("PopescuSystem: operators must be square of a common size");
  }
}

CMatrix PopescuSystem::apply_transfer(const CMatrix& x) const {
  CMatrix out = CMatrix::Zero(x.rows(), x.cols());
  for (const auto& k : v_) out += k * x * k.adjoint();
  return out;
}

ValidationReport validate(const PopescuSystem& sys, double tol) {
  ValidationReport r;
  r.residual = unitality_residual(sys.v());
  for (const auto& k : sys.v()) r.op_norms.push_back(opnorm(k));
  r.ok = r.residual <= tol;
  return r;
}

double invariance_residual(const PopescuSystem& sys, const CMatrix& rho) {
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : sys.v()) out += k.adjoint() * rho * k;
  return (out - rho).norm();
}

namespace {

CMatrix hermitize(const CMatrix& x) { return (x + x.adjoint()) / 2.0; }

CMatrix normalized_state(const CMatrix& x) {
  const CMatrix h = hermitize(x);
  return h / h.trace().real();
}

}  // namespace

InvariantStates invariant_states(const PopescuSystem& sys, double tol) {
  const Index n = sys.n();
  const Index n2 = n * n;
  const CMatrix shifted = sys.predual() - CMatrix::Identity(n2, n2);
  const CMatrix right = kernel_basis(shifted);
  const CMatrix left = kernel_basis(CMatrix(shifted.adjoint()));
  if (right.cols() == 0 || right.cols() != left.cols())
    throw ConsistencyError("invariant_states: eigenvalue 1 of the predual channel is missing or not semisimple");

  InvariantStates out;
  out.multiplicity = right.cols();
  // Spectral projector onto the eigenvalue-1 eigenspace: the Cesaro limit.
  const CMatrix overlap = left.adjoint() * right;
  const CMatrix proj = right * overlap.fullPivLu().solve(left.adjoint());
  out.barycenter.rho = normalized_state(unvec(proj * vec(CMatrix(CMatrix::Identity(n, n) / double(n))), n));
  if (herm_eig(out.barycenter.rho).values(0) < -std::sqrt(tol))
    throw ConsistencyError("invariant_states: averaged state is not positive");

  if (out.multiplicity == 1) {
    out.states.push_back(out.barycenter);
    return out;
  }

  // Split along the centre of the algebra generated on the maximal support.
  const Compression comp = compress_to_support(sys, out.barycenter, tol);
  const OperatorSubspace m = generated_algebra(comp.sys.n(), comp.sys.v());
  const CenterReport cr = center_and_factor(m, tol);
  if (cr.is_factor) {
    out.states.push_back(out.barycenter);
    return out;
  }
  const Index r = comp.sys.n();
  CMatrix generic = CMatrix::Zero(r, r);
  const auto zs = cr.center.basis();
  for (std::size_t j = 0; j < zs.size(); ++j) {
    const double a = 1.0 / (1.0 + std::sqrt(2.0) * double(j + 1));
    const double b = 1.0 / (2.0 + std::sqrt(3.0) * double(j + 1));
    generic += a * hermitize(zs[j]) + b * hermitize(cplx(0, -1) * zs[j]);
  }
  const HermEig eig = herm_eig(generic);
  const double spread = eig.values(r - 1) - eig.values(0);
  Index start = 0;
  for (Index i = 1; i <= r; ++i) {
    if (i == r || eig.values(i) - eig.values(i - 1) > 1e-6 * (1.0 + spread)) {
      const CMatrix u = eig.vectors.middleCols(start, i - start);
      const CMatrix q = u * u.adjoint();
      const CMatrix block = comp.isometry * (q * comp.rho.rho * q) * comp.isometry.adjoint();
      out.states.push_back({normalized_state(block)});
      start = i;
    }
  }
  return out;
}

Compression compress_to_support(const PopescuSystem& sys, const DensityState& rho, double tol) {
  const double inv = invariance_residual(sys, rho.rho);
  if (inv > tol) throw PreconditionError("compress_to_support: state is not invariant", inv);
  const HermEig eig = herm_eig(rho.rho, tol);
  const Index n = sys.n();
  Index first = 0;
  while (first < n && eig.values(first) <= tol) ++first;
  if (first == n) throw PreconditionError("compress_to_support: state has empty support", eig.values(n - 1));
  if (first == 0) return {sys, rho, CMatrix::Identity(n, n)};

  const CMatrix u = eig.vectors.rightCols(n - first);
  std::vector<CMatrix> v;
  for (const auto& k : sys.v()) v.push_back(u.adjoint() * k * u);
  Compression out{PopescuSystem(std::move(v)), {u.adjoint() * rho.rho * u}, u};
  const double res = unitality_residual(out.sys.v());
  if (res > std::sqrt(tol)) throw ConsistencyError("compress_to_support: compressed system is not unital (" + std::to_string(res) + ")");
  return out;
}

CanonicalSystem canonicalize(const PopescuSystem& sys, const DensityState& rho, double tol) {
  const Index n = sys.n();
  const HermEig reig = herm_eig(rho.rho, tol);
  if (reig.values(0) <= tol) throw PreconditionError("canonicalize: state is not faithful, compress to its support first", reig.values(0));
  const double inv = invariance_residual(sys, rho.rho);
  if (inv > tol) throw PreconditionError("canonicalize: state is not invariant", inv);

  CanonicalSystem can;
  can.source = sys;
  can.source_state = rho;
  can.source_algebra = generated_algebra(n, sys.v());
  const auto& r = rho.rho;
  auto phi = [&r](const CMatrix& x) { return (r * x).trace(); };

  // phi-orthonormal basis of M starting from the identity.
  const CMatrix id = CMatrix::Identity(n, n);
  std::vector<CMatrix> centered;
  for (const auto& b : can.source_algebra.basis()) centered.push_back(b - phi(b) * id);
  const Index k = static_cast<Index>(centered.size());
  CMatrix gram(k, k);
  for (Index a = 0; a < k; ++a)
    for (Index b = 0; b < k; ++b) gram(a, b) = phi(CMatrix(centered[a].adjoint() * centered[b]));
  const HermEig geig = herm_eig(gram, 1e-8);
  const Index keep = k - 1;
  if (keep > 0 && geig.values(1) <= tol * std::max(1.0, geig.values(k - 1)))
    throw ConsistencyError("canonicalize: state is not faithful on the generated algebra");
  can.gns_basis.push_back(id);
  for (Index c = 1; c < k; ++c) {
    CMatrix e = CMatrix::Zero(n, n);
    for (Index a = 0; a < k; ++a) e += geig.vectors(a, c) * centered[a];
    can.gns_basis.push_back(e / std::sqrt(geig.values(c)));
  }

  can.omega = CVector::Zero(k);
  can.omega(0) = 1;
  std::vector<CMatrix> pv;
  for (const auto& vk : sys.v()) pv.push_back(represent(can, vk));
  can.base = PopescuSystem(std::move(pv));
  std::vector<CMatrix> images;
  for (const auto& b : can.source_algebra.basis()) images.push_back(represent(can, b));
  can.algebra = OperatorSubspace::span(k, images);
  if (can.algebra.dim() != k) throw ConsistencyError("canonicalize: representation of the algebra is not faithful");
  const double res = unitality_residual(can.base.v());
  if (res > std::sqrt(tol)) throw ConsistencyError("canonicalize: represented system is not unital (" + std::to_string(res) + ")");
  return can;
}

CMatrix represent(const CanonicalSystem& can, const CMatrix& x) {
  const Index k = static_cast<Index>(can.gns_basis.size());
  const CMatrix& r = can.source_state.rho;
  // pi(x)_{ab} = phi(e_a^* x e_b) = Tr(rho e_a^* x e_b)
  CMatrix out(k, k);
  for (Index b = 0; b < k; ++b) {
    const CMatrix xb = x * can.gns_basis[b];
    for (Index a = 0; a < k; ++a) {
      const CMatrix left = r * can.gns_basis[a].adjoint();
      out(a, b) = left.transpose().cwiseProduct(xb).sum();
    }
  }
  return out;
}

}  // namespace fcs
