#pragma once

// Dense complex linear-algebra substrate: Hermitian eigendecomposition,
// spectral calculus of positive operators, antilinear operators and
// subspaces of matrix space.
//
// Conventions used throughout the library:
//  * inner products are conjugate-linear in the first slot, linear in the
//    second; on matrices <x, y> = Tr(x^* y);
//  * operators on n x n matrices ("superoperators") act on the column-major
//    vectorization, so vec(A X B) = (B^T (x) A) vec(X).

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "fcs/errors.hpp"

namespace fcs {

template <typename Real>
using CMatrixT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVectorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RVectorT = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using cplx = std::complex<double>;
using CMatrix = CMatrixT<double>;
using CVector = CVectorT<double>;
using RVector = RVectorT<double>;
using Index = Eigen::Index;

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kKernelTol = 1e-9;
inline constexpr double kSubspaceTol = 1e-8;

// ---------------------------------------------------------------------------
// vectorization and superoperators

template <typename Derived>
CVectorT<typename Derived::RealScalar> vec(const Eigen::MatrixBase<Derived>& x) {
  using Real = typename Derived::RealScalar;
  const CMatrixT<Real> m = x;
  return Eigen::Map<const CVectorT<Real>>(m.data(), m.size());
}

template <typename Derived>
CMatrixT<typename Derived::RealScalar> unvec(const Eigen::MatrixBase<Derived>& v, Index n) {
  using Real = typename Derived::RealScalar;
  const CVectorT<Real> c = v;
  return Eigen::Map<const CMatrixT<Real>>(c.data(), n, n);
}

/// Superoperator of X -> A X B.
template <typename DA, typename DB>
CMatrixT<typename DA::RealScalar> sandwich_superop(const Eigen::MatrixBase<DA>& a,
                                                   const Eigen::MatrixBase<DB>& b) {
  using Real = typename DA::RealScalar;
  const CMatrixT<Real> bt = b.transpose();
  const CMatrixT<Real> am = a;
  return Eigen::kroneckerProduct(bt, am).eval();
}

/// Superoperator of X -> sum_k K_k X K_k^*.
template <typename Real>
CMatrixT<Real> kraus_superop(const std::vector<CMatrixT<Real>>& kraus) {
  if (kraus.empty()) return {};
  const Index n = kraus.front().rows();
  CMatrixT<Real> t = CMatrixT<Real>::Zero(n * n, n * n);
  for (const auto& k : kraus) t += sandwich_superop(k, k.adjoint());
  return t;
}

/// Superoperator of X -> sum_k K_k^* X K_k (the predual of kraus_superop).
template <typename Real>
CMatrixT<Real> kraus_predual_superop(const std::vector<CMatrixT<Real>>& kraus) {
  if (kraus.empty()) return {};
  const Index n = kraus.front().rows();
  CMatrixT<Real> t = CMatrixT<Real>::Zero(n * n, n * n);
  for (const auto& k : kraus) t += sandwich_superop(k.adjoint(), k);
  return t;
}

/// Superoperator of a linear map given as a callable, by probing matrix units.
template <typename Real>
CMatrixT<Real> superop_of(const std::function<CMatrixT<Real>(const CMatrixT<Real>&)>& map, Index n) {
  CMatrixT<Real> t(n * n, n * n);
  for (Index c = 0; c < n; ++c) {
    for (Index r = 0; r < n; ++r) {
      CMatrixT<Real> e = CMatrixT<Real>::Zero(n, n);
      e(r, c) = 1;
      t.col(c * n + r) = vec(map(e));
    }
  }
  return t;
}

template <typename Derived>
typename Derived::RealScalar hermiticity_residual(const Eigen::MatrixBase<Derived>& h) {
  return (h - h.adjoint()).norm();
}

/// Singular value decomposition: divide and conquer, falling back to
/// one-sided Jacobi when the fast path returns non-finite factors.
template <typename Real>
struct SvdT {
  RVectorT<Real> values;  // descending
  CMatrixT<Real> u;
  CMatrixT<Real> v;
};
using Svd = SvdT<double>;

template <typename Real>
SvdT<Real> svd(const CMatrixT<Real>& m, unsigned int options = 0) {
  SvdT<Real> out;
  Eigen::BDCSVD<CMatrixT<Real>> fast(m, options);
  if (fast.info() == Eigen::Success) {
    out.values = fast.singularValues();
    if (options & (Eigen::ComputeFullU | Eigen::ComputeThinU)) out.u = fast.matrixU();
    if (options & (Eigen::ComputeFullV | Eigen::ComputeThinV)) out.v = fast.matrixV();
    if (out.values.allFinite() && out.u.allFinite() && out.v.allFinite()) return out;
  }
  Eigen::JacobiSVD<CMatrixT<Real>> slow(m, options);
  if (slow.info() != Eigen::Success) throw PreconditionError("svd: input is not finite", double(slow.info()));
  out.values = slow.singularValues();
  out.u = (options & (Eigen::ComputeFullU | Eigen::ComputeThinU)) ? CMatrixT<Real>(slow.matrixU()) : CMatrixT<Real>();
  out.v = (options & (Eigen::ComputeFullV | Eigen::ComputeThinV)) ? CMatrixT<Real>(slow.matrixV()) : CMatrixT<Real>();
  return out;
}

/// Spectral norm.
template <typename Derived>
typename Derived::RealScalar opnorm(const Eigen::MatrixBase<Derived>& a) {
  using Real = typename Derived::RealScalar;
  if (a.size() == 0) return Real(0);
  const CMatrixT<Real> m = a;
  return svd<Real>(m).values(0);
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition

template <typename Real>
struct HermEigT {
  RVectorT<Real> values;   // ascending
  CMatrixT<Real> vectors;  // unitary, columns are eigenvectors
};
using HermEig = HermEigT<double>;

namespace detail {

// First entry of modulus above threshold is made real positive.
template <typename Real>
void fix_phases(CMatrixT<Real>& u) {
  for (Index c = 0; c < u.cols(); ++c) {
    const Real scale = u.col(c).cwiseAbs().maxCoeff();
    for (Index r = 0; r < u.rows(); ++r) {
      const Real a = std::abs(u(r, c));
      if (a > Real(1e-8) * scale) {
        u.col(c) *= std::conj(u(r, c)) / a;
        break;
      }
    }
  }
}

}  // namespace detail

/// Eigendecomposition H = U diag(lambda) U^*, eigenvalues ascending.
/// Input must be Hermitian within tol * max(1, ||H||).
template <typename Derived>
HermEigT<typename Derived::RealScalar> herm_eig(const Eigen::MatrixBase<Derived>& h,
                                                typename Derived::RealScalar tol = kDefaultTol) {
  using Real = typename Derived::RealScalar;
  if (h.rows() != h.cols()) throw PreconditionError("herm_eig: matrix is not square", Real(h.rows() - h.cols()));
  const CMatrixT<Real> m = h;
  const Real res = hermiticity_residual(m);
  if (res > tol * std::max(Real(1), m.norm())) throw PreconditionError("herm_eig: matrix is not Hermitian", res);
  HermEigT<Real> out;
  if (m.size() == 0) return out;
  const CMatrixT<Real> sym = (m + m.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<CMatrixT<Real>> es(sym);
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  detail::fix_phases(out.vectors);
  return out;
}

/// Spectral calculus P^z for a positive semidefinite P.
///
/// Eigenvalues at or below the support threshold are treated as zero:
/// P^0 is the support projection and a negative real part is rejected.
template <typename Derived>
CMatrixT<typename Derived::RealScalar> pos_power(const Eigen::MatrixBase<Derived>& p,
                                                 std::complex<typename Derived::RealScalar> z,
                                                 typename Derived::RealScalar tol = kDefaultTol) {
  using Real = typename Derived::RealScalar;
  const auto eig = herm_eig(p, tol);
  const Index n = eig.values.size();
  const Real scale = n == 0 ? Real(0) : std::max(Real(1), eig.values.cwiseAbs().maxCoeff());
  CVectorT<Real> f(n);
  for (Index i = 0; i < n; ++i) {
    const Real lam = eig.values(i);
    if (lam < -tol * scale) throw PreconditionError("pos_power: operator has a negative eigenvalue", -lam);
    if (lam <= tol * scale) {
      if (z.real() < 0) throw PreconditionError("pos_power: singular operator with negative exponent", lam);
      f(i) = 0;
    } else {
      f(i) = std::exp(z * std::log(lam));
    }
  }
  return eig.vectors * f.asDiagonal() * eig.vectors.adjoint();
}

// ---------------------------------------------------------------------------
// antilinear operators

/// Antilinear operator xi -> mat * conj(xi) in the fixed orthonormal basis.
template <typename Real>
struct AntilinearOpT {
  CMatrixT<Real> mat;

  CVectorT<Real> operator()(const CVectorT<Real>& xi) const { return mat * xi.conjugate(); }

  /// <A^* eta, xi> = <A xi, eta>.
  AntilinearOpT adjoint() const { return {mat.transpose()}; }
};
using AntilinearOp = AntilinearOpT<double>;

/// A o B for antilinear A and B is linear.
template <typename Real>
CMatrixT<Real> compose(const AntilinearOpT<Real>& a, const AntilinearOpT<Real>& b) {
  return a.mat * b.mat.conjugate();
}

/// A o L for antilinear A and linear L.
template <typename Real, typename Derived>
AntilinearOpT<Real> compose(const AntilinearOpT<Real>& a, const Eigen::MatrixBase<Derived>& l) {
  return {a.mat * l.conjugate()};
}

/// L o A for linear L and antilinear A.
template <typename Derived, typename Real>
AntilinearOpT<Real> compose(const Eigen::MatrixBase<Derived>& l, const AntilinearOpT<Real>& a) {
  return {l * a.mat};
}

/// A o L o B for antilinear A, B and linear L (e.g. J x J).
template <typename Real, typename Derived>
CMatrixT<Real> conjugate_by(const AntilinearOpT<Real>& a, const Eigen::MatrixBase<Derived>& l,
                            const AntilinearOpT<Real>& b) {
  return a.mat * l.conjugate() * b.mat.conjugate();
}

// ---------------------------------------------------------------------------
// subspaces of matrix space

/// Linear subspace of n x n matrices with a Hilbert-Schmidt orthonormal basis.
template <typename Real>
class OperatorSubspaceT {
 public:
  using Matrix = CMatrixT<Real>;

  OperatorSubspaceT() = default;
  explicit OperatorSubspaceT(Index ambient) : n_(ambient), frame_(ambient * ambient, 0) {}

  /// Adopts a frame whose columns are orthonormal vectorized matrices.
  static OperatorSubspaceT from_frame(Index ambient, Matrix frame) {
    if (frame.rows() != ambient * ambient) throw PreconditionError("OperatorSubspace: frame has wrong row count", Real(frame.rows()));
    OperatorSubspaceT s(ambient);
    if (frame.cols() > 0) {
      const Real res = (frame.adjoint() * frame - Matrix::Identity(frame.cols(), frame.cols())).norm();
      if (res > Real(1e-8)) throw PreconditionError("OperatorSubspace: frame is not orthonormal", res);
    }
    s.frame_ = std::move(frame);
    return s;
  }

  /// Orthonormal basis of span(gens); directions with singular value below
  /// rank_tol relative to the largest are dropped.
  static OperatorSubspaceT span(Index ambient, const std::vector<Matrix>& gens, Real rank_tol = Real(kKernelTol)) {
    OperatorSubspaceT s(ambient);
    if (gens.empty()) return s;
    Matrix f(ambient * ambient, static_cast<Index>(gens.size()));
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (gens[i].rows() != ambient || gens[i].cols() != ambient)
        throw PreconditionError("OperatorSubspace::span: generator has wrong shape", Real(gens[i].rows()));
      f.col(static_cast<Index>(i)) = vec(gens[i]);
    }
    s.frame_ = range_basis(f, rank_tol);
    return s;
  }

  static OperatorSubspaceT full(Index ambient) {
    return from_frame(ambient, Matrix::Identity(ambient * ambient, ambient * ambient));
  }

  static OperatorSubspaceT scalars(Index ambient) {
    return span(ambient, {Matrix::Identity(ambient, ambient)});
  }

  /// Orthonormal basis of the column range of f.
  static Matrix range_basis(const Matrix& f, Real rank_tol) {
    if (f.cols() == 0) return Matrix(f.rows(), 0);
    const SvdT<Real> dec = svd<Real>(f, Eigen::ComputeThinU);
    const auto& sv = dec.values;
    if (sv.size() == 0 || sv(0) == Real(0)) return Matrix(f.rows(), 0);
    Index rank = 0;
    while (rank < sv.size() && sv(rank) > rank_tol * sv(0)) ++rank;
    Matrix u = dec.u.leftCols(rank);
    detail::fix_phases(u);
    return u;
  }

  Index ambient_dim() const { return n_; }
  Index dim() const { return frame_.cols(); }
  const Matrix& frame() const { return frame_; }

  Matrix element(Index i) const { return unvec(frame_.col(i), n_); }

  std::vector<Matrix> basis() const {
    std::vector<Matrix> b;
    b.reserve(static_cast<std::size_t>(dim()));
    for (Index i = 0; i < dim(); ++i) b.push_back(element(i));
    return b;
  }

  Matrix project(const Matrix& x) const { return unvec(frame_ * (frame_.adjoint() * vec(x)), n_); }

  /// ||x - proj(x)||_HS.
  Real distance(const Matrix& x) const { return (x - project(x)).norm(); }

  /// Largest distance of an adjoint of a basis element from the subspace.
  Real star_residual() const {
    Real r = 0;
    for (Index i = 0; i < dim(); ++i) r = std::max(r, distance(element(i).adjoint()));
    return r;
  }

 private:
  Index n_ = 0;
  Matrix frame_;
};
using OperatorSubspace = OperatorSubspaceT<double>;

/// Orthonormal basis of the kernel of a matrix acting on C^cols; singular
/// values <= kernel_tol * max(1, sigma_max) count as zero, so a matrix that is
/// zero up to rounding has the whole space as kernel.
template <typename Real>
CMatrixT<Real> kernel_basis(const CMatrixT<Real>& a, Real kernel_tol = Real(kKernelTol)) {
  const Index cols = a.cols();
  if (cols == 0) return CMatrixT<Real>(0, 0);
  CMatrixT<Real> sq;
  if (a.rows() > cols) {
    Eigen::HouseholderQR<CMatrixT<Real>> qr(a);
    sq = qr.matrixQR().topRows(cols).template triangularView<Eigen::Upper>();
  } else {
    sq = CMatrixT<Real>::Zero(cols, cols);
    sq.topRows(a.rows()) = a;
  }
  const SvdT<Real> dec = svd<Real>(sq, Eigen::ComputeFullV);
  const auto& sv = dec.values;
  const Real scale = std::max(Real(1), sv.size() > 0 ? sv(0) : Real(0));
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > kernel_tol * scale) ++rank;
  CMatrixT<Real> k = dec.v.rightCols(cols - rank);
  detail::fix_phases(k);
  return k;
}

/// Joint kernel of a family of superoperators acting on n x n matrices.
template <typename Real>
OperatorSubspaceT<Real> solve_linear_space(Index n, const std::vector<CMatrixT<Real>>& constraints,
                                           Real kernel_tol = Real(kKernelTol)) {
  if (constraints.empty()) return OperatorSubspaceT<Real>::full(n);
  Index rows = 0;
  for (const auto& c : constraints) {
    if (c.cols() != n * n) throw PreconditionError("solve_linear_space: constraint has wrong column count", Real(c.cols()));
    rows += c.rows();
  }
  CMatrixT<Real> stacked(rows, n * n);
  Index r = 0;
  for (const auto& c : constraints) {
    stacked.middleRows(r, c.rows()) = c;
    r += c.rows();
  }
  return OperatorSubspaceT<Real>::from_frame(n, kernel_basis(stacked, kernel_tol));
}

/// Callable form of solve_linear_space.
template <typename Real>
OperatorSubspaceT<Real> solve_linear_space(
    Index n, const std::vector<std::function<CMatrixT<Real>(const CMatrixT<Real>&)>>& maps,
    Real kernel_tol = Real(kKernelTol)) {
  std::vector<CMatrixT<Real>> sup;
  sup.reserve(maps.size());
  for (const auto& m : maps) sup.push_back(superop_of<Real>(m, n));
  return solve_linear_space(n, sup, kernel_tol);
}

/// ||(I - P_outer) Q_inner||_2: zero iff inner is contained in outer.
template <typename Real>
Real containment_residual(const OperatorSubspaceT<Real>& outer, const OperatorSubspaceT<Real>& inner) {
  if (outer.ambient_dim() != inner.ambient_dim())
    throw PreconditionError("containment_residual: ambient dimension mismatch", Real(outer.ambient_dim() - inner.ambient_dim()));
  if (inner.dim() == 0) return Real(0);
  const CMatrixT<Real> rest = inner.frame() - outer.frame() * (outer.frame().adjoint() * inner.frame());
  return opnorm(rest);
}

template <typename Real>
struct SubspaceComparisonT {
  bool equal = false;
  Real max_angle = 0;  // largest principal angle, radians
  Real residual = 0;   // max of the two containment residuals
};
using SubspaceComparison = SubspaceComparisonT<double>;

template <typename Real>
SubspaceComparisonT<Real> subspace_equal(const OperatorSubspaceT<Real>& a, const OperatorSubspaceT<Real>& b,
                                         Real tol = Real(kSubspaceTol)) {
  if (a.ambient_dim() != b.ambient_dim())
    throw PreconditionError("subspace_equal: ambient dimension mismatch", Real(a.ambient_dim() - b.ambient_dim()));
  SubspaceComparisonT<Real> out;
  out.residual = std::max(containment_residual(a, b), containment_residual(b, a));
  if (a.dim() != b.dim()) {
    out.max_angle = std::numbers::pi_v<Real> / 2;
  } else if (a.dim() > 0) {
    const CMatrixT<Real> overlap = a.frame().adjoint() * b.frame();
    const Real cmin = std::clamp(svd<Real>(overlap).values.minCoeff(), Real(0), Real(1));
    out.max_angle = std::acos(cmin);
  }
  out.equal = a.dim() == b.dim() && out.residual <= tol;
  return out;
}

/// A intersect B: directions of A whose principal angle to B is below
/// sin_tol (singular values of (I - P_B) Q_A are the sines).
template <typename Real>
OperatorSubspaceT<Real> intersect(const OperatorSubspaceT<Real>& a, const OperatorSubspaceT<Real>& b,
                                  Real sin_tol = Real(1e-7)) {
  if (a.ambient_dim() != b.ambient_dim())
    throw PreconditionError("intersect: ambient dimension mismatch", Real(a.ambient_dim() - b.ambient_dim()));
  if (a.dim() == 0 || b.dim() == 0) return OperatorSubspaceT<Real>(a.ambient_dim());
  const CMatrixT<Real> rest = a.frame() - b.frame() * (b.frame().adjoint() * a.frame());
  const SvdT<Real> dec = svd<Real>(rest, Eigen::ComputeFullV);
  const auto& sv = dec.values;
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > sin_tol) ++rank;
  const CMatrixT<Real> k = dec.v.rightCols(a.dim() - rank);
  CMatrixT<Real> f = a.frame() * k;
  f = OperatorSubspaceT<Real>::range_basis(f, Real(1e-6));
  return OperatorSubspaceT<Real>::from_frame(a.ambient_dim(), std::move(f));
}

}  // namespace fcs
