#include "fcs/amalgam.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fcs/parallel.hpp"
#include "fcs/state.hpp"

namespace fcs {

double RelationReport::interior_max() const {
  return std::max({isometry, cuntz_sum, tilde_isometry, tilde_cuntz_sum, commute, commute_star, compression, grading});
}

int default_level(Index d) { return d == 2 ? 3 : 2; }

std::size_t raw_dimension(Index d, Index m, int level) {
  std::size_t words = 0, width = 1;
  for (int l = 0; l <= level; ++l, width *= std::size_t(d)) words += width;
  return words * words * std::size_t(m);
}

int default_level(Index d, Index m, std::size_t raw_budget) {
  int level = default_level(d);
  while (level > 1 && raw_dimension(d, m, level) > raw_budget) --level;
  return level;
}

int AmalgamRep::word_id(const Word& w) const {
  int offset = 0, width = 1;
  for (std::size_t len = 0; len < w.size(); ++len) {
    offset += width;
    width *= static_cast<int>(d);
  }
  int code = 0;
  for (int a : w) code = code * static_cast<int>(d) + a;
  return offset + code;
}

Index AmalgamRep::raw_position(int left, int right, int f) const {
  const Index nw = static_cast<Index>(words.size());
  return (Index(left) * nw + Index(right)) * m + f;
}

CMatrix AmalgamRep::level_block(int left_len, int right_len) const {
  std::vector<Index> cols;
  for (Index r = 0; r < raw_dim(); ++r) {
    const RawIndex& ri = raw_index[std::size_t(r)];
    if (int(words[std::size_t(ri.left)].size()) == left_len && int(words[std::size_t(ri.right)].size()) == right_len)
      cols.push_back(r);
  }
  CMatrix out(dim(), Index(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) out.col(Index(c)) = to_quotient.col(cols[c]);
  return out;
}

namespace {

// suffix[a][b] = id of J when words[b] = words[a] J, else -1
std::vector<std::vector<int>> prefix_table(const AmalgamRep& rep) {
  const std::size_t nw = rep.words.size();
  std::vector<std::vector<int>> t(nw, std::vector<int>(nw, -1));
  for (std::size_t a = 0; a < nw; ++a)
    for (std::size_t b = 0; b < nw; ++b) {
      const Word& wa = rep.words[a];
      const Word& wb = rep.words[b];
      if (wa.size() <= wb.size() && std::equal(wa.begin(), wa.end(), wb.begin()))
        t[a][b] = rep.word_id(Word(wb.begin() + std::ptrdiff_t(wa.size()), wb.end()));
    }
  return t;
}

CMatrix realize_star(const AmalgamRep& rep, const std::vector<int>& tail, bool left_chain, int letter,
                     const CMatrix& on_k) {
  // on_k: the operator's action on K (v_k^* or v~_k^*)
  const Index n_raw = rep.raw_dim();
  const Index k = rep.dim();
  CMatrix b = CMatrix::Zero(n_raw, k);
  for (Index r = 0; r < n_raw; ++r) {
    const RawIndex& ri = rep.raw_index[std::size_t(r)];
    const int word = left_chain ? ri.left : ri.right;
    const Word& w = rep.words[std::size_t(word)];
    if (w.empty()) {
      for (Index a = 0; a < rep.m; ++a) {
        const cplx c = on_k(a, ri.f);
        if (c == cplx(0)) continue;
        b.row(rep.raw_position(ri.left, ri.right, int(a))) += c * rep.from_quotient.row(r);
      }
    } else if (w.front() == letter) {
      const int t = tail[std::size_t(word)];
      const Index target = left_chain ? rep.raw_position(t, ri.right, ri.f) : rep.raw_position(ri.left, t, ri.f);
      b.row(target) += rep.from_quotient.row(r);
    }
  }
  return rep.to_quotient * b;
}

}  // namespace

AmalgamRep build_amalgam(const ModularData& md, int level, const AmalgamOptions& opts) {
  return build_amalgam(md, md.dual_v, level, opts);
}

AmalgamRep build_amalgam(const ModularData& md, const std::vector<CMatrix>& dual_v, int level,
                         const AmalgamOptions& opts) {
  if (level < 1) throw PreconditionError("build_amalgam: level must be at least 1", double(level));
  AmalgamRep rep;
  rep.level = level;
  rep.d = static_cast<Index>(md.pi_v().size());
  rep.m = md.gns_dim();
  rep.pi_v = md.pi_v();
  rep.dual_v = dual_v;
  rep.words = words_up_to(int(rep.d), level);
  const std::size_t nw = rep.words.size();
  const std::size_t n_raw = raw_dimension(rep.d, rep.m, level);
  if (n_raw > opts.max_raw)
    throw PreconditionError("build_amalgam: raw dimension exceeds the guard", double(n_raw));
  for (std::size_t l = 0; l < nw; ++l)
    for (std::size_t r = 0; r < nw; ++r)
      for (Index f = 0; f < rep.m; ++f) rep.raw_index.push_back({int(l), int(r), int(f)});

  std::vector<CMatrix> vw, tw;
  for (const auto& w : rep.words) {
    vw.push_back(word_product(rep.pi_v, w));
    tw.push_back(word_product(rep.dual_v, w));
  }
  const auto pre = prefix_table(rep);

  // <(A,B,f), (C,D,g)>: nonzero only when A, C and B, D are prefix related.
  const Index m = rep.m;
  rep.gram = CMatrix::Zero(Index(n_raw), Index(n_raw));
  parallel_for(nw * nw, [&](std::size_t row_block) {
    const std::size_t l1 = row_block / nw, r1 = row_block % nw;
    for (std::size_t l2 = 0; l2 < nw; ++l2) {
      const int s1 = pre[l1][l2], s2 = pre[l2][l1];
      if (s1 < 0 && s2 < 0) continue;
      for (std::size_t r2 = 0; r2 < nw; ++r2) {
        const int t1 = pre[r1][r2], t2 = pre[r2][r1];
        if (t1 < 0 && t2 < 0) continue;
        CMatrix block;
        if (s1 >= 0 && t1 >= 0) {
          block = tw[std::size_t(s1)] * vw[std::size_t(t1)];
        } else if (s2 >= 0 && t1 >= 0) {
          block = tw[std::size_t(s2)].adjoint() * vw[std::size_t(t1)];
        } else if (s1 >= 0 && t2 >= 0) {
          block = vw[std::size_t(t2)].adjoint() * tw[std::size_t(s1)];
        } else {
          block = (tw[std::size_t(s2)] * vw[std::size_t(t2)]).adjoint();
        }
        rep.gram.block(rep.raw_position(int(l1), int(r1), 0), rep.raw_position(int(l2), int(r2), 0), m, m) = block;
      }
    }
  });

  rep.gram_hermiticity = hermiticity_residual(rep.gram);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(CMatrix((rep.gram + rep.gram.adjoint()) / 2.0));
  const RVector& lam = es.eigenvalues();
  rep.gram_min_eig = lam(0);
  if (opts.strict && rep.gram_min_eig < opts.negativity_abort)
    throw ConsistencyError("build_amalgam: Gram matrix is not positive (min eigenvalue " + std::to_string(rep.gram_min_eig) + ")");
  const double cut = opts.kernel_tol * lam(lam.size() - 1);
  Index first = 0;
  while (first < lam.size() && lam(first) <= cut) ++first;
  const Index k = lam.size() - first;
  const CMatrix wk = es.eigenvectors().rightCols(k);
  const RVector root = lam.tail(k).cwiseSqrt();
  rep.to_quotient = root.asDiagonal() * wk.adjoint();
  rep.from_quotient = wk * root.cwiseInverse().asDiagonal();

  std::vector<int> tail(nw, -1);
  for (std::size_t w = 1; w < nw; ++w) tail[w] = rep.word_id(Word(rep.words[w].begin() + 1, rep.words[w].end()));
  for (Index a = 0; a < rep.d; ++a) {
    rep.s_star.push_back(realize_star(rep, tail, false, int(a), rep.pi_v[std::size_t(a)].adjoint()));
    rep.st_star.push_back(realize_star(rep, tail, true, int(a), rep.dual_v[std::size_t(a)].adjoint()));
    rep.s.push_back(rep.s_star.back().adjoint());
    rep.st.push_back(rep.st_star.back().adjoint());
  }

  rep.k_frame = CMatrix(k, m);
  for (Index f = 0; f < m; ++f) rep.k_frame.col(f) = rep.to_quotient.col(rep.raw_position(0, 0, int(f)));
  rep.p = rep.k_frame * rep.k_frame.adjoint();
  rep.omega = rep.k_frame * md.omega();

  std::vector<Index> inner;
  for (Index r = 0; r < rep.raw_dim(); ++r) {
    const RawIndex& ri = rep.raw_index[std::size_t(r)];
    if (int(rep.words[std::size_t(ri.left)].size()) < level && int(rep.words[std::size_t(ri.right)].size()) < level) inner.push_back(r);
  }
  CMatrix span(k, Index(inner.size()));
  for (std::size_t c = 0; c < inner.size(); ++c) span.col(Index(c)) = rep.to_quotient.col(inner[c]);
  rep.interior = OperatorSubspace::range_basis(span, 1e-9);
  return rep;
}

namespace {

// Frobenius norm: an upper bound for the operator norm on the frame's span.
double residual_on(const CMatrix& applied) { return applied.cols() == 0 ? 0.0 : applied.norm(); }

}  // namespace

RelationReport check_relations(const AmalgamRep& rep) {
  RelationReport out;
  const CMatrix& q = rep.interior;
  const Index k = rep.dim();
  const auto d = std::size_t(rep.d);
  std::vector<CMatrix> sq, tq, tsq;
  CMatrix sum_q = CMatrix::Zero(k, q.cols()), tsum_q = CMatrix::Zero(k, q.cols());
  for (std::size_t i = 0; i < d; ++i) {
    sq.push_back(rep.s[i] * q);
    tq.push_back(rep.st[i] * q);
    tsq.push_back(rep.st_star[i] * q);
    sum_q += rep.s[i] * (rep.s_star[i] * q);
    tsum_q += rep.st[i] * tsq.back();
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const CMatrix delta = (i == j) ? q : CMatrix(CMatrix::Zero(k, q.cols()));
      out.isometry = std::max(out.isometry, residual_on(rep.s_star[i] * sq[j] - delta));
      out.tilde_isometry = std::max(out.tilde_isometry, residual_on(rep.st_star[i] * tq[j] - delta));
      out.commute = std::max(out.commute, residual_on(rep.s[i] * tq[j] - rep.st[j] * sq[i]));
      out.commute_star = std::max(out.commute_star, residual_on(rep.s[i] * tsq[j] - rep.st_star[j] * sq[i]));
    }
    const CMatrix& ss = rep.s_star[i];
    const CMatrix& ts = rep.st_star[i];
    const CMatrix& kf = rep.k_frame;
    out.compression = std::max({out.compression, CMatrix(kf * (kf.adjoint() * (ss * kf)) - ss * kf).norm(),
                                CMatrix(kf * (kf.adjoint() * (ts * kf)) - ts * kf).norm(),
                                CMatrix(kf.adjoint() * ss * kf - rep.pi_v[i].adjoint()).norm(),
                                CMatrix(kf.adjoint() * ts * kf - rep.dual_v[i].adjoint()).norm()});
  }
  out.cuntz_sum = residual_on(sum_q - q);
  out.tilde_cuntz_sum = residual_on(tsum_q - q);
  CMatrix sum = CMatrix::Zero(k, k), tsum = CMatrix::Zero(k, k);
  for (std::size_t i = 0; i < d; ++i) {
    sum += rep.s[i] * rep.s_star[i];
    tsum += rep.st[i] * rep.st_star[i];
  }
  out.boundary_cuntz_sum = CMatrix(sum - CMatrix::Identity(k, k)).norm();
  out.boundary_tilde_cuntz_sum = CMatrix(tsum - CMatrix::Identity(k, k)).norm();

  // grading: S_i maps levels (a, b) into the span of levels (a, b + 1), likewise S~ on the left.
  for (int a = 0; a <= rep.level; ++a)
    for (int b = 0; b < rep.level; ++b) {
      const CMatrix src = rep.level_block(a, b);
      const CMatrix dst = OperatorSubspace::range_basis(rep.level_block(a, b + 1), 1e-9);
      const CMatrix src_t = rep.level_block(b, a);
      const CMatrix dst_t = OperatorSubspace::range_basis(rep.level_block(b + 1, a), 1e-9);
      for (std::size_t i = 0; i < d; ++i) {
        const CMatrix img = rep.s[i] * src;
        out.grading = std::max(out.grading, (img - dst * (dst.adjoint() * img)).norm());
        const CMatrix img_t = rep.st[i] * src_t;
        out.grading = std::max(out.grading, (img_t - dst_t * (dst_t.adjoint() * img_t)).norm());
      }
    }
  return out;
}

double moment_check(const AmalgamRep& rep, const PopescuSystem& sys, const DensityState& rho, int window) {
  if (window > rep.level - 1) throw PreconditionError("moment_check: window exceeds level - 1", double(window));
  const auto words = words_up_to(int(rep.d), window);
  auto apply_word = [](const std::vector<CMatrix>& ops, const Word& w, CVector x) {
    for (auto it = w.rbegin(); it != w.rend(); ++it) x = ops[std::size_t(*it)] * x;
    return x;
  };
  auto apply_word_star = [](const std::vector<CMatrix>& stars, const Word& w, CVector x) {
    for (int a : w) x = stars[std::size_t(a)] * x;  // S_w^* = S_{w_m}^* ... S_{w_1}^*
    return x;
  };
  double worst = 0;
  for (const auto& lb : words)
    for (const auto& lj : words) {
      if (lb.size() != lj.size()) continue;
      for (const auto& ri : words)
        for (const auto& rj : words) {
          if (ri.size() != rj.size()) continue;
          CVector x = apply_word_star(rep.s_star, rj, rep.omega);
          x = apply_word(rep.s, ri, x);
          x = apply_word_star(rep.st_star, lj, x);
          x = apply_word(rep.st, lb, x);
          const cplx lhs = rep.omega.dot(x);
          // sites ..., -1, 0 carry the left words read outward, sites 1, 2, ... the right words
          LocalObservable obs;
          for (std::size_t t = lb.size(); t-- > 0;) obs.site_ops.push_back(matrix_unit(rep.d, lb[t], lj[t]));
          for (std::size_t t = 0; t < ri.size(); ++t) obs.site_ops.push_back(matrix_unit(rep.d, ri[t], rj[t]));
          const cplx rhs = local_expectation(sys, rho, obs);
          worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
  return worst;
}

ShiftReport shift_unitary(const AmalgamRep& rep) {
  ShiftReport out;
  const Index k = rep.dim();
  const auto d = std::size_t(rep.d);
  out.v = CMatrix::Zero(k, k);
  for (std::size_t i = 0; i < d; ++i) out.v += rep.s[i] * rep.st_star[i];
  const CMatrix vstar = out.v.adjoint();
  const CMatrix& q = rep.interior;
  const CMatrix vsq = vstar * q;
  out.isometry = residual_on(vstar * (out.v * q) - q);
  out.co_isometry = residual_on(out.v * vsq - q);
  out.vacuum = (out.v * rep.omega - rep.omega).norm();
  out.covariance = residual_on(out.v * vsq - q);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      // site 0 -> site 1
      const CMatrix x0 = rep.st[i] * (rep.st_star[j] * vsq);
      const CMatrix x1q = rep.s[i] * (rep.s_star[j] * q);
      out.covariance = std::max(out.covariance, residual_on(out.v * x0 - x1q));
      // site 1 -> site 2
      const CMatrix x1v = rep.s[i] * (rep.s_star[j] * vsq);
      CMatrix x2q = CMatrix::Zero(k, q.cols());
      for (std::size_t a = 0; a < d; ++a) x2q += rep.s[a] * (rep.s[i] * (rep.s_star[j] * (rep.s_star[a] * q)));
      out.covariance = std::max(out.covariance, residual_on(out.v * x1v - x2q));
    }
  return out;
}

std::vector<double> lambda_profile(const AmalgamRep& rep, const CVector& xi) {
  std::vector<double> out;
  std::vector<CVector> layer{xi};
  for (int n = 0; n <= rep.level; ++n) {
    double total = 0;
    for (const auto& y : layer) total += (rep.p * y).squaredNorm();
    out.push_back(total);
    std::vector<CVector> next;
    for (const auto& y : layer)
      for (Index a = 0; a < rep.d; ++a) next.push_back(rep.s_star[std::size_t(a)] * y);
    layer = std::move(next);
  }
  return out;
}

}  // namespace fcs
