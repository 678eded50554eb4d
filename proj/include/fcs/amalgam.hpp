#pragma once

// Truncated amalgamated two-sided representation. Raw vectors are triples
// (left word, right word, basis vector of K) of word lengths <= level,
// standing for S~_{left} S_{right} f. The semi-inner product is assembled
// from the prefix rules, the quotient is taken by eigendecomposition of the
// Gram matrix, and operators are realized by their index action.
//
// Word conventions: S_I = S_{i_1} ... S_{i_m} and S~_I = S~_{i_1} ... S~_{i_m};
// both S_k and S~_k prepend their letter to the corresponding word. The
// adjoints S_k^*, S~_k^* map the truncated space into itself and are exact;
// S_k, S~_k are their adjoints within the truncated space and agree with the
// true operators on vectors whose raising word has length <= level - 1.

#include <cstddef>
#include <vector>

#include "fcs/modular.hpp"

namespace fcs {

struct AmalgamOptions {
  double kernel_tol = 1e-9;          // relative Gram eigenvalue cut for the quotient
  double negativity_abort = -1e-6;   // Gram eigenvalues below this abort the build
  bool strict = true;                // false keeps going past negativity (negative controls)
  std::size_t max_raw = 20000;
};

struct RawIndex {
  int left;   // word id
  int right;  // word id
  int f;      // basis vector of K
};

class AmalgamRep {
 public:
  int level = 0;
  Index d = 0;
  Index m = 0;                        // dim K
  std::vector<Word> words;            // ids: position in words_up_to(d, level)
  std::vector<RawIndex> raw_index;
  CMatrix gram;
  double gram_min_eig = 0;
  double gram_hermiticity = 0;
  CMatrix to_quotient;                // k x N
  CMatrix from_quotient;              // N x k, right inverse of to_quotient
  std::vector<CMatrix> s, s_star;     // right chain
  std::vector<CMatrix> st, st_star;   // left chain
  CMatrix p;                          // projection onto K
  CMatrix k_frame;                    // quotient coordinates of (empty, empty, f), f = 0..m-1
  CVector omega;
  CMatrix interior;                   // orthonormal basis of the span of raw vectors of levels <= level-1
  std::vector<CMatrix> pi_v, dual_v;  // the Popescu data on K

  Index dim() const { return to_quotient.rows(); }
  Index raw_dim() const { return static_cast<Index>(raw_index.size()); }
  int word_id(const Word& w) const;
  Index raw_position(int left, int right, int f) const;
  /// Quotient coordinates of the raw vectors at the given word-length pair.
  CMatrix level_block(int left_len, int right_len) const;
};

inline constexpr std::size_t kDefaultRawBudget = 1000;

/// 3 for two letters, 2 otherwise.
int default_level(Index d);
/// default_level(d), lowered (not below 1) until the raw dimension of a
/// system with GNS dimension m fits the budget.
int default_level(Index d, Index m, std::size_t raw_budget = kDefaultRawBudget);
/// (sum_{k <= level} d^k)^2 * m.
std::size_t raw_dimension(Index d, Index m, int level);

AmalgamRep build_amalgam(const ModularData& md, int level, const AmalgamOptions& opts = {});
AmalgamRep build_amalgam(const ModularData& md, const std::vector<CMatrix>& dual_v, int level,
                         const AmalgamOptions& opts = {});

/// Residuals are Frobenius norms of the operator applied to an orthonormal
/// frame, an upper bound for the operator norm on that subspace.
struct RelationReport {
  // interior: vectors supported on levels <= level - 1
  double isometry = 0;        // max || (S_i^* S_j - delta_ij) xi ||
  double cuntz_sum = 0;       // || (sum S_k S_k^* - I) xi ||
  double tilde_isometry = 0;
  double tilde_cuntz_sum = 0;
  double commute = 0;         // max || [S_i, S~_j] xi ||
  double commute_star = 0;    // max || [S_i, S~_j^*] xi ||
  double compression = 0;     // max || P S_i^* P - S_i^* P || and tilde, and agreement with v^*, v~^*
  double grading = 0;         // S_i raises right length, S~_j raises left length
  // boundary: the same Cuntz sums measured on the whole truncated space
  double boundary_cuntz_sum = 0;
  double boundary_tilde_cuntz_sum = 0;

  double interior_max() const;
};

RelationReport check_relations(const AmalgamRep& rep);

/// max | <Omega, S~_Ibar S~_Jbar^* S_I S_J^* Omega> - omega(two-sided matrix unit) |
/// over |Ibar| = |Jbar| <= window, |I| = |J| <= window.
double moment_check(const AmalgamRep& rep, const PopescuSystem& sys, const DensityState& rho, int window);

struct ShiftReport {
  CMatrix v;                 // sum_k S_k S~_k^*
  double isometry = 0;       // interior || (V^* V - I) xi ||
  double co_isometry = 0;    // interior || (V V^* - I) xi ||
  double covariance = 0;     // interior || (V x V^* - theta(x)) xi || for one-site x at sites 0 and 1
  double vacuum = 0;         // || V Omega - Omega ||
};

ShiftReport shift_unitary(const AmalgamRep& rep);

/// <xi, Lambda^n(P) xi> for n = 0..level, Lambda(X) = sum_k S_k X S_k^*.
std::vector<double> lambda_profile(const AmalgamRep& rep, const CVector& xi);

}  // namespace fcs
