#pragma once

// Popescu systems: Kraus families {v_k} with sum_k v_k v_k^* = I, their
// invariant states, support compression and the GNS canonical form.

#include <vector>

#include "fcs/matcore.hpp"

namespace fcs {

/// A word I = (i_1, ..., i_m) over the letters 0..d-1.
using Word = std::vector<int>;

/// Order in which a word is multiplied out. Forward gives
/// v_I = v_{i_1} v_{i_2} ... v_{i_m}, the convention under which word moments
/// agree with nested E-map evaluation; Reversed gives v_{i_m} ... v_{i_1}.
enum class WordOrder { Forward, Reversed };

/// All words of length 0..max_len, ordered by length then lexicographically.
std::vector<Word> words_up_to(int d, int max_len);

CMatrix word_product(const std::vector<CMatrix>& v, const Word& w, WordOrder order = WordOrder::Forward);

/// Tr(rho v_I v_J^*).
cplx word_moment(const std::vector<CMatrix>& v, const CMatrix& rho, const Word& i, const Word& j,
                 WordOrder order = WordOrder::Forward);

class PopescuSystem {
 public:
  PopescuSystem() = default;
  /// Requires at least two letters, all square of a common size.
  explicit PopescuSystem(std::vector<CMatrix> v);

  Index n() const { return v_.empty() ? 0 : v_.front().rows(); }
  Index d() const { return static_cast<Index>(v_.size()); }
  const std::vector<CMatrix>& v() const { return v_; }
  const CMatrix& operator[](Index k) const { return v_[static_cast<std::size_t>(k)]; }

  /// Superoperator of tau(x) = sum_k v_k x v_k^*.
  CMatrix transfer() const { return kraus_superop(v_); }
  /// Superoperator of the predual sigma -> sum_k v_k^* sigma v_k.
  CMatrix predual() const { return kraus_predual_superop(v_); }
  CMatrix apply_transfer(const CMatrix& x) const;

 private:
  std::vector<CMatrix> v_;
};

struct ValidationReport {
  double residual = 0;  // || sum v v^* - I ||_F
  std::vector<double> op_norms;
  bool ok = false;
};

ValidationReport validate(const PopescuSystem& sys, double tol = kDefaultTol);

struct DensityState {
  CMatrix rho;
};

/// || sum_k v_k^* rho v_k - rho ||_F.
double invariance_residual(const PopescuSystem& sys, const CMatrix& rho);

struct InvariantStates {
  std::vector<DensityState> states;  // one per block of the centre decomposition
  Index multiplicity = 0;            // dimension of the predual eigenspace at 1
  DensityState barycenter;           // Cesaro limit of I/n, of maximal support
};

InvariantStates invariant_states(const PopescuSystem& sys, double tol = kDefaultTol);

struct Compression {
  PopescuSystem sys;
  DensityState rho;
  CMatrix isometry;  // n x r, columns span the support of rho
};

Compression compress_to_support(const PopescuSystem& sys, const DensityState& rho, double tol = kDefaultTol);

/// The system transported to the GNS space of (M, phi), M the algebra
/// generated by v and phi = Tr(rho .). The GNS basis starts with the identity,
/// so Omega is the first coordinate vector.
struct CanonicalSystem {
  PopescuSystem base;                // pi(v_k)
  CVector omega;
  OperatorSubspace algebra;          // pi(M)
  PopescuSystem source;              // the faithful input system
  DensityState source_state;
  OperatorSubspace source_algebra;   // M acting on the input space
  std::vector<CMatrix> gns_basis;    // phi-orthonormal basis of M, gns_basis[0] = I

  Index gns_dim() const { return omega.size(); }
};

CanonicalSystem canonicalize(const PopescuSystem& sys, const DensityState& rho, double tol = kDefaultTol);

/// pi(x) for x in M.
CMatrix represent(const CanonicalSystem& can, const CMatrix& x);

}  // namespace fcs
