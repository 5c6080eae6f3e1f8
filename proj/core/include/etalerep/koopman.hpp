#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "etalerep/measures.hpp"
#include "etalerep/sparse.hpp"
#include "etalerep/symbolic.hpp"

namespace etalerep {

// Orthonormal cylinder basis of level `depth`: positive-measure paths alpha
// with |alpha| = depth, each standing for chi_alpha / sqrt(mu(Z(alpha))).
struct CylinderBasis {
  int depth = 0;
  std::vector<Path> paths;
  std::map<Path, int> index;

  int find(const Path& p) const {
    auto it = index.find(p);
    return it == index.end() ? -1 : it->second;
  }
};

CylinderBasis cylinder_basis(const DirectedGraph& g, const MarkovWeights& w, int depth);

// Exact realization of kappa(f) out of level `domain_depth`, graded by
// degree: the degree-k part maps level L to level L+k. With the
// measure-ratio cocycle every single-symbol block is a partial permutation
// scaled by the symbol coefficient, so all blocks are exact rational.
struct KoopmanOp {
  int domain_depth = 0;
  std::map<int, SparseMat> blocks;  // degree -> matrix into level domain_depth+degree

  bool is_zero() const;
  // Single matrix; throws when f mixes degrees.
  const SparseMat& single_block() const;
};

// headroom declares extra levels planned for later compositions; the call
// fails with the minimal sufficient depth when domain_depth cannot host the
// symbols plus that budget.
KoopmanOp koopman_matrix(const DirectedGraph& g, const MarkovWeights& w, const AlgebraElement& f,
                         int domain_depth, int headroom = 0);

// kappa(f) applied after `inner`, realized exactly; equals
// koopman_matrix(convolve(f, g_elem)) on the same domain when headroom holds.
KoopmanOp compose(const DirectedGraph& g, const MarkovWeights& w, const AlgebraElement& f,
                  const KoopmanOp& inner);

KoopmanOp koopman_sum(const KoopmanOp& a, const KoopmanOp& b);

struct IdentityCheck {
  std::string name;
  bool pass = true;
  std::string witness;  // first failing entry, when any
};

struct CkReport {
  bool pass = true;
  std::vector<IdentityCheck> checks;
};

// Exact rational verification at level `depth` of: P_v* = P_v = P_v^2,
// sum_v P_v = I, S_e* S_e = P_{s(e)}, sum_{dst(e)=v} S_e S_e* = P_v.
CkReport verify_cuntz_krieger(const DirectedGraph& g, const MarkovWeights& w, int depth);

struct KernelMismatch {
  BisectionSymbol symbol;
  bool matrix_zero = false;
  bool source_in_h = false;
};

struct KernelReport {
  bool pass = true;
  long symbols_checked = 0;
  std::vector<KernelMismatch> mismatches;
};

// With the auto-constructed weights vanishing on H, checks that the Koopman
// matrix of every symbol with |alpha|,|beta| <= depth is zero exactly when
// the common source vertex lies in H. H must satisfy the ideal-regime
// closures (hereditary+saturated on the edge-reversed graph).
KernelReport kernel_ideal(const DirectedGraph& g, const VertexSet& H, int depth);

}  // namespace etalerep
