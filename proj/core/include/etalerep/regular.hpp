#pragma once

#include <map>
#include <string>
#include <vector>

#include "etalerep/koopman.hpp"

namespace etalerep {

// Element of the fiber G_u = { g : s(g) = u } over a depth-truncated point u
// (a finite path standing for its cylinder). The x-leg is word . T^m(u);
// the degree is |word| - m. Kept in minimal form: the word never ends with
// the next base letter it would duplicate.
struct FiberElement {
  int m = 0;
  Path word;  // attaches to T^m(u); empty word allowed

  friend auto operator<=>(const FiberElement& a, const FiberElement& b) = default;
};

// Truncated orthonormal basis of l^2(G_u): elements with m and |word| both
// bounded by the complexity cap. The fiber is discrete, so no refinement
// identifications arise; counting measure gives exact rational matrices.
struct RegularTruncation {
  Path base;  // u, long enough to resolve every prefix comparison
  int complexity = 0;
  std::vector<FiberElement> elements;
  std::map<FiberElement, int> index;
};

RegularTruncation regular_truncation(const DirectedGraph& g, const Path& base, int complexity);

struct RegularMatrix {
  SparseMat mat;  // domain complexity L, codomain complexity L + growth
  RegularTruncation domain;
  RegularTruncation codomain;
};

// Matrix of Ind delta_u(f) from the complexity-L fiber basis into the
// complexity-(L + max path length of f) basis; images are never clipped, so
// norms are honest one-sided compressions. Throws resource_error when the
// base path is too short to resolve the needed comparisons.
RegularMatrix regular_matrix(const DirectedGraph& g, const AlgebraElement& f, const Path& base,
                             int complexity);

}  // namespace etalerep
