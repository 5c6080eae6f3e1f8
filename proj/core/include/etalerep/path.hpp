#pragma once

#include <compare>
#include <string>
#include <vector>

#include "etalerep/graph.hpp"

namespace etalerep {

// Finite path e1 e2 ... ek with dst(e_{i+1}) = src(e_i). The empty path
// carries its vertex. range() = dst(e1) is the vertex the cylinder Z(path)
// is based at; source() = src(ek) is where extensions attach.
class Path {
 public:
  Path() = default;
  static Path empty_at(const DirectedGraph& g, int vertex);
  static Path of_edges(const DirectedGraph& g, std::vector<int> edges);
  static Path from_edge_ids(const DirectedGraph& g, const std::vector<std::string>& ids);

  int length() const { return static_cast<int>(edges_.size()); }
  bool is_empty() const { return edges_.empty(); }
  const std::vector<int>& edges() const { return edges_; }
  int range() const { return range_; }
  int source() const { return source_; }

  // Removes the first edge; length-1 paths shrink to the empty path at
  // their source vertex.
  Path shifted(const DirectedGraph& g) const;

  // Appends one edge e with dst(e) = source(); the refinement step.
  Path extended(const DirectedGraph& g, int edge) const;

  // Concatenation this * tail, defined when tail.range() == source().
  Path concatenated(const DirectedGraph& g, const Path& tail) const;

  bool is_prefix_of(const Path& other) const;

  std::string label(const DirectedGraph& g) const;

  friend auto operator<=>(const Path& a, const Path& b) = default;

 private:
  std::vector<int> edges_;
  int range_ = -1;
  int source_ = -1;
};

// All composable edge sequences of length n, ordered lexicographically by
// edge index (edge indices follow sorted edge ids). n = 0 gives one empty
// path per vertex in vertex order.
std::vector<Path> paths_of_length(const DirectedGraph& g, int n);

// Extensions of alpha to the target depth; their cylinders partition
// Z(alpha). Throws domain_error when target < |alpha|.
std::vector<Path> refine(const DirectedGraph& g, const Path& alpha, int target_depth);

}  // namespace etalerep
