#include "etalerep/path.hpp"

#include <algorithm>

#include "etalerep/errors.hpp"

namespace etalerep {

Path Path::empty_at(const DirectedGraph& g, int vertex) {
  if (vertex < 0 || vertex >= g.vertex_count()) throw input_error("empty path at unknown vertex");
  Path p;
  p.range_ = vertex;
  p.source_ = vertex;
  return p;
}

Path Path::of_edges(const DirectedGraph& g, std::vector<int> edges) {
  if (edges.empty()) throw input_error("edge list is empty; use empty_at for trivial paths");
  for (size_t i = 0; i + 1 < edges.size(); ++i)
    if (g.edge(edges[i + 1]).dst != g.edge(edges[i]).src)
      throw input_error("edges do not compose: dst(e_{i+1}) != src(e_i) at position " +
                        std::to_string(i));
  Path p;
  p.range_ = g.edge(edges.front()).dst;
  p.source_ = g.edge(edges.back()).src;
  p.edges_ = std::move(edges);
  return p;
}

Path Path::from_edge_ids(const DirectedGraph& g, const std::vector<std::string>& ids) {
  std::vector<int> edges;
  edges.reserve(ids.size());
  for (const auto& id : ids) {
    int e = g.edge_index(id);
    if (e < 0) throw input_error("unknown edge id: " + id);
    edges.push_back(e);
  }
  return of_edges(g, std::move(edges));
}

Path Path::shifted(const DirectedGraph& g) const {
  if (is_empty()) throw domain_error("shift of an empty path");
  if (length() == 1) return empty_at(g, source_);
  return of_edges(g, std::vector<int>(edges_.begin() + 1, edges_.end()));
}

Path Path::extended(const DirectedGraph& g, int edge) const {
  if (g.edge(edge).dst != source_) throw input_error("extension edge does not attach at source");
  Path p = *this;
  p.edges_.push_back(edge);
  p.source_ = g.edge(edge).src;
  if (p.range_ < 0) p.range_ = g.edge(edge).dst;
  return p;
}

Path Path::concatenated(const DirectedGraph& g, const Path& tail) const {
  (void)g;
  if (tail.range() != source_) throw input_error("paths do not concatenate");
  if (tail.is_empty()) return *this;
  if (is_empty()) return tail;
  Path p = *this;
  p.edges_.insert(p.edges_.end(), tail.edges_.begin(), tail.edges_.end());
  p.source_ = tail.source_;
  return p;
}

bool Path::is_prefix_of(const Path& other) const {
  if (length() > other.length()) return false;
  if (is_empty()) return range_ == other.range_;
  return std::equal(edges_.begin(), edges_.end(), other.edges_.begin());
}

std::string Path::label(const DirectedGraph& g) const {
  if (is_empty()) return "(" + g.vertex_id(range_) + ")";
  std::string s;
  for (size_t i = 0; i < edges_.size(); ++i) {
    if (i) s += ".";
    s += g.edge_id(edges_[i]);
  }
  return s;
}

std::vector<Path> paths_of_length(const DirectedGraph& g, int n) {
  if (n < 0) throw domain_error("negative path length");
  std::vector<Path> level;
  for (int v = 0; v < g.vertex_count(); ++v) level.push_back(Path::empty_at(g, v));
  for (int step = 0; step < n; ++step) {
    std::vector<Path> next;
    for (const Path& p : level)
      for (int e : g.in_edges(p.source())) next.push_back(p.extended(g, e));
    level = std::move(next);
  }
  std::sort(level.begin(), level.end());
  return level;
}

std::vector<Path> refine(const DirectedGraph& g, const Path& alpha, int target_depth) {
  if (target_depth < alpha.length())
    throw domain_error("refinement target depth below the path length");
  std::vector<Path> level = {alpha};
  for (int step = alpha.length(); step < target_depth; ++step) {
    std::vector<Path> next;
    for (const Path& p : level)
      for (int e : g.in_edges(p.source())) next.push_back(p.extended(g, e));
    level = std::move(next);
  }
  std::sort(level.begin(), level.end());
  return level;
}

}  // namespace etalerep
