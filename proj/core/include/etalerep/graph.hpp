#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace etalerep {

// Finite directed graph with opaque string ids. Convention used everywhere:
// src(e) is the path-space "s(e)" and dst(e) is "r(e)"; a path e1 e2 ... ek
// requires dst(e_{i+1}) = src(e_i), so cylinders are based at dst(e1) and
// infinite paths always extend through src.
struct Edge {
  std::string id;
  int src = -1;
  int dst = -1;
};

class DirectedGraph {
 public:
  DirectedGraph() = default;
  DirectedGraph(std::vector<std::string> vertex_ids,
                std::vector<std::tuple<std::string, std::string, std::string>> edge_triples);

  int vertex_count() const { return static_cast<int>(vertex_ids_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  const std::string& vertex_id(int v) const { return vertex_ids_[v]; }
  const Edge& edge(int e) const { return edges_[e]; }
  const std::string& edge_id(int e) const { return edges_[e].id; }

  int vertex_index(const std::string& id) const;        // -1 if absent
  int edge_index(const std::string& id) const;          // -1 if absent

  // Edges e with dst(e) = v, sorted by edge id. These are the one-step
  // extensions of a path whose source vertex is v.
  const std::vector<int>& in_edges(int v) const { return in_edges_[v]; }
  // Edges e with src(e) = v, sorted by edge id.
  const std::vector<int>& out_edges(int v) const { return out_edges_[v]; }

  DirectedGraph reversed() const;

 private:
  std::vector<std::string> vertex_ids_;
  std::vector<Edge> edges_;
  std::map<std::string, int> vertex_index_;
  std::map<std::string, int> edge_index_;
  std::vector<std::vector<int>> in_edges_;
  std::vector<std::vector<int>> out_edges_;
};

struct ValidationIssue {
  std::string kind;  // "source_vertex" | "sink_vertex" | "dangling_endpoint" | "duplicate_id"
  std::string subject;
  std::string detail;
};

struct ValidationReport {
  bool pass = true;
  std::vector<ValidationIssue> issues;
};

// Report-style check of the standing hypotheses: no sources (every vertex
// receives an edge on the dst side), no sinks (every vertex emits one),
// referential integrity, unique ids. Raw ingredients come in untrusted, so
// this runs on the unparsed pieces.
ValidationReport validate_graph(
    const std::vector<std::string>& vertices,
    const std::vector<std::tuple<std::string, std::string, std::string>>& edges);

ValidationReport validate_graph(const DirectedGraph& g);

using VertexSet = std::vector<int>;  // sorted, unique

VertexSet vertex_set_from_ids(const DirectedGraph& g, const std::vector<std::string>& ids);

// true iff every edge with src in H has dst in H.
bool is_hereditary(const DirectedGraph& g, const VertexSet& H);

// true iff every vertex v with { dst(e) : src(e)=v } contained in H lies in H.
bool is_saturated(const DirectedGraph& g, const VertexSet& H);

// All subsets that are both hereditary and saturated, sorted canonically.
// Exhaustive over 2^|V|; refuses above max_vertices.
std::vector<VertexSet> saturated_hereditary_lattice(const DirectedGraph& g,
                                                    int max_vertices = 20);

struct ConditionKReport {
  bool satisfied = true;
  // Vertices with exactly one return path (the offending case).
  std::vector<int> offending_vertices;
  // Per-vertex classification: 0, 1, or 2 meaning ">= 2".
  std::vector<int> loop_class;
  // Reading used: a loop based at v is a return path visiting v only at its
  // endpoints; parallel edges give distinct loops.
  std::string note;
};

ConditionKReport satisfies_condition_k(const DirectedGraph& g);

// Multiplication table of a finite group; element 0 need not be the identity.
struct FiniteGroup {
  std::vector<std::string> element_ids;
  std::vector<std::vector<int>> table;  // table[a][b] = a*b
  int identity = -1;

  int size() const { return static_cast<int>(element_ids.size()); }
  // Throws input_error when the table is not a group.
  void validate() const;
  int inverse(int a) const;
};

FiniteGroup cyclic_group(int n);

// Skew-product graph E x_c G for a finite group: vertices E^0 x G, edges
// E^1 x G with src(e,g) = (src e, g) and dst(e,g) = (dst e, g*c(e)).
DirectedGraph skew_product(const DirectedGraph& e, const FiniteGroup& group,
                           const std::vector<int>& cocycle);

// Quotient of a skew product by the translation action; vertex (v,g) ~ (v,h).
DirectedGraph skew_product_quotient(const DirectedGraph& e, const FiniteGroup& group,
                                    const std::vector<int>& cocycle);

// Brute-force isomorphism on small graphs (vertex permutations, edge
// multisets with multiplicity). Intended for <= 8 vertices.
bool graphs_isomorphic(const DirectedGraph& a, const DirectedGraph& b);

}  // namespace etalerep
