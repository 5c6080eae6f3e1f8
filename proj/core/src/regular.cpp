#include "etalerep/regular.hpp"

#include <algorithm>

#include "etalerep/errors.hpp"

namespace etalerep {

namespace {

FiberElement normalize(const DirectedGraph& g, const Path& base, int m, Path word) {
  while (m >= 1 && !word.is_empty() && word.edges().back() == base.edges()[m - 1]) {
    if (word.length() == 1)
      word = Path::empty_at(g, word.range());
    else
      word = Path::of_edges(g, std::vector<int>(word.edges().begin(), word.edges().end() - 1));
    --m;
  }
  if (word.is_empty()) {
    // anchor the empty word at the range of T^m(base)
    int v = m < base.length() ? g.edge(base.edges()[m]).dst : base.source();
    word = Path::empty_at(g, v);
  }
  return {m, word};
}

// The x-leg of the element as a finite path: word . prefix of T^m(base).
Path x_leg(const DirectedGraph& g, const Path& base, const FiberElement& el, int extra_depth) {
  Path tail = el.word;
  int take = std::min(extra_depth, base.length() - el.m);
  for (int i = 0; i < take; ++i) tail = tail.extended(g, base.edges()[el.m + i]);
  return tail;
}

}  // namespace

RegularTruncation regular_truncation(const DirectedGraph& g, const Path& base, int complexity) {
  RegularTruncation t;
  t.base = base;
  t.complexity = complexity;
  if (base.length() < complexity)
    throw resource_error("base path shorter than the truncation complexity", complexity);

  std::vector<FiberElement> all;
  for (int m = 0; m <= complexity; ++m) {
    int v = m < base.length() ? g.edge(base.edges()[m]).dst : base.source();
    // words attach to T^m(base) at its range vertex
    for (int len = 0; len <= complexity; ++len) {
      for (const Path& word : paths_of_length(g, len)) {
        if (word.is_empty() && word.range() != v) continue;
        if (!word.is_empty() && word.source() != v) continue;
        FiberElement el = normalize(g, base, m, word);
        if (el.m == m && el.word == (word.is_empty() ? Path::empty_at(g, v) : word)) all.push_back(el);
      }
    }
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  for (const auto& el : all) {
    t.index.emplace(el, static_cast<int>(t.elements.size()));
    t.elements.push_back(el);
  }
  return t;
}

RegularMatrix regular_matrix(const DirectedGraph& g, const AlgebraElement& f, const Path& base,
                             int complexity) {
  const int growth = f.max_path_length();
  if (base.length() < complexity + growth)
    throw resource_error("base path must have length >= complexity + max path length of f",
                         complexity + growth);

  RegularMatrix r{SparseMat(), regular_truncation(g, base, complexity),
                  regular_truncation(g, base, complexity + growth)};
  r.mat = SparseMat(static_cast<int>(r.codomain.elements.size()),
                    static_cast<int>(r.domain.elements.size()));

  for (int col = 0; col < static_cast<int>(r.domain.elements.size()); ++col) {
    const FiberElement& el = r.domain.elements[col];
    for (const auto& [s, c] : f.terms()) {
      // Left multiplication by the unique element of Z(alpha,beta) whose
      // source is the x-leg; defined when beta is a prefix of that leg.
      const Path& beta = s.beta;
      int peek = std::max(0, beta.length() - el.word.length());
      Path leg = x_leg(g, base, el, peek);
      if (leg.length() < beta.length()) continue;  // ran off the truncated point
      if (!beta.is_prefix_of(leg)) continue;

      FiberElement image;
      if (beta.length() <= el.word.length()) {
        Path rest = beta.length() == el.word.length()
                        ? Path::empty_at(g, el.word.source())
                        : Path::of_edges(g, std::vector<int>(el.word.edges().begin() +
                                                                 beta.length(),
                                                             el.word.edges().end()));
        image = normalize(g, base, el.m, s.alpha.concatenated(g, rest));
      } else {
        int consumed = beta.length() - el.word.length();
        image = normalize(g, base, el.m + consumed, s.alpha);
      }
      int row = r.codomain.index.count(image) ? r.codomain.index.at(image) : -1;
      if (row < 0)
        throw resource_error("image escaped the codomain truncation", complexity + growth);
      r.mat.add(row, col, c);
    }
  }
  return r;
}

}  // namespace etalerep
