#include "etalerep/symbolic.hpp"

#include <algorithm>

#include "etalerep/errors.hpp"

namespace etalerep {

BisectionSymbol make_symbol(const DirectedGraph& g, Path alpha, Path beta) {
  (void)g;
  if (alpha.source() != beta.source())
    throw input_error("bisection symbol requires s(alpha) = s(beta)");
  return {std::move(alpha), std::move(beta)};
}

BisectionSymbol vertex_symbol(const DirectedGraph& g, int vertex) {
  Path p = Path::empty_at(g, vertex);
  return {p, p};
}

BisectionSymbol edge_symbol(const DirectedGraph& g, int edge) {
  Path a = Path::of_edges(g, {edge});
  return {a, Path::empty_at(g, a.source())};
}

namespace {

// tail of `longer` after removing the prefix `shorter`; assumes the prefix
// relation was already checked.
Path strip_prefix(const DirectedGraph& g, const Path& shorter, const Path& longer) {
  if (shorter.length() == longer.length()) return Path::empty_at(g, longer.source());
  std::vector<int> rest(longer.edges().begin() + shorter.length(), longer.edges().end());
  return Path::of_edges(g, std::move(rest));
}

}  // namespace

std::optional<BisectionSymbol> multiply(const DirectedGraph& g, const BisectionSymbol& a,
                                        const BisectionSymbol& b) {
  if (a.beta.is_prefix_of(b.alpha)) {
    Path extension = strip_prefix(g, a.beta, b.alpha);
    return BisectionSymbol{a.alpha.concatenated(g, extension), b.beta};
  }
  if (b.alpha.is_prefix_of(a.beta)) {
    Path extension = strip_prefix(g, b.alpha, a.beta);
    return BisectionSymbol{a.alpha, b.beta.concatenated(g, extension)};
  }
  return std::nullopt;
}

AlgebraElement AlgebraElement::from_symbol(const BisectionSymbol& s, const Rational& c) {
  AlgebraElement f;
  f.add(s, c);
  return f;
}

void AlgebraElement::add(const BisectionSymbol& s, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(s, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

int AlgebraElement::max_path_length() const {
  int m = 0;
  for (const auto& [s, c] : terms_) m = std::max({m, s.alpha.length(), s.beta.length()});
  return m;
}

int AlgebraElement::max_abs_degree() const {
  int m = 0;
  for (const auto& [s, c] : terms_) m = std::max(m, std::abs(s.degree()));
  return m;
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
  AlgebraElement r = *this;
  for (const auto& [s, c] : o.terms_) r.add(s, c);
  return r;
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
  AlgebraElement r = *this;
  for (const auto& [s, c] : o.terms_) r.add(s, -c);
  return r;
}

AlgebraElement AlgebraElement::scaled(const Rational& c) const {
  AlgebraElement r;
  for (const auto& [s, coeff] : terms_) r.add(s, coeff * c);
  return r;
}

AlgebraElement convolve(const DirectedGraph& g, const AlgebraElement& f,
                        const AlgebraElement& h) {
  AlgebraElement r;
  for (const auto& [sf, cf] : f.terms())
    for (const auto& [sh, ch] : h.terms())
      if (auto p = multiply(g, sf, sh)) r.add(*p, cf * ch);
  return r;
}

AlgebraElement adjoint(const AlgebraElement& f) {
  AlgebraElement r;
  for (const auto& [s, c] : f.terms()) r.add(adjoint(s), c);
  return r;
}

AlgebraElement unit_at_depth(const DirectedGraph& g, int depth) {
  AlgebraElement r;
  for (const Path& p : paths_of_length(g, depth)) r.add({p, p}, 1);
  return r;
}

AlgebraElement unit_element(const DirectedGraph& g) { return unit_at_depth(g, 0); }

std::vector<std::pair<Path, Path>> enumerate_bisection(const DirectedGraph& g,
                                                       const BisectionSymbol& s, int depth) {
  std::vector<std::pair<Path, Path>> pairs;
  int tail_depth = depth - s.alpha.length();
  if (tail_depth < 0) throw domain_error("enumeration depth below |alpha|");
  for (const Path& tau : refine(g, Path::empty_at(g, s.source()), tail_depth))
    pairs.emplace_back(s.alpha.concatenated(g, tau), s.beta.concatenated(g, tau));
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

}  // namespace etalerep
