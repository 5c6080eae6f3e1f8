#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "etalerep/path.hpp"
#include "etalerep/rational.hpp"

namespace etalerep {

// Z(alpha, beta) with s(alpha) = s(beta): the compact open bisection moving
// beta-prefixed points to alpha-prefixed ones. degree() is the cocycle value
// c(x,k,y) = k of every element in the bisection.
struct BisectionSymbol {
  Path alpha;
  Path beta;

  int degree() const { return alpha.length() - beta.length(); }
  int source() const { return alpha.source(); }

  friend auto operator<=>(const BisectionSymbol& a, const BisectionSymbol& b) = default;
};

BisectionSymbol make_symbol(const DirectedGraph& g, Path alpha, Path beta);

// Unit-space projection symbol Z(v,v).
BisectionSymbol vertex_symbol(const DirectedGraph& g, int vertex);
// Generator partial isometry symbol Z(e, s(e)).
BisectionSymbol edge_symbol(const DirectedGraph& g, int edge);

// Z(a,b).Z(c,d): Z(a e, d) when c = b e, Z(a, d e) when b = c e, empty
// otherwise. Degrees add on nonempty products.
std::optional<BisectionSymbol> multiply(const DirectedGraph& g, const BisectionSymbol& a,
                                        const BisectionSymbol& b);

inline BisectionSymbol adjoint(const BisectionSymbol& a) { return {a.beta, a.alpha}; }

// Finite rational combination of bisection indicators; zero coefficients are
// never stored and keys are kept sorted.
class AlgebraElement {
 public:
  AlgebraElement() = default;
  static AlgebraElement from_symbol(const BisectionSymbol& s, const Rational& c = 1);

  void add(const BisectionSymbol& s, const Rational& c);
  const std::map<BisectionSymbol, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int max_path_length() const;
  int max_abs_degree() const;

  AlgebraElement operator+(const AlgebraElement& o) const;
  AlgebraElement operator-(const AlgebraElement& o) const;
  AlgebraElement scaled(const Rational& c) const;

  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
    return a.terms_ == b.terms_;
  }

 private:
  std::map<BisectionSymbol, Rational> terms_;
};

AlgebraElement convolve(const DirectedGraph& g, const AlgebraElement& f, const AlgebraElement& h);
AlgebraElement adjoint(const AlgebraElement& f);

// Identity at a fixed depth: sum of Z(alpha, alpha) over |alpha| = depth.
AlgebraElement unit_at_depth(const DirectedGraph& g, int depth);
// Sum of all vertex projections Z(v,v).
AlgebraElement unit_element(const DirectedGraph& g);

// Set-level enumeration of a bisection truncated at depth: the pairs
// (alpha tau, beta tau) over all tails tau extending the common source to
// the given depth of the alpha side. Oracle for multiply().
std::vector<std::pair<Path, Path>> enumerate_bisection(const DirectedGraph& g,
                                                       const BisectionSymbol& s, int depth);

}  // namespace etalerep
