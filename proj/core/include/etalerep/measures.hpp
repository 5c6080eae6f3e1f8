#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "etalerep/path.hpp"
#include "etalerep/rational.hpp"
#include "etalerep/symbolic.hpp"

namespace etalerep {

enum class WeightRegime {
  full_support,       // all weights strictly positive
  ideal,              // weights vanish exactly on an ideal-compatible vertex set
  totally_degenerate  // every weight zero (H = E^0 corner)
};

// Vertex distribution mu0 plus edge transition weights p with
// sum_{dst(e)=v} p(e) = 1 per vertex. Defines the Markov measure
// mu(Z(e1...en)) = mu0(dst(e1)) p(e1)...p(en).
struct MarkovWeights {
  std::vector<Rational> mu0;  // indexed by vertex
  std::vector<Rational> p;    // indexed by edge

  static MarkovWeights uniform(const DirectedGraph& g);

  // Checks normalization and the support regime. In the degenerate regime the
  // zero set H of mu0 must be closed under incoming edges (every edge into H
  // starts in H) and in-saturated (a vertex fed only from H lies in H) --
  // otherwise bisections map null cylinders onto positive ones and the
  // measure fails quasi-invariance. p must vanish exactly on s^{-1}(H).
  // Rows of p at vertices fed only from H stay zero (their fibers are null).
  WeightRegime validate(const DirectedGraph& g) const;

  bool full_support(const DirectedGraph& g) const;
};

// Weights for the ideal regime: uniform off H, vanishing exactly on H and
// s^{-1}(H). H must be hereditary+saturated for the edge-reversed graph.
MarkovWeights ideal_weights(const DirectedGraph& g, const VertexSet& H);

// Validates H for the ideal regime; returns an explanation naming the
// violated closure, or nullopt when admissible.
std::optional<std::string> ideal_regime_violation(const DirectedGraph& g, const VertexSet& H);

Rational cylinder_measure(const DirectedGraph& g, const MarkovWeights& w, const Path& alpha);

// Radon-Nikodym cocycle of the Markov measure on the bisection Z(alpha,beta):
// the stable cylinder-measure ratio mu(Z(alpha tau)) / mu(Z(beta tau)) =
// mu0(r(alpha)) p(alpha) / (mu0(r(beta)) p(beta)). The optional tail feeds the
// ratio through a concrete extension (the result never depends on it).
Rational radon_nikodym(const DirectedGraph& g, const MarkovWeights& w, const BisectionSymbol& a,
                       const Path* tail = nullptr);

// psi as a locally constant positive function of a depth-d path prefix.
// Depth 1 keys on the first edge.
struct TransferSpec {
  int depth = 1;
  std::map<std::vector<int>, Rational> values;  // prefix edge sequence -> value

  static TransferSpec per_edge(const DirectedGraph& g, std::vector<Rational> edge_values);
  static TransferSpec constant(const DirectedGraph& g, const Rational& c);
  // psi(x) = p(x1) mu0(r(x1)) / mu0(s(x1)): the exact density of the Markov
  // measure, whose D_psi reproduces radon_nikodym for every mu0. Equals
  // p(x1) when mu0 is edge-wise constant (e.g. uniform).
  static TransferSpec markov_density(const DirectedGraph& g, const MarkovWeights& w);

  Rational value_on_prefix(const DirectedGraph& g, const Path& prefix) const;
};

// D_psi(x, m-n, y) = prod_{i<m} psi(T^i x) / prod_{j<n} psi(T^j y) evaluated
// on the symbol's prefixes. For depth d > 1 the evaluation is well defined
// only when alpha and beta share their last d-1 edges (tail peeks cancel);
// otherwise a domain_error names the required depth.
Rational cocycle_dpsi(const DirectedGraph& g, const TransferSpec& psi, const BisectionSymbol& a);

struct SelfSimilarWeights;

// Same cocycle for a full shift carrying self-similar weights, with
// psi(x) = r_{x_0}^hdim; real-valued since hdim is generally irrational.
double cocycle_dpsi(const DirectedGraph& full_shift, const SelfSimilarWeights& w,
                    const BisectionSymbol& a);

// Exact cylinder function at a fixed depth.
struct CylinderFunction {
  int depth = 0;
  std::map<Path, Rational> coeffs;
};

CylinderFunction indicator(const Path& alpha);

// (L_psi f)(x) = sum_{Ty=x} psi(y) f(y), exact on depth-(n-1) cylinders.
CylinderFunction transfer_apply(const DirectedGraph& g, const TransferSpec& psi,
                                const CylinderFunction& f);

Rational integrate(const DirectedGraph& g, const MarkovWeights& w, const CylinderFunction& f);

struct TransferFixedReport {
  bool fixed = true;
  std::optional<Path> first_violation;
  Rational lhs, rhs;  // integrals at the violation
};

// Checks the dual fixed point L_psi^* mu = mu exactly on every cylinder
// indicator of depth <= n (depth-0 indicators are refined one level first).
TransferFixedReport is_transfer_fixed(const DirectedGraph& g, const MarkovWeights& w,
                                      const TransferSpec& psi, int depth);

// Contraction ratios with the Moran exponent: sum r_i^hdim = 1.
struct SelfSimilarWeights {
  std::vector<double> ratios;
  double hdim = 0.0;
};

// Unique solution of sum r_i^s = 1 by bisection on the strictly decreasing
// Moran map, with residual guaranteed <= tol.
double hausdorff_dimension(const std::vector<double>& ratios, double tol);

SelfSimilarWeights make_self_similar(const std::vector<double>& ratios, double tol);

// phi_mu(f) = integral of f restricted to the unit space: only diagonal
// symbols Z(alpha,alpha) contribute, each weighted by mu(Z(alpha)).
Rational kms_state_eval(const DirectedGraph& g, const MarkovWeights& w, const AlgebraElement& f);

// beta with D = e^{-beta k} on every generator, when the edge cocycle values
// all coincide; nullopt otherwise.
std::optional<double> kms_inverse_temperature(const DirectedGraph& g, const MarkovWeights& w);

}  // namespace etalerep
