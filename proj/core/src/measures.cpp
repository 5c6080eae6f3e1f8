#include "etalerep/measures.hpp"

#include <algorithm>
#include <cmath>

#include "etalerep/errors.hpp"

namespace etalerep {

MarkovWeights MarkovWeights::uniform(const DirectedGraph& g) {
  MarkovWeights w;
  w.mu0.assign(g.vertex_count(), Rational(1, g.vertex_count()));
  w.p.resize(g.edge_count());
  for (int v = 0; v < g.vertex_count(); ++v) {
    const auto& in = g.in_edges(v);
    if (in.empty()) throw input_error("graph has a source vertex: " + g.vertex_id(v));
    for (int e : in) w.p[e] = Rational(1, static_cast<long>(in.size()));
  }
  return w;
}

WeightRegime MarkovWeights::validate(const DirectedGraph& g) const {
  if (static_cast<int>(mu0.size()) != g.vertex_count() ||
      static_cast<int>(p.size()) != g.edge_count())
    throw input_error("weight tables do not match the graph");
  for (const auto& q : mu0)
    if (q < 0) throw input_error("mu0 must be nonnegative");
  for (const auto& q : p)
    if (q < 0) throw input_error("p must be nonnegative");

  VertexSet H;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (mu0[v] == 0) H.push_back(v);

  Rational total = 0;
  for (const auto& q : mu0) total += q;

  if (H.empty()) {
    if (total != 1) throw input_error("mu0 must sum to 1");
    for (int e = 0; e < g.edge_count(); ++e)
      if (p[e] == 0) throw input_error("zero p with full-support mu0; use the ideal regime");
    for (int v = 0; v < g.vertex_count(); ++v) {
      Rational row = 0;
      for (int e : g.in_edges(v)) row += p[e];
      if (row != 1)
        throw input_error("p row at vertex " + g.vertex_id(v) + " sums to " +
                          format_rational(row) + ", expected 1/1");
    }
    return WeightRegime::full_support;
  }

  if (static_cast<int>(H.size()) == g.vertex_count()) {
    for (const auto& q : p)
      if (q != 0) throw input_error("totally degenerate mu0 requires p = 0");
    return WeightRegime::totally_degenerate;
  }

  if (total != 1) throw input_error("mu0 must sum to 1");
  if (auto why = ideal_regime_violation(g, H)) throw input_error(*why);

  std::vector<char> in_h(g.vertex_count(), 0);
  for (int v : H) in_h[v] = 1;
  for (int e = 0; e < g.edge_count(); ++e) {
    bool should_vanish = in_h[g.edge(e).src];
    if (should_vanish && p[e] != 0)
      throw input_error("p must vanish on s^{-1}(H): edge " + g.edge_id(e));
    if (!should_vanish && p[e] == 0)
      throw input_error("off-H weights must be strictly positive: edge " + g.edge_id(e));
  }
  for (int v = 0; v < g.vertex_count(); ++v) {
    Rational row = 0;
    bool fed_only_from_h = true;
    for (int e : g.in_edges(v)) {
      row += p[e];
      if (!in_h[g.edge(e).src]) fed_only_from_h = false;
    }
    if (fed_only_from_h) {
      if (row != 0)
        throw input_error("p row at " + g.vertex_id(v) + " must be zero (fed only from H)");
    } else if (row != 1) {
      throw input_error("p row at vertex " + g.vertex_id(v) + " sums to " +
                        format_rational(row) + ", expected 1/1");
    }
  }
  return WeightRegime::ideal;
}

bool MarkovWeights::full_support(const DirectedGraph& g) const {
  return validate(g) == WeightRegime::full_support;
}

std::optional<std::string> ideal_regime_violation(const DirectedGraph& g, const VertexSet& H) {
  std::vector<char> in_h(g.vertex_count(), 0);
  for (int v : H) {
    if (v < 0 || v >= g.vertex_count()) return "H references an unknown vertex";
    in_h[v] = 1;
  }
  // Hereditary for the reversed graph: an edge into H must start in H,
  // otherwise the bisection Z(e, s(e)) maps a positive cylinder to a null one.
  for (int e = 0; e < g.edge_count(); ++e)
    if (in_h[g.edge(e).dst] && !in_h[g.edge(e).src])
      return "H is not hereditary for the ideal regime: edge " + g.edge_id(e) + " enters H from " +
             g.vertex_id(g.edge(e).src);
  // Saturated for the reversed graph: a vertex fed only from H cannot carry
  // positive cylinders and must already lie in H.
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (in_h[v]) continue;
    bool fed_only_from_h = true;
    for (int e : g.in_edges(v))
      if (!in_h[g.edge(e).src]) fed_only_from_h = false;
    if (fed_only_from_h)
      return "H is not saturated for the ideal regime: vertex " + g.vertex_id(v) +
             " is fed only from H";
  }
  return std::nullopt;
}

MarkovWeights ideal_weights(const DirectedGraph& g, const VertexSet& H) {
  if (auto why = ideal_regime_violation(g, H)) throw input_error(*why);
  std::vector<char> in_h(g.vertex_count(), 0);
  for (int v : H) in_h[v] = 1;

  MarkovWeights w;
  w.mu0.assign(g.vertex_count(), 0);
  w.p.assign(g.edge_count(), 0);
  int off = g.vertex_count() - static_cast<int>(H.size());
  if (off > 0) {
    for (int v = 0; v < g.vertex_count(); ++v)
      if (!in_h[v]) w.mu0[v] = Rational(1, off);
  }
  for (int v = 0; v < g.vertex_count(); ++v) {
    int positive_in = 0;
    for (int e : g.in_edges(v))
      if (!in_h[g.edge(e).src]) ++positive_in;
    if (positive_in == 0) continue;
    for (int e : g.in_edges(v))
      if (!in_h[g.edge(e).src]) w.p[e] = Rational(1, positive_in);
  }
  return w;
}

Rational cylinder_measure(const DirectedGraph& g, const MarkovWeights& w, const Path& alpha) {
  (void)g;
  Rational m = w.mu0[alpha.range()];
  for (int e : alpha.edges()) m *= w.p[e];
  return m;
}

Rational radon_nikodym(const DirectedGraph& g, const MarkovWeights& w, const BisectionSymbol& a,
                       const Path* tail) {
  Path alpha = a.alpha, beta = a.beta;
  if (tail) {
    if (tail->range() != a.source())
      throw input_error("tail does not extend the symbol's common source");
    alpha = alpha.concatenated(g, *tail);
    beta = beta.concatenated(g, *tail);
  }
  Rational num = cylinder_measure(g, w, alpha);
  Rational den = cylinder_measure(g, w, beta);
  if (num == 0 || den == 0)
    throw degenerate_input_error(
        "zero-measure cylinder in a Radon-Nikodym ratio; use the kernel regime");
  return num / den;
}

TransferSpec TransferSpec::per_edge(const DirectedGraph& g, std::vector<Rational> edge_values) {
  if (static_cast<int>(edge_values.size()) != g.edge_count())
    throw input_error("per-edge psi needs one value per edge");
  TransferSpec t;
  t.depth = 1;
  for (int e = 0; e < g.edge_count(); ++e) {
    if (edge_values[e] <= 0) throw input_error("psi must be strictly positive");
    t.values[{e}] = edge_values[e];
  }
  return t;
}

TransferSpec TransferSpec::constant(const DirectedGraph& g, const Rational& c) {
  if (c <= 0) throw input_error("psi must be strictly positive");
  std::vector<Rational> v(g.edge_count(), c);
  return per_edge(g, std::move(v));
}

TransferSpec TransferSpec::markov_density(const DirectedGraph& g, const MarkovWeights& w) {
  std::vector<Rational> v(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    if (w.mu0[ed.src] == 0 || w.mu0[ed.dst] == 0 || w.p[e] == 0)
      throw degenerate_input_error("markov density needs positive weights");
    v[e] = w.p[e] * w.mu0[ed.dst] / w.mu0[ed.src];
  }
  return per_edge(g, std::move(v));
}

Rational TransferSpec::value_on_prefix(const DirectedGraph& g, const Path& prefix) const {
  (void)g;
  if (prefix.length() < depth)
    throw domain_error("psi prefix shorter than its depth; need depth " + std::to_string(depth));
  std::vector<int> key(prefix.edges().begin(), prefix.edges().begin() + depth);
  auto it = values.find(key);
  if (it == values.end()) throw input_error("psi has no value on a required prefix");
  return it->second;
}

namespace {

// prod_{i < |path|} psi(T^i path ...) for depth-1 psi; every shifted prefix
// still carries its first edge.
Rational dpsi_product(const DirectedGraph& g, const TransferSpec& psi, const Path& path) {
  Rational prod = 1;
  Path cur = path;
  for (int i = 0; i < path.length(); ++i) {
    prod *= psi.value_on_prefix(g, cur);
    if (i + 1 < path.length()) cur = cur.shifted(g);
  }
  return prod;
}

}  // namespace

Rational cocycle_dpsi(const DirectedGraph& g, const TransferSpec& psi, const BisectionSymbol& a) {
  const int d = psi.depth;
  if (d > 1) {
    // Factors that peek past the prefix must cancel between numerator and
    // denominator, which happens exactly when the two suffixes agree.
    int peeks = d - 1;
    if (a.alpha.length() < peeks || a.beta.length() < peeks)
      throw domain_error("psi depth " + std::to_string(d) +
                         " needs |alpha|,|beta| >= " + std::to_string(peeks));
    for (int s = 1; s <= peeks; ++s) {
      const auto& ae = a.alpha.edges();
      const auto& be = a.beta.edges();
      if (ae[ae.size() - s] != be[be.size() - s])
        throw domain_error("psi depth " + std::to_string(d) +
                           " needs matching length-" + std::to_string(peeks) + " suffixes");
    }
    // Shared-peek factors cancel pairwise; evaluate only the interior terms.
    Rational num = 1, den = 1;
    Path cur = a.alpha;
    for (int i = 0; i + d <= a.alpha.length(); ++i) {
      num *= psi.value_on_prefix(g, cur);
      cur = cur.shifted(g);
    }
    cur = a.beta;
    for (int j = 0; j + d <= a.beta.length(); ++j) {
      den *= psi.value_on_prefix(g, cur);
      cur = cur.shifted(g);
    }
    return num / den;
  }
  return dpsi_product(g, psi, a.alpha) / dpsi_product(g, psi, a.beta);
}

double cocycle_dpsi(const DirectedGraph& full_shift, const SelfSimilarWeights& w,
                    const BisectionSymbol& a) {
  if (full_shift.vertex_count() != 1 ||
      full_shift.edge_count() != static_cast<int>(w.ratios.size()))
    throw input_error("self-similar cocycle needs the full shift on the ratio alphabet");
  auto product = [&](const Path& p) {
    double value = 1.0;
    for (int e : p.edges()) value *= std::pow(w.ratios[e], w.hdim);
    return value;
  };
  return product(a.alpha) / product(a.beta);
}

CylinderFunction indicator(const Path& alpha) {
  CylinderFunction f;
  f.depth = alpha.length();
  f.coeffs[alpha] = 1;
  return f;
}

CylinderFunction transfer_apply(const DirectedGraph& g, const TransferSpec& psi,
                                const CylinderFunction& f) {
  if (f.depth < 1 || f.depth < psi.depth)
    throw domain_error("transfer operator needs input depth >= max(1, psi depth)");
  CylinderFunction out;
  out.depth = f.depth - 1;
  for (const auto& [path, c] : f.coeffs) {
    // preimage y = e . x contributes psi(prefix(y)) f(y) to gamma = T(path)
    Path gamma = path.shifted(g);
    Rational weight = psi.value_on_prefix(g, path);
    auto [it, inserted] = out.coeffs.emplace(gamma, weight * c);
    if (!inserted) it->second += weight * c;
  }
  for (auto it = out.coeffs.begin(); it != out.coeffs.end();)
    it = it->second == 0 ? out.coeffs.erase(it) : std::next(it);
  return out;
}

Rational integrate(const DirectedGraph& g, const MarkovWeights& w, const CylinderFunction& f) {
  Rational total = 0;
  for (const auto& [path, c] : f.coeffs) total += c * cylinder_measure(g, w, path);
  return total;
}

TransferFixedReport is_transfer_fixed(const DirectedGraph& g, const MarkovWeights& w,
                                      const TransferSpec& psi, int depth) {
  if (depth < 1) throw domain_error("transfer fixed-point check needs depth >= 1");
  TransferFixedReport report;
  for (int n = 0; n <= depth; ++n) {
    for (const Path& beta : paths_of_length(g, n)) {
      CylinderFunction f;
      if (n == 0 || n < psi.depth) {
        // refine to an applicable depth; same L^2 function
        f.depth = std::max(1, psi.depth);
        for (const Path& q : refine(g, beta, f.depth)) f.coeffs[q] = 1;
      } else {
        f = indicator(beta);
      }
      Rational lhs = integrate(g, w, transfer_apply(g, psi, f));
      Rational rhs = integrate(g, w, f);
      if (lhs != rhs) {
        report.fixed = false;
        report.first_violation = beta;
        report.lhs = lhs;
        report.rhs = rhs;
        return report;
      }
    }
  }
  return report;
}

double hausdorff_dimension(const std::vector<double>& ratios, double tol) {
  if (ratios.size() < 2) throw input_error("need at least two contraction ratios");
  if (tol <= 0) throw input_error("tolerance must be positive");
  for (double r : ratios)
    if (!(r > 0.0 && r < 1.0)) throw input_error("contraction ratios must lie in (0,1)");

  auto moran = [&ratios](double s) {
    double sum = 0;
    for (double r : ratios) sum += std::pow(r, s);
    return sum;
  };
  double lo = 0.0;  // moran(0) = k >= 2 > 1
  double hi = 1.0;
  while (moran(hi) > 1.0) hi *= 2.0;

  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 20000; ++iter) {
    mid = 0.5 * (lo + hi);
    double value = moran(mid);
    if (std::abs(value - 1.0) <= tol && (hi - lo) <= 1e-15 * std::max(1.0, hi)) break;
    if (value > 1.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 0) break;
  }
  if (std::abs(moran(mid) - 1.0) > tol)
    throw domain_error("bisection could not reach the requested residual tolerance");
  return mid;
}

SelfSimilarWeights make_self_similar(const std::vector<double>& ratios, double tol) {
  SelfSimilarWeights w;
  w.ratios = ratios;
  w.hdim = hausdorff_dimension(ratios, tol);
  return w;
}

Rational kms_state_eval(const DirectedGraph& g, const MarkovWeights& w, const AlgebraElement& f) {
  Rational total = 0;
  for (const auto& [s, c] : f.terms())
    if (s.alpha == s.beta) total += c * cylinder_measure(g, w, s.alpha);
  return total;
}

std::optional<double> kms_inverse_temperature(const DirectedGraph& g, const MarkovWeights& w) {
  if (!w.full_support(g)) throw degenerate_input_error("KMS diagnostics need positive weights");
  std::optional<Rational> common;
  for (int e = 0; e < g.edge_count(); ++e) {
    Rational d = radon_nikodym(g, w, edge_symbol(g, e));
    if (!common)
      common = d;
    else if (*common != d)
      return std::nullopt;
  }
  if (!common) return std::nullopt;
  return -std::log(to_double(*common));
}

}  // namespace etalerep
