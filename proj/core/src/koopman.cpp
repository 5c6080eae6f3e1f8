#include "etalerep/koopman.hpp"

#include <algorithm>

#include "etalerep/errors.hpp"

namespace etalerep {

CylinderBasis cylinder_basis(const DirectedGraph& g, const MarkovWeights& w, int depth) {
  CylinderBasis basis;
  basis.depth = depth;
  for (const Path& p : paths_of_length(g, depth)) {
    if (cylinder_measure(g, w, p) == 0) continue;
    basis.index.emplace(p, static_cast<int>(basis.paths.size()));
    basis.paths.push_back(p);
  }
  return basis;
}

bool KoopmanOp::is_zero() const {
  for (const auto& [k, m] : blocks)
    if (!m.is_zero()) return false;
  return true;
}

const SparseMat& KoopmanOp::single_block() const {
  if (blocks.size() != 1)
    throw domain_error("operator mixes degrees; no single-matrix realization");
  return blocks.begin()->second;
}

namespace {

// Block of a single symbol at the given domain level: e_{beta sigma} maps to
// e_{alpha sigma} with coefficient exactly 1 (measure-ratio cocycle), scaled
// by the symbol's coefficient; zero-measure targets drop.
void accumulate_symbol(const DirectedGraph& g, const BisectionSymbol& s, const Rational& coeff,
                       const CylinderBasis& domain, const CylinderBasis& codomain, SparseMat& out) {
  for (int col = 0; col < static_cast<int>(domain.paths.size()); ++col) {
    const Path& q = domain.paths[col];
    if (!s.beta.is_prefix_of(q)) continue;
    Path sigma = q.length() == s.beta.length()
                     ? Path::empty_at(g, q.source())
                     : Path::of_edges(g, std::vector<int>(q.edges().begin() + s.beta.length(),
                                                          q.edges().end()));
    Path target = s.alpha.concatenated(g, sigma);
    int row = codomain.find(target);
    if (row < 0) continue;  // zero-measure target drops
    out.add(row, col, coeff);
  }
}

}  // namespace

KoopmanOp koopman_matrix(const DirectedGraph& g, const MarkovWeights& w, const AlgebraElement& f,
                         int domain_depth, int headroom) {
  // headroom = level budget for planned compositions (factor count times the
  // max degree shift), so no truncation error can enter a later product
  const int need = f.max_path_length() + headroom;
  if (domain_depth < need)
    throw resource_error("domain depth " + std::to_string(domain_depth) +
                             " cannot host the element; need at least " + std::to_string(need),
                         need);
  KoopmanOp op;
  op.domain_depth = domain_depth;
  CylinderBasis domain = cylinder_basis(g, w, domain_depth);
  std::map<int, CylinderBasis> codomains;
  for (const auto& [s, c] : f.terms()) {
    int k = s.degree();
    auto it = codomains.find(k);
    if (it == codomains.end())
      it = codomains.emplace(k, cylinder_basis(g, w, domain_depth + k)).first;
    auto bit = op.blocks.find(k);
    if (bit == op.blocks.end())
      bit = op.blocks
                .emplace(k, SparseMat(static_cast<int>(it->second.paths.size()),
                                      static_cast<int>(domain.paths.size())))
                .first;
    accumulate_symbol(g, s, c, domain, it->second, bit->second);
  }
  if (op.blocks.empty())
    op.blocks.emplace(0, SparseMat(static_cast<int>(domain.paths.size()),
                                   static_cast<int>(domain.paths.size())));
  return op;
}

KoopmanOp compose(const DirectedGraph& g, const MarkovWeights& w, const AlgebraElement& f,
                  const KoopmanOp& inner) {
  KoopmanOp out;
  out.domain_depth = inner.domain_depth;
  for (const auto& [k_in, m_in] : inner.blocks) {
    if (m_in.is_zero()) continue;
    int level = inner.domain_depth + k_in;
    if (level < f.max_path_length())
      throw resource_error("composition level " + std::to_string(level) +
                               " cannot host the outer element; need at least " +
                               std::to_string(f.max_path_length() - k_in),
                           f.max_path_length() - k_in);
    KoopmanOp outer = koopman_matrix(g, w, f, level);
    for (const auto& [k_f, m_f] : outer.blocks) {
      SparseMat prod = m_f * m_in;
      int k_total = k_in + k_f;
      auto it = out.blocks.find(k_total);
      if (it == out.blocks.end())
        out.blocks.emplace(k_total, std::move(prod));
      else
        it->second = it->second + prod;
    }
  }
  return out;
}

KoopmanOp koopman_sum(const KoopmanOp& a, const KoopmanOp& b) {
  if (a.domain_depth != b.domain_depth) throw input_error("operator domain depths differ");
  KoopmanOp out = a;
  for (const auto& [k, m] : b.blocks) {
    auto it = out.blocks.find(k);
    if (it == out.blocks.end())
      out.blocks.emplace(k, m);
    else
      it->second = it->second + m;
  }
  return out;
}

namespace {

std::string entry_witness(const SparseMat& got, const SparseMat& expected) {
  for (const auto& [ij, v] : got.entries()) {
    Rational e = expected.at(ij.first, ij.second);
    if (e != v)
      return "entry (" + std::to_string(ij.first) + "," + std::to_string(ij.second) + ") = " +
             format_rational(v) + ", expected " + format_rational(e);
  }
  for (const auto& [ij, v] : expected.entries()) {
    Rational a = got.at(ij.first, ij.second);
    if (a != v)
      return "entry (" + std::to_string(ij.first) + "," + std::to_string(ij.second) + ") = " +
             format_rational(a) + ", expected " + format_rational(v);
  }
  return "";
}

SparseMat symbol_block(const DirectedGraph& g, const MarkovWeights& w, const BisectionSymbol& s,
                       int domain_depth) {
  return koopman_matrix(g, w, AlgebraElement::from_symbol(s), domain_depth).single_block();
}

}  // namespace

CkReport verify_cuntz_krieger(const DirectedGraph& g, const MarkovWeights& w, int depth) {
  if (w.validate(g) != WeightRegime::full_support)
    throw input_error("Cuntz-Krieger verification needs positive weights; "
                      "degenerate weights belong to the kernel/ideal regime");
  if (depth < 2) throw input_error("Cuntz-Krieger verification needs depth >= 2");

  CkReport report;
  auto record = [&report](std::string name, const SparseMat& got, const SparseMat& expected) {
    IdentityCheck check;
    check.name = std::move(name);
    if (!(got == expected)) {
      check.pass = false;
      check.witness = entry_witness(got, expected);
      report.pass = false;
    }
    report.checks.push_back(std::move(check));
  };

  const int L = depth;
  const int n_L = static_cast<int>(cylinder_basis(g, w, L).paths.size());

  std::vector<SparseMat> pv;
  for (int v = 0; v < g.vertex_count(); ++v)
    pv.push_back(symbol_block(g, w, vertex_symbol(g, v), L));

  SparseMat sum_p(n_L, n_L);
  for (int v = 0; v < g.vertex_count(); ++v) {
    record("P_" + g.vertex_id(v) + " self-adjoint", pv[v].transposed(), pv[v]);
    record("P_" + g.vertex_id(v) + " idempotent", pv[v] * pv[v], pv[v]);
    sum_p = sum_p + pv[v];
  }
  record("sum_v P_v = I", sum_p, SparseMat::identity(n_L));

  for (int e = 0; e < g.edge_count(); ++e) {
    BisectionSymbol se = edge_symbol(g, e);
    SparseMat s_up = symbol_block(g, w, se, L);                 // L -> L+1
    SparseMat s_down = symbol_block(g, w, adjoint(se), L + 1);  // L+1 -> L
    record("S_" + g.edge_id(e) + "* S_" + g.edge_id(e) + " = P_s(e)", s_down * s_up,
           pv[g.edge(e).src]);
  }

  for (int v = 0; v < g.vertex_count(); ++v) {
    SparseMat total(n_L, n_L);
    for (int e : g.in_edges(v)) {
      BisectionSymbol se = edge_symbol(g, e);
      SparseMat s_up = symbol_block(g, w, se, L - 1);            // L-1 -> L
      SparseMat s_down = symbol_block(g, w, adjoint(se), L);     // L -> L-1
      total = total + s_up * s_down;
    }
    record("sum_{dst(e)=" + g.vertex_id(v) + "} S_e S_e* = P_" + g.vertex_id(v), total, pv[v]);
  }
  return report;
}

KernelReport kernel_ideal(const DirectedGraph& g, const VertexSet& H, int depth) {
  if (auto why = ideal_regime_violation(g, H)) throw input_error(*why);
  MarkovWeights w = ideal_weights(g, H);
  std::vector<char> in_h(g.vertex_count(), 0);
  for (int v : H) in_h[v] = 1;

  KernelReport report;
  std::vector<std::vector<Path>> by_length;
  for (int n = 0; n <= depth; ++n) by_length.push_back(paths_of_length(g, n));
  std::map<int, CylinderBasis> bases;
  auto basis_at = [&](int level) -> const CylinderBasis& {
    auto it = bases.find(level);
    if (it == bases.end()) it = bases.emplace(level, cylinder_basis(g, w, level)).first;
    return it->second;
  };

  // Group path pairs by common source vertex.
  std::vector<std::vector<Path>> by_source(g.vertex_count());
  for (int n = 0; n <= depth; ++n)
    for (const Path& p : by_length[n]) by_source[p.source()].push_back(p);

  for (int v = 0; v < g.vertex_count(); ++v) {
    for (const Path& alpha : by_source[v]) {
      for (const Path& beta : by_source[v]) {
        BisectionSymbol s{alpha, beta};
        int level = std::max({alpha.length(), beta.length(), 1});
        const CylinderBasis& domain = basis_at(level);
        const CylinderBasis& codomain = basis_at(level + s.degree());
        SparseMat block(static_cast<int>(codomain.paths.size()),
                        static_cast<int>(domain.paths.size()));
        accumulate_symbol(g, s, 1, domain, codomain, block);
        ++report.symbols_checked;
        bool zero = block.is_zero();
        bool in = in_h[v] != 0;
        if (zero != in) {
          report.pass = false;
          report.mismatches.push_back({s, zero, in});
          if (report.mismatches.size() > 16) return report;
        }
      }
    }
  }
  return report;
}

}  // namespace etalerep
