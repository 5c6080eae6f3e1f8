#include "etalerep/action.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "etalerep/errors.hpp"

namespace etalerep {

std::string point_label(const DirectedGraph& g, const SpacePoint& p) {
  if (std::holds_alternative<Path>(p)) return std::get<Path>(p).label(g);
  const FractafoldCell& c = std::get<FractafoldCell>(p);
  std::string s = "cell[";
  for (size_t i = 0; i < c.base.size(); ++i) s += (i ? "." : "") + std::to_string(c.base[i]);
  s += "|" + std::to_string(c.level) + "|";
  for (size_t i = 0; i < c.fractal.size(); ++i) s += (i ? "." : "") + std::to_string(c.fractal[i]);
  return s + "]";
}

namespace {

class UnitSpaceAction final : public ActionSpec {
 public:
  explicit UnitSpaceAction(const DirectedGraph& g) : g_(&g) {}

  const DirectedGraph& base_graph() const override { return *g_; }

  Path omega(const SpacePoint& p) const override { return std::get<Path>(p); }

  std::optional<SpacePoint> act(const BisectionSymbol& s, const SpacePoint& p) const override {
    const Path& x = std::get<Path>(p);
    if (!s.beta.is_prefix_of(x)) return std::nullopt;
    Path rest = x.length() == s.beta.length()
                    ? Path::empty_at(*g_, x.source())
                    : Path::of_edges(*g_, std::vector<int>(x.edges().begin() + s.beta.length(),
                                                           x.edges().end()));
    return SpacePoint(s.alpha.concatenated(*g_, rest));
  }

  std::vector<SpacePoint> sample_points(int depth) const override {
    std::vector<SpacePoint> pts;
    for (const Path& p : paths_of_length(*g_, depth)) pts.emplace_back(p);
    return pts;
  }

 private:
  const DirectedGraph* g_;
};

class FractafoldAction final : public ActionSpec {
 public:
  FractafoldAction(const DirectedGraph& g, IFSSpec spec, int fractal_depth)
      : g_(&g), spec_(std::move(spec)), fractal_depth_(fractal_depth) {
    spec_.validate();
    if (g.vertex_count() != 1 || g.edge_count() != spec_.branches)
      throw input_error("fractafold action needs the full shift on the IFS alphabet");
  }

  const DirectedGraph& base_graph() const override { return *g_; }

  Path omega(const SpacePoint& p) const override {
    const FractafoldCell& c = std::get<FractafoldCell>(p);
    return word_to_path(c.base);
  }

  std::optional<SpacePoint> act(const BisectionSymbol& s, const SpacePoint& p) const override {
    FractafoldCell c = normal_form(std::get<FractafoldCell>(p));
    std::vector<int> beta = path_to_word(s.beta);
    if (beta.size() > c.base.size()) return std::nullopt;
    if (!std::equal(beta.begin(), beta.end(), c.base.begin())) return std::nullopt;
    // (alpha tau, k, beta tau) . (beta tau', t) = (alpha tau', F-reindexed t):
    // in normal form only the base word changes.
    std::vector<int> alpha = path_to_word(s.alpha);
    std::vector<int> base = alpha;
    base.insert(base.end(), c.base.begin() + beta.size(), c.base.end());
    FractafoldCell image{std::move(base), 0, c.fractal};
    image.level = static_cast<int>(image.base.size());
    return SpacePoint(std::move(image));
  }

  std::vector<SpacePoint> sample_points(int depth) const override {
    std::vector<SpacePoint> pts;
    for (const FractafoldCell& c : cell_basis(spec_, depth, fractal_depth_)) pts.emplace_back(c);
    return pts;
  }

 private:
  Path word_to_path(const std::vector<int>& word) const {
    if (word.empty()) return Path::empty_at(*g_, 0);
    return Path::of_edges(*g_, std::vector<int>(word.begin(), word.end()));
  }
  std::vector<int> path_to_word(const Path& p) const { return p.edges(); }

  const DirectedGraph* g_;
  IFSSpec spec_;
  int fractal_depth_;
};

}  // namespace

std::unique_ptr<ActionSpec> unit_space_action(const DirectedGraph& g) {
  return std::make_unique<UnitSpaceAction>(g);
}

std::unique_ptr<ActionSpec> fractafold_action(const DirectedGraph& full_shift, const IFSSpec& spec,
                                              int fractal_depth) {
  return std::make_unique<FractafoldAction>(full_shift, spec, fractal_depth);
}

SpacePoint LiftedShift::apply(const SpacePoint& z) const {
  const DirectedGraph& g = spec_->base_graph();
  Path x = spec_->omega(z);
  if (x.is_empty()) throw domain_error("lifted shift needs an anchor of depth >= 1");
  BisectionSymbol backward = adjoint(edge_symbol(g, x.edges().front()));
  auto image = spec_->act(backward, z);
  if (!image)
    throw action_spec_error("axiom i (anchor compatibility): action undefined on its own fiber");
  return *image;
}

namespace {

std::vector<BisectionSymbol> check_symbols(const DirectedGraph& g, int max_len, size_t cap) {
  std::vector<BisectionSymbol> symbols;
  std::vector<Path> pool;
  for (int n = 0; n <= max_len; ++n)
    for (const Path& p : paths_of_length(g, n)) pool.push_back(p);
  for (const Path& a : pool)
    for (const Path& b : pool) {
      if (a.source() != b.source()) continue;
      symbols.push_back({a, b});
      if (symbols.size() >= cap) return symbols;
    }
  return symbols;
}

}  // namespace

void LiftedShift::check_omega_commutes(int depth) const {
  const DirectedGraph& g = spec_->base_graph();
  for (int d = 1; d <= depth; ++d) {
    for (const SpacePoint& z : spec_->sample_points(d)) {
      Path expected = spec_->omega(z).shifted(g);
      Path got = spec_->omega(apply(z));
      if (!(got == expected))
        throw action_spec_error("omega does not intertwine the lifted shift at point " +
                                point_label(g, z));
    }
  }
}

void LiftedShift::check_axioms(int depth) const {
  const DirectedGraph& g = spec_->base_graph();
  auto symbols = check_symbols(g, 2, 40);
  for (int d = 2; d <= depth; ++d) {
    for (const SpacePoint& p : spec_->sample_points(d)) {
      Path anchor = spec_->omega(p);

      // iii: the unit over the anchor acts trivially
      BisectionSymbol unit = vertex_symbol(g, anchor.range());
      auto fixed = spec_->act(unit, p);
      if (!fixed || !(point_label(g, *fixed) == point_label(g, p)))
        throw action_spec_error("axiom iii (units act trivially) fails at " + point_label(g, p));

      for (const BisectionSymbol& s : symbols) {
        auto image = spec_->act(s, p);
        if (!image) continue;
        // i: the anchor of the image is the groupoid move of the anchor
        if (!s.beta.is_prefix_of(anchor))
          throw action_spec_error("axiom i (anchor compatibility): action defined off Z(beta) at " +
                                  point_label(g, p));
        Path rest = anchor.length() == s.beta.length()
                        ? Path::empty_at(g, anchor.source())
                        : Path::of_edges(g, std::vector<int>(anchor.edges().begin() +
                                                                 s.beta.length(),
                                                             anchor.edges().end()));
        Path expected = s.alpha.concatenated(g, rest);
        if (!(spec_->omega(*image) == expected))
          throw action_spec_error("axiom i (anchor compatibility) fails at " + point_label(g, p));

        // ii: composable products act as composed maps
        for (const BisectionSymbol& s2 : symbols) {
          auto mid = spec_->act(s2, p);
          if (!mid) continue;
          auto composite = multiply(g, s, s2);
          auto via_pair = spec_->act(s, *mid);
          if (!composite) continue;
          auto via_product = spec_->act(*composite, p);
          bool pair_defined = via_pair.has_value();
          bool prod_defined = via_product.has_value();
          if (pair_defined != prod_defined ||
              (pair_defined &&
               !(point_label(g, *via_pair) == point_label(g, *via_product))))
            throw action_spec_error("axiom ii (action respects composition) fails at " +
                                    point_label(g, p));
        }
      }
    }
  }
}

void LiftedShift::check_psi_products(int depth) const {
  const DirectedGraph& g = spec_->base_graph();
  auto symbols = check_symbols(g, 2, 40);
  for (const SpacePoint& p : spec_->sample_points(depth)) {
    for (const BisectionSymbol& s2 : symbols) {
      auto mid = spec_->act(s2, p);
      if (!mid) continue;
      for (const BisectionSymbol& s1 : symbols) {
        auto top = spec_->act(s1, *mid);
        if (!top) continue;
        auto composite = multiply(g, s1, s2);
        if (!composite) continue;
        auto direct = spec_->act(*composite, p);

        // Psi of the composed tilde-element: ((omega(top), k1+k2, omega(p)), p)
        if (!direct)
          throw action_spec_error("Psi product check: composite element undefined at " +
                                  point_label(g, p));
        Path lhs_range = spec_->omega(*top);
        Path rhs_range = spec_->omega(*direct);
        int lhs_deg = s1.degree() + s2.degree();
        int rhs_deg = composite->degree();
        if (!(lhs_range == rhs_range) || lhs_deg != rhs_deg ||
            !(point_label(g, *top) == point_label(g, *direct)))
          throw action_spec_error("Psi does not respect products at " + point_label(g, p));
      }
    }
  }
}

LiftedShift lift_shift(const ActionSpec& spec) { return LiftedShift(spec); }

std::vector<BisectionSymbol> standard_generators(const DirectedGraph& g) {
  std::vector<BisectionSymbol> gens;
  for (int e = 0; e < g.edge_count(); ++e) gens.push_back(adjoint(edge_symbol(g, e)));
  return gens;
}

namespace {

struct BallElement {
  int m = 0;
  Path word;
  friend auto operator<=>(const BallElement& a, const BallElement& b) = default;
};

BallElement normalize_ball(const DirectedGraph& g, const Path& base, int m, Path word) {
  while (m >= 1 && !word.is_empty() && word.edges().back() == base.edges()[m - 1]) {
    if (word.length() == 1)
      word = Path::empty_at(g, word.range());
    else
      word = Path::of_edges(g, std::vector<int>(word.edges().begin(), word.edges().end() - 1));
    --m;
  }
  if (word.is_empty()) {
    int v = m < base.length() ? g.edge(base.edges()[m]).dst : base.source();
    word = Path::empty_at(g, v);
  }
  return {m, word};
}

// g . h for h in Z(alpha', beta'): strip alpha' from the y-leg, prepend
// beta'. nullopt when alpha' does not match; resource_error when matching
// needs base letters beyond the truncation.
std::optional<BallElement> right_multiply(const DirectedGraph& g, const Path& base,
                                          const BallElement& el, const BisectionSymbol& h) {
  const Path& alpha = h.alpha;
  const Path& beta = h.beta;
  if (alpha.length() <= el.word.length()) {
    if (!alpha.is_prefix_of(el.word)) return std::nullopt;
    Path rest = alpha.length() == el.word.length()
                    ? Path::empty_at(g, el.word.source())
                    : Path::of_edges(g, std::vector<int>(el.word.edges().begin() + alpha.length(),
                                                         el.word.edges().end()));
    return normalize_ball(g, base, el.m, beta.concatenated(g, rest));
  }
  // alpha continues into T^m(base)
  if (!el.word.is_empty() &&
      !std::equal(el.word.edges().begin(), el.word.edges().end(), alpha.edges().begin()))
    return std::nullopt;
  if (el.word.is_empty() && alpha.range() != el.word.range()) return std::nullopt;
  int consumed = alpha.length() - el.word.length();
  if (el.m + consumed > base.length())
    throw resource_error("cayley ball needs a deeper base truncation", el.m + consumed);
  for (int i = 0; i < consumed; ++i)
    if (alpha.edges()[el.word.length() + i] != base.edges()[el.m + i]) return std::nullopt;
  return normalize_ball(g, base, el.m + consumed, beta);
}

}  // namespace

CayleyBall cayley_ball(const DirectedGraph& g, const std::vector<BisectionSymbol>& generators,
                       const Path& base, int radius) {
  if (radius < 0) throw input_error("radius must be nonnegative");
  std::vector<BisectionSymbol> moves = generators;
  for (const auto& s : generators) moves.push_back(adjoint(s));

  BallElement unit = normalize_ball(g, base, 0, Path::empty_at(g, base.range()));
  std::map<BallElement, int> dist;
  dist[unit] = 0;
  std::deque<BallElement> queue{unit};
  while (!queue.empty()) {
    BallElement el = queue.front();
    queue.pop_front();
    int d = dist[el];
    if (d == radius) continue;
    for (const auto& h : moves) {
      auto next = right_multiply(g, base, el, h);
      if (!next) continue;
      if (dist.emplace(*next, d + 1).second) queue.push_back(*next);
    }
  }

  auto label = [&g](const BallElement& el) {
    return "m" + std::to_string(el.m) + "|" + el.word.label(g);
  };

  std::vector<std::string> vertices;
  for (const auto& [el, d] : dist) vertices.push_back(label(el));
  std::vector<std::tuple<std::string, std::string, std::string>> edges;
  for (const auto& [el, d] : dist) {
    for (size_t gi = 0; gi < generators.size(); ++gi) {
      auto next = right_multiply(g, base, el, generators[gi]);
      if (!next || !dist.count(*next)) continue;
      edges.emplace_back(label(el) + ">g" + std::to_string(gi), label(el), label(*next));
    }
  }

  CayleyBall ball;
  ball.radius = radius;
  ball.graph = DirectedGraph(std::move(vertices), std::move(edges));
  ball.distance.assign(ball.graph.vertex_count(), 0);
  for (const auto& [el, d] : dist) {
    int v = ball.graph.vertex_index(label(el));
    ball.distance[v] = d;
  }
  return ball;
}

}  // namespace etalerep
