#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "etalerep/fractafold.hpp"
#include "etalerep/symbolic.hpp"

namespace etalerep {

// Symbolic point of a left G(X,T)-space: a truncated base point (finite
// path) for the unit-space action, or a fractafold cell.
using SpacePoint = std::variant<Path, FractafoldCell>;

std::string point_label(const DirectedGraph& g, const SpacePoint& p);

// A left G(X,T)-space described by its anchor and its action rule on
// symbolic points. act() applies the element (alpha tau, k, beta tau)
// determined by the symbol and the point; nullopt when the anchor does not
// extend beta.
class ActionSpec {
 public:
  virtual ~ActionSpec() = default;
  virtual const DirectedGraph& base_graph() const = 0;
  virtual Path omega(const SpacePoint& p) const = 0;
  virtual std::optional<SpacePoint> act(const BisectionSymbol& s, const SpacePoint& p) const = 0;
  // Deterministic sample of points whose anchors have the given depth.
  virtual std::vector<SpacePoint> sample_points(int depth) const = 0;
};

// X acting on itself: points are finite paths, omega is the identity.
std::unique_ptr<ActionSpec> unit_space_action(const DirectedGraph& g);

// The fractafold bundle over the full N-shift; points are cells.
std::unique_ptr<ActionSpec> fractafold_action(const DirectedGraph& full_shift,
                                              const IFSSpec& spec, int fractal_depth = 0);

// T~(z) = (T(omega z), -1, omega z) . z, executable on symbolic points, with
// the checkers backing the action-groupoid identification G ⋉ Y = G(Y,T~).
class LiftedShift {
 public:
  explicit LiftedShift(const ActionSpec& spec) : spec_(&spec) {}

  SpacePoint apply(const SpacePoint& z) const;

  // omega(T~ z) = T(omega z) on every sampled point up to the given depth.
  void check_omega_commutes(int depth) const;
  // Def 2.3 axioms on sampled points; throws action_spec_error naming the
  // violated axiom.
  void check_axioms(int depth) const;
  // Psi((z, k, y)) = ((omega z, k, omega y), y) respects products: acting by
  // a composable symbol pair equals acting by the product symbol.
  void check_psi_products(int depth) const;

  const ActionSpec& spec() const { return *spec_; }

 private:
  const ActionSpec* spec_;
};

LiftedShift lift_shift(const ActionSpec& spec);

struct CayleyBall {
  DirectedGraph graph;
  // distance from the base unit, aligned with graph vertex indices
  std::vector<int> distance;
  int radius = 0;
};

// Ball of the Cayley graph of the fiber over the truncated point `base`:
// vertices are groupoid elements reachable by at most `radius` right
// multiplications by S u S^{-1}; an edge g1 -> g2 for each h in S with
// g2 = g1 h. Throws resource_error when the base path is too short.
CayleyBall cayley_ball(const DirectedGraph& g, const std::vector<BisectionSymbol>& generators,
                       const Path& base, int radius);

// The standard generating set { Z(empty_{s(e)}, e) : e edge }.
std::vector<BisectionSymbol> standard_generators(const DirectedGraph& g);

}  // namespace etalerep
