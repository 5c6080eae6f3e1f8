#pragma once

#include <string>
#include <vector>

#include "etalerep/rational.hpp"
#include "etalerep/sparse.hpp"

namespace etalerep {

// Totally disconnected IFS given purely symbolically: N branch labels with
// probability weights. Contraction ratios are carried for reporting only;
// the cell combinatorics never uses geometry.
struct IFSSpec {
  int branches = 0;
  std::vector<Rational> weights;
  bool totally_disconnected = true;
  std::vector<double> ratios;  // optional, reporting only

  static IFSSpec uniform(int n);
  void validate() const;  // weights positive, sum 1, flag set
};

// Symbolic cell Z(base) x F_{base(level)}^{-1}(F_fractal(K)). Normal form
// pushes the blow-up level to |base|, appending the traversed base letters
// to the fractal word; in normal form the cell mass is the product of the
// fractal-word weights.
struct FractafoldCell {
  std::vector<int> base;     // branch labels
  int level = 0;             // 0 <= level <= |base|
  std::vector<int> fractal;  // branch labels

  friend auto operator<=>(const FractafoldCell& a, const FractafoldCell& b) = default;
};

FractafoldCell normal_form(const FractafoldCell& cell);
bool is_normal(const FractafoldCell& cell);

// mu_infinity of the cell: nu(T^level Z(base)) * mu(F_fractal(K)); cells are
// normalized first, never rejected.
Rational mu_infinity(const IFSSpec& spec, const FractafoldCell& cell);

// One-step refinements: extending the base word (cylinder split) or the
// fractal word (cell split); both partition the cell.
std::vector<FractafoldCell> refine_base(const IFSSpec& spec, const FractafoldCell& cell);
std::vector<FractafoldCell> refine_fractal(const IFSSpec& spec, const FractafoldCell& cell);

// Cells at base depth L and fractal depth M, sorted; all have positive mass.
std::vector<FractafoldCell> cell_basis(const IFSSpec& spec, int base_depth, int fractal_depth);

struct CellMatrix {
  SparseMat mat;
  int domain_base_depth = 0;
  int codomain_base_depth = 0;
  int fractal_depth = 0;
};

// kappa(S_i) on normalized cell indicators: (w,u) -> (i w, u) with
// coefficient 1 (the measure is G-invariant). Maps base depth L to L+1.
CellMatrix fractafold_isometry(const IFSSpec& spec, int branch, int base_depth,
                               int fractal_depth = 0);
// Adjoint: strips the leading branch letter, kills mismatched cells.
CellMatrix fractafold_isometry_adjoint(const IFSSpec& spec, int branch, int base_depth,
                                       int fractal_depth = 0);

struct FractafoldReport {
  bool pass = true;
  std::vector<std::string> failures;
};

// Nonvanishing of every kappa(S_i) plus the O_N relations at the given
// level: S_i* S_i = I and sum_i S_i S_i* = I, exact rational identities.
FractafoldReport verify_on_fractafold(const IFSSpec& spec, int base_depth, int fractal_depth = 0);

}  // namespace etalerep
