#include <doctest.h>

#include <map>

#include "etalerep/action.hpp"
#include "etalerep/errors.hpp"
#include "etalerep/fractafold.hpp"
#include "etalerep/koopman.hpp"

using namespace etalerep;

namespace {

using Triple = std::tuple<std::string, std::string, std::string>;

DirectedGraph full_shift(int n) {
  std::vector<Triple> edges;
  for (int i = 1; i <= n; ++i) edges.emplace_back("e" + std::to_string(i), "v", "v");
  return DirectedGraph({"v"}, edges);
}

IFSSpec cantor_pair() { return IFSSpec::uniform(2); }

IFSSpec weighted_three() {
  IFSSpec spec;
  spec.branches = 3;
  spec.weights = {make_rational(1, 2), make_rational(1, 4), make_rational(1, 4)};
  spec.totally_disconnected = true;
  spec.validate();
  return spec;
}

}  // namespace

TEST_CASE("IFS validation") {
  CHECK_NOTHROW(cantor_pair().validate());
  CHECK_NOTHROW(weighted_three().validate());

  IFSSpec zero_weight;
  zero_weight.branches = 2;
  zero_weight.weights = {Rational(1), Rational(0)};
  CHECK_THROWS_AS(zero_weight.validate(), input_error);

  IFSSpec overlapping = cantor_pair();
  overlapping.totally_disconnected = false;
  CHECK_THROWS_AS(overlapping.validate(), input_error);

  IFSSpec single;
  single.branches = 1;
  single.weights = {Rational(1)};
  CHECK_THROWS_AS(single.validate(), input_error);
}

TEST_CASE("mu_infinity on reference cells") {
  IFSSpec spec = cantor_pair();

  // Z(i) x F_i^{-1}(K) has full mass 1
  for (int i = 0; i < 2; ++i) {
    FractafoldCell cell{{i}, 1, {}};
    CHECK(mu_infinity(spec, cell) == 1);
  }
  // the level-0 slab X x K
  CHECK(mu_infinity(spec, FractafoldCell{{}, 0, {}}) == 1);

  // non-normal cells normalize, never error: Z(01) x K at level 0
  IFSSpec w3 = weighted_three();
  FractafoldCell raw{{0, 1}, 0, {}};
  CHECK(mu_infinity(w3, raw) == w3.weights[0] * w3.weights[1]);
  FractafoldCell canonical = normal_form(raw);
  CHECK(is_normal(canonical));
  CHECK(mu_infinity(w3, canonical) == w3.weights[0] * w3.weights[1]);
}

TEST_CASE("mu_infinity is additive under both refinements") {
  for (const IFSSpec& spec : {cantor_pair(), weighted_three()}) {
    for (const FractafoldCell& cell : cell_basis(spec, 2, 1)) {
      Rational mass = mu_infinity(spec, cell);
      Rational via_base = 0;
      for (const auto& child : refine_base(spec, cell)) via_base += mu_infinity(spec, child);
      CHECK(via_base == mass);
      Rational via_fractal = 0;
      for (const auto& child : refine_fractal(spec, cell))
        via_fractal += mu_infinity(spec, child);
      CHECK(via_fractal == mass);
    }
  }
}

TEST_CASE("normal form is confluent across refinement order") {
  IFSSpec spec = weighted_three();
  for (int base_depth = 0; base_depth <= 3; ++base_depth) {
    for (const FractafoldCell& cell : cell_basis(spec, base_depth, 1)) {
      // base then fractal
      std::map<FractafoldCell, int> first;
      for (const auto& b : refine_base(spec, cell))
        for (const auto& bf : refine_fractal(spec, b)) first[normal_form(bf)] += 1;
      // fractal then base
      std::map<FractafoldCell, int> second;
      for (const auto& f : refine_fractal(spec, cell))
        for (const auto& fb : refine_base(spec, f)) second[normal_form(fb)] += 1;
      CHECK(first == second);
    }
  }
}

TEST_CASE("generator moves preserve mu_infinity") {
  for (const IFSSpec& spec : {cantor_pair(), weighted_three()}) {
    for (int depth = 0; depth <= 4; ++depth) {
      for (const FractafoldCell& cell : cell_basis(spec, depth, 1)) {
        for (int i = 0; i < spec.branches; ++i) {
          FractafoldCell image = cell;
          image.base.insert(image.base.begin(), i);
          ++image.level;
          CHECK(mu_infinity(spec, image) == mu_infinity(spec, cell));
        }
      }
    }
  }
}

TEST_CASE("fractafold isometries and the O_N relations") {
  IFSSpec spec = cantor_pair();

  // kappa(S_i) 1_{F_0} = 1_{Z(i) x F_i^{-1} K}: nonzero on the full cell
  for (int i = 0; i < 2; ++i) {
    CellMatrix m = fractafold_isometry(spec, i, 0, 0);
    CHECK(m.mat.rows() == 2);
    CHECK(m.mat.cols() == 1);
    CHECK(m.mat.nnz() == 1);
    CHECK_FALSE(m.mat.is_zero());
  }

  // S_i* S_i = I at level 3; sum_i S_i S_i* = I at matched level
  for (int i = 0; i < 2; ++i) {
    CellMatrix up = fractafold_isometry(spec, i, 3, 1);
    CHECK((up.mat.transposed() * up.mat == SparseMat::identity(up.mat.cols())));
  }
  int n = static_cast<int>(cell_basis(spec, 3, 1).size());
  SparseMat total(n, n);
  for (int i = 0; i < 2; ++i) {
    CellMatrix up = fractafold_isometry(spec, i, 2, 1);
    total = total + up.mat * up.mat.transposed();
  }
  CHECK(total == SparseMat::identity(n));

  CHECK(verify_on_fractafold(cantor_pair(), 4, 0).pass);
  CHECK(verify_on_fractafold(cantor_pair(), 4, 1).pass);
  CHECK(verify_on_fractafold(weighted_three(), 3, 1).pass);
}

TEST_CASE("fractafold matrices match the unit-space O_N model") {
  // at fractal depth 0 the cell model IS the cylinder model
  IFSSpec spec = weighted_three();
  DirectedGraph g = full_shift(3);
  MarkovWeights w;
  w.mu0 = {Rational(1)};
  w.p = {spec.weights[0], spec.weights[1], spec.weights[2]};

  for (int L = 1; L <= 3; ++L) {
    for (int i = 0; i < 3; ++i) {
      CellMatrix cell = fractafold_isometry(spec, i, L, 0);
      SparseMat unitspace =
          koopman_matrix(g, w, AlgebraElement::from_symbol(edge_symbol(g, i)), L).single_block();
      CHECK(cell.mat == unitspace);
    }
  }

  // at fractal depth M the isometry is the unit-space one tensored with the
  // identity on the fractal leg
  for (int i = 0; i < 3; ++i) {
    CellMatrix m1 = fractafold_isometry(spec, i, 2, 1);
    SparseMat base =
        koopman_matrix(g, w, AlgebraElement::from_symbol(edge_symbol(g, i)), 2).single_block();
    const int f = 3;  // fractal block size
    CHECK(m1.mat.nnz() == base.nnz() * f);
    for (const auto& [ij, v] : base.entries())
      for (int t = 0; t < f; ++t) CHECK(m1.mat.at(ij.first * f + t, ij.second * f + t) == v);
  }
}

TEST_CASE("lifted shift on the fractafold") {
  IFSSpec spec = cantor_pair();
  DirectedGraph g = full_shift(2);
  auto action = fractafold_action(g, spec, 1);
  LiftedShift lifted = lift_shift(*action);

  // T~ shifts the base word and leaves the normal-form fractal word alone
  for (const FractafoldCell& cell : cell_basis(spec, 3, 1)) {
    SpacePoint image = lifted.apply(SpacePoint(cell));
    const FractafoldCell& out = std::get<FractafoldCell>(image);
    CHECK(out.base == std::vector<int>(cell.base.begin() + 1, cell.base.end()));
    CHECK(out.fractal == cell.fractal);
    CHECK(mu_infinity(spec, out) == mu_infinity(spec, cell));
  }

  lifted.check_omega_commutes(4);
  lifted.check_axioms(3);
  lifted.check_psi_products(3);
}
