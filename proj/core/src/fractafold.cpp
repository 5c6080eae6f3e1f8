#include "etalerep/fractafold.hpp"

#include <algorithm>
#include <map>

#include "etalerep/errors.hpp"

namespace etalerep {

IFSSpec IFSSpec::uniform(int n) {
  IFSSpec spec;
  spec.branches = n;
  spec.weights.assign(n, Rational(1, n));
  spec.totally_disconnected = true;
  spec.validate();
  return spec;
}

void IFSSpec::validate() const {
  if (branches < 2) throw input_error("an IFS needs at least two branches");
  if (!totally_disconnected)
    throw input_error("only totally disconnected systems have a symbolic cell model");
  if (static_cast<int>(weights.size()) != branches)
    throw input_error("need one weight per branch");
  Rational total = 0;
  for (const auto& p : weights) {
    if (p <= 0) throw input_error("branch weights must be strictly positive");
    total += p;
  }
  if (total != 1) throw input_error("branch weights must sum to 1");
}

FractafoldCell normal_form(const FractafoldCell& cell) {
  if (cell.level < 0 || cell.level > static_cast<int>(cell.base.size()))
    throw input_error("cell level outside [0, |base|]");
  FractafoldCell c = cell;
  while (c.level < static_cast<int>(c.base.size())) {
    c.fractal.push_back(c.base[c.level]);
    ++c.level;
  }
  return c;
}

bool is_normal(const FractafoldCell& cell) {
  return cell.level == static_cast<int>(cell.base.size());
}

Rational mu_infinity(const IFSSpec& spec, const FractafoldCell& cell) {
  spec.validate();
  FractafoldCell c = normal_form(cell);
  Rational mass = 1;
  for (int u : c.fractal) {
    if (u < 0 || u >= spec.branches) throw input_error("fractal letter outside the alphabet");
    mass *= spec.weights[u];
  }
  for (int b : c.base)
    if (b < 0 || b >= spec.branches) throw input_error("base letter outside the alphabet");
  return mass;
}

std::vector<FractafoldCell> refine_base(const IFSSpec& spec, const FractafoldCell& cell) {
  FractafoldCell c = normal_form(cell);
  std::vector<FractafoldCell> out;
  for (int i = 0; i < spec.branches; ++i) {
    FractafoldCell child = c;
    child.base.push_back(i);
    child.fractal.push_back(i);
    ++child.level;
    out.push_back(std::move(child));
  }
  return out;
}

std::vector<FractafoldCell> refine_fractal(const IFSSpec& spec, const FractafoldCell& cell) {
  FractafoldCell c = normal_form(cell);
  std::vector<FractafoldCell> out;
  for (int j = 0; j < spec.branches; ++j) {
    FractafoldCell child = c;
    child.fractal.insert(child.fractal.begin(), j);
    out.push_back(std::move(child));
  }
  return out;
}

std::vector<FractafoldCell> cell_basis(const IFSSpec& spec, int base_depth, int fractal_depth) {
  spec.validate();
  if (base_depth < 0 || fractal_depth < 0) throw input_error("cell depths must be nonnegative");
  std::vector<std::vector<int>> words{{}};
  auto extend = [&spec](const std::vector<std::vector<int>>& in) {
    std::vector<std::vector<int>> out;
    for (const auto& w : in)
      for (int i = 0; i < spec.branches; ++i) {
        auto next = w;
        next.push_back(i);
        out.push_back(std::move(next));
      }
    return out;
  };
  std::vector<std::vector<int>> bases{{}};
  for (int i = 0; i < base_depth; ++i) bases = extend(bases);
  std::vector<std::vector<int>> fractals{{}};
  for (int i = 0; i < fractal_depth; ++i) fractals = extend(fractals);

  std::vector<FractafoldCell> cells;
  for (const auto& b : bases)
    for (const auto& u : fractals)
      cells.push_back({b, static_cast<int>(b.size()), u});
  std::sort(cells.begin(), cells.end());
  return cells;
}

namespace {

std::map<FractafoldCell, int> index_of(const std::vector<FractafoldCell>& cells) {
  std::map<FractafoldCell, int> idx;
  for (size_t i = 0; i < cells.size(); ++i) idx.emplace(cells[i], static_cast<int>(i));
  return idx;
}

}  // namespace

CellMatrix fractafold_isometry(const IFSSpec& spec, int branch, int base_depth,
                               int fractal_depth) {
  spec.validate();
  if (branch < 0 || branch >= spec.branches) throw input_error("branch outside the alphabet");
  if (base_depth < 0)
    throw resource_error("isometry needs base depth >= 0", 0);
  auto domain = cell_basis(spec, base_depth, fractal_depth);
  auto codomain = cell_basis(spec, base_depth + 1, fractal_depth);
  auto idx = index_of(codomain);

  CellMatrix m;
  m.domain_base_depth = base_depth;
  m.codomain_base_depth = base_depth + 1;
  m.fractal_depth = fractal_depth;
  m.mat = SparseMat(static_cast<int>(codomain.size()), static_cast<int>(domain.size()));
  for (size_t col = 0; col < domain.size(); ++col) {
    FractafoldCell image = domain[col];
    image.base.insert(image.base.begin(), branch);
    ++image.level;
    m.mat.add(idx.at(image), static_cast<int>(col), 1);
  }
  return m;
}

CellMatrix fractafold_isometry_adjoint(const IFSSpec& spec, int branch, int base_depth,
                                       int fractal_depth) {
  if (base_depth < 1)
    throw resource_error("adjoint isometry needs base depth >= 1", 1);
  CellMatrix up = fractafold_isometry(spec, branch, base_depth - 1, fractal_depth);
  CellMatrix m;
  m.domain_base_depth = base_depth;
  m.codomain_base_depth = base_depth - 1;
  m.fractal_depth = fractal_depth;
  m.mat = up.mat.transposed();
  return m;
}

FractafoldReport verify_on_fractafold(const IFSSpec& spec, int base_depth, int fractal_depth) {
  spec.validate();
  if (base_depth < 1) throw input_error("verification needs base depth >= 1");
  FractafoldReport report;
  auto fail = [&report](std::string why) {
    report.pass = false;
    report.failures.push_back(std::move(why));
  };

  const int n = static_cast<int>(cell_basis(spec, base_depth, fractal_depth).size());
  SparseMat sum_ranges(n, n);
  for (int i = 0; i < spec.branches; ++i) {
    CellMatrix up = fractafold_isometry(spec, i, base_depth, fractal_depth);
    if (up.mat.is_zero()) fail("kappa(S_" + std::to_string(i + 1) + ") vanishes");
    SparseMat down = up.mat.transposed();
    int dom = up.mat.cols();
    if (!(down * up.mat == SparseMat::identity(dom)))
      fail("S_" + std::to_string(i + 1) + "* S_" + std::to_string(i + 1) + " != I at level " +
           std::to_string(base_depth));

    CellMatrix up_from_below = fractafold_isometry(spec, i, base_depth - 1, fractal_depth);
    sum_ranges = sum_ranges + up_from_below.mat * up_from_below.mat.transposed();
  }
  if (!(sum_ranges == SparseMat::identity(n)))
    fail("sum_i S_i S_i* != I at level " + std::to_string(base_depth));
  return report;
}

}  // namespace etalerep
