#include "etalerep/sparse.hpp"

#include <set>

#include "etalerep/errors.hpp"

namespace etalerep {

SparseMat SparseMat::identity(int n) {
  SparseMat m(n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

void SparseMat::add(int i, int j, const Rational& v) {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw input_error("matrix index out of range");
  if (v == 0) return;
  auto [it, inserted] = entries_.emplace(std::make_pair(i, j), v);
  if (!inserted) {
    it->second += v;
    if (it->second == 0) entries_.erase(it);
  }
}

void SparseMat::set(int i, int j, const Rational& v) {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw input_error("matrix index out of range");
  if (v == 0)
    entries_.erase({i, j});
  else
    entries_[{i, j}] = v;
}

Rational SparseMat::at(int i, int j) const {
  auto it = entries_.find({i, j});
  return it == entries_.end() ? Rational(0) : it->second;
}

SparseMat SparseMat::operator+(const SparseMat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw input_error("matrix shape mismatch in +");
  SparseMat r = *this;
  for (const auto& [ij, v] : o.entries_) r.add(ij.first, ij.second, v);
  return r;
}

SparseMat SparseMat::operator-(const SparseMat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw input_error("matrix shape mismatch in -");
  SparseMat r = *this;
  for (const auto& [ij, v] : o.entries_) r.add(ij.first, ij.second, -v);
  return r;
}

SparseMat SparseMat::operator*(const SparseMat& o) const {
  if (cols_ != o.rows_) throw input_error("matrix shape mismatch in *");
  std::vector<std::vector<std::pair<int, Rational>>> rows_of_o(o.rows_);
  for (const auto& [ij, v] : o.entries_) rows_of_o[ij.first].emplace_back(ij.second, v);
  SparseMat r(rows_, o.cols_);
  for (const auto& [ij, v] : entries_)
    for (const auto& [j, w] : rows_of_o[ij.second]) r.add(ij.first, j, v * w);
  return r;
}

SparseMat SparseMat::scaled(const Rational& c) const {
  SparseMat r(rows_, cols_);
  if (c == 0) return r;
  for (const auto& [ij, v] : entries_) r.set(ij.first, ij.second, v * c);
  return r;
}

SparseMat SparseMat::transposed() const {
  SparseMat r(cols_, rows_);
  for (const auto& [ij, v] : entries_) r.set(ij.second, ij.first, v);
  return r;
}

bool SparseMat::is_partial_permutation() const {
  std::set<int> seen_rows, seen_cols;
  for (const auto& [ij, v] : entries_) {
    if (!seen_rows.insert(ij.first).second) return false;
    if (!seen_cols.insert(ij.second).second) return false;
  }
  return true;
}

}  // namespace etalerep
