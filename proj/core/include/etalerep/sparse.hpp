#pragma once

#include <map>
#include <utility>
#include <vector>

#include "etalerep/rational.hpp"

namespace etalerep {

// Exact sparse matrix over the rationals; entries stay sorted by (row, col)
// so serialization and comparison are deterministic.
class SparseMat {
 public:
  SparseMat() = default;
  SparseMat(int rows, int cols) : rows_(rows), cols_(cols) {}
  static SparseMat identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nnz() const { return static_cast<int>(entries_.size()); }
  bool is_zero() const { return entries_.empty(); }

  void add(int i, int j, const Rational& v);
  void set(int i, int j, const Rational& v);
  Rational at(int i, int j) const;

  const std::map<std::pair<int, int>, Rational>& entries() const { return entries_; }

  SparseMat operator+(const SparseMat& o) const;
  SparseMat operator-(const SparseMat& o) const;
  SparseMat operator*(const SparseMat& o) const;
  SparseMat scaled(const Rational& c) const;
  SparseMat transposed() const;

  friend bool operator==(const SparseMat& a, const SparseMat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

  // At most one nonzero per row and per column.
  bool is_partial_permutation() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::map<std::pair<int, int>, Rational> entries_;
};

}  // namespace etalerep
