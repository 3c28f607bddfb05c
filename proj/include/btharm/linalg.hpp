#pragma once
//
// Exact rational linear algebra on sparse rows.
//

#include <gmpxx.h>

#include <utility>
#include <vector>

namespace bt {

using Rational = mpq_class;
using SparseVec = std::vector<std::pair<int, Rational>>;  // sorted by column, no zeros

/// Incremental Gauss-Jordan elimination.  Rows are kept fully reduced, the
/// pivot of each new row is its smallest surviving column.
class RowReducer {
 public:
  explicit RowReducer(int ncols);

  int ncols() const { return ncols_; }
  int rank() const { return static_cast<int>(pivot_cols_.size()); }
  /// Adds a row; returns false when it was already in the span.
  bool add(const SparseVec& row);
  /// Residual of v after reduction by the current rows (empty iff v is in the span).
  SparseVec reduce(const SparseVec& v) const;
  bool in_span(const SparseVec& v) const { return reduce(v).empty(); }
  /// Basis of {x : r . x = 0 for every row r}, one vector per free column,
  /// in increasing order of that column.
  std::vector<std::vector<Rational>> nullspace() const;
  const std::vector<int>& pivot_cols() const { return pivot_cols_; }

 private:
  int ncols_;
  std::vector<int> pivot_of_col_;  // row index or -1
  std::vector<int> pivot_cols_;
  std::vector<SparseVec> rows_;
  mutable std::vector<Rational> acc_;
  mutable std::vector<char> mark_;
};

SparseVec to_sparse(const std::vector<Rational>& dense);
Rational dot(const SparseVec& a, const std::vector<Rational>& x);

/// Rank by fraction-free (Bareiss) elimination on a dense integer matrix.
int rank_bareiss(std::vector<std::vector<mpz_class>> m);

}  // namespace bt
