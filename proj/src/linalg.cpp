#include "btharm/linalg.hpp"

#include <algorithm>

#include "btharm/errors.hpp"

namespace bt {

RowReducer::RowReducer(int ncols)
    : ncols_(ncols), pivot_of_col_(ncols, -1), acc_(ncols), mark_(ncols, 0) {}

SparseVec RowReducer::reduce(const SparseVec& v) const {
  std::vector<int> touched;
  for (const auto& [c, x] : v) {
    if (c < 0 || c >= ncols_) throw InvalidArgument("row entry outside the column range");
    if (!mark_[c]) {
      mark_[c] = 1;
      touched.push_back(c);
      acc_[c] = 0;
    }
    acc_[c] += x;
  }
  // Pivot rows are fully reduced, so a single pass over the original pivot entries suffices.
  std::vector<std::pair<int, Rational>> hits;
  for (int c : touched)
    if (pivot_of_col_[c] >= 0 && acc_[c] != 0) hits.emplace_back(c, acc_[c]);
  for (const auto& [c, f] : hits) {
    for (const auto& [cc, y] : rows_[pivot_of_col_[c]]) {
      if (!mark_[cc]) {
        mark_[cc] = 1;
        touched.push_back(cc);
        acc_[cc] = 0;
      }
      acc_[cc] -= f * y;
    }
  }
  std::sort(touched.begin(), touched.end());
  SparseVec out;
  for (int c : touched) {
    if (acc_[c] != 0) out.emplace_back(c, acc_[c]);
    mark_[c] = 0;
    acc_[c] = 0;
  }
  return out;
}

bool RowReducer::add(const SparseVec& row) {
  SparseVec r = reduce(row);
  if (r.empty()) return false;
  const int p = r.front().first;
  Rational inv = 1 / r.front().second;
  for (auto& [c, x] : r) x *= inv;
  // Clear column p from existing rows.
  for (auto& other : rows_) {
    auto it = std::lower_bound(other.begin(), other.end(), p,
                               [](const auto& e, int c) { return e.first < c; });
    if (it == other.end() || it->first != p) continue;
    Rational f = it->second;
    SparseVec merged;
    merged.reserve(other.size() + r.size());
    auto a = other.begin();
    auto b = r.begin();
    while (a != other.end() || b != r.end()) {
      if (b == r.end() || (a != other.end() && a->first < b->first)) {
        merged.push_back(*a++);
      } else if (a == other.end() || b->first < a->first) {
        merged.emplace_back(b->first, -f * b->second);
        ++b;
      } else {
        Rational s = a->second - f * b->second;
        if (s != 0) merged.emplace_back(a->first, s);
        ++a;
        ++b;
      }
    }
    other.swap(merged);
  }
  pivot_of_col_[p] = static_cast<int>(rows_.size());
  pivot_cols_.push_back(p);
  rows_.push_back(std::move(r));
  return true;
}

std::vector<std::vector<Rational>> RowReducer::nullspace() const {
  std::vector<int> free_index(ncols_, -1);
  std::vector<std::vector<Rational>> basis;
  for (int c = 0; c < ncols_; ++c)
    if (pivot_of_col_[c] < 0) {
      free_index[c] = static_cast<int>(basis.size());
      std::vector<Rational> v(ncols_);
      v[c] = 1;
      basis.push_back(std::move(v));
    }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const int p = pivot_cols_[i];
    for (const auto& [c, x] : rows_[i])
      if (c != p) basis[free_index[c]][p] = -x;
  }
  return basis;
}

SparseVec to_sparse(const std::vector<Rational>& dense) {
  SparseVec out;
  for (int i = 0; i < static_cast<int>(dense.size()); ++i)
    if (dense[i] != 0) out.emplace_back(i, dense[i]);
  return out;
}

Rational dot(const SparseVec& a, const std::vector<Rational>& x) {
  Rational s = 0;
  for (const auto& [c, v] : a) s += v * x[c];
  return s;
}

int rank_bareiss(std::vector<std::vector<mpz_class>> m) {
  const int rows = static_cast<int>(m.size());
  if (rows == 0) return 0;
  const int cols = static_cast<int>(m[0].size());
  mpz_class prev = 1;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (m[i][c] != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(m[p], m[r]);
    for (int i = r + 1; i < rows; ++i) {
      for (int j = c + 1; j < cols; ++j) {
        mpz_class t = m[r][c] * m[i][j] - m[i][c] * m[r][j];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m[i][j] = t;
      }
      m[i][c] = 0;
    }
    prev = m[r][c];
    ++r;
  }
  return r;
}

}  // namespace bt
