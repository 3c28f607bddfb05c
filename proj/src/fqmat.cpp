#include "btharm/fqmat.hpp"

#include <algorithm>

namespace bt {

FqMat FqMat::identity(int n) {
  FqMat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = FqElem{1};
  return m;
}

FqMat fq_mul(const Fq& F, const FqMat& x, const FqMat& y) {
  if (x.cols != y.rows) throw InvalidArgument("fq_mul: dimension mismatch");
  FqMat r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int l = 0; l < x.cols; ++l) {
      FqElem c = x(i, l);
      if (c.v == 0) continue;
      for (int j = 0; j < y.cols; ++j) r(i, j) = F.add(r(i, j), F.mul(c, y(l, j)));
    }
  return r;
}

FqMat fq_transpose(const FqMat& x) {
  FqMat r(x.cols, x.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) r(j, i) = x(i, j);
  return r;
}

FqMat fq_stack(const FqMat& x, const FqMat& y) {
  if (x.rows == 0) return y;
  if (y.rows == 0) return x;
  if (x.cols != y.cols) throw InvalidArgument("fq_stack: column mismatch");
  FqMat r(x.rows + y.rows, x.cols);
  std::copy(x.a.begin(), x.a.end(), r.a.begin());
  std::copy(y.a.begin(), y.a.end(), r.a.begin() + x.a.size());
  return r;
}

std::vector<int> fq_rref_inplace(const Fq& F, FqMat& m) {
  std::vector<int> piv;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int p = -1;
    for (int i = r; i < m.rows; ++i)
      if (m(i, c).v != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != r)
      for (int j = 0; j < m.cols; ++j) std::swap(m(p, j), m(r, j));
    FqElem inv = F.inv(m(r, c));
    for (int j = 0; j < m.cols; ++j) m(r, j) = F.mul(m(r, j), inv);
    for (int i = 0; i < m.rows; ++i) {
      if (i == r || m(i, c).v == 0) continue;
      FqElem f = m(i, c);
      for (int j = 0; j < m.cols; ++j) m(i, j) = F.sub(m(i, j), F.mul(f, m(r, j)));
    }
    piv.push_back(c);
    ++r;
  }
  m.rows = r;
  m.a.resize(static_cast<std::size_t>(r) * m.cols);
  return piv;
}

FqMat fq_rref(const Fq& F, FqMat m) {
  fq_rref_inplace(F, m);
  return m;
}

int fq_rank(const Fq& F, FqMat m) { return static_cast<int>(fq_rref_inplace(F, m).size()); }

FqMat fq_inverse(const Fq& F, const FqMat& m) {
  if (m.rows != m.cols) throw InvalidArgument("fq_inverse: not square");
  const int n = m.rows;
  FqMat aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = FqElem{1};
  }
  auto piv = fq_rref_inplace(F, aug);
  if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1) throw Singular("singular residue matrix");
  FqMat r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = aug(i, n + j);
  return r;
}

FqElem fq_det(const Fq& F, FqMat m) {
  const int n = m.rows;
  FqElem det = F.one();
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i)
      if (m(i, c).v != 0) {
        p = i;
        break;
      }
    if (p < 0) return F.zero();
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = F.neg(det);
    }
    det = F.mul(det, m(c, c));
    FqElem inv = F.inv(m(c, c));
    for (int i = c + 1; i < n; ++i) {
      if (m(i, c).v == 0) continue;
      FqElem f = F.mul(m(i, c), inv);
      for (int j = c; j < n; ++j) m(i, j) = F.sub(m(i, j), F.mul(f, m(c, j)));
    }
  }
  return det;
}

bool fq_contains(const Fq& F, const FqMat& sup, const FqMat& sub) {
  if (sub.rows == 0) return true;
  int r = fq_rank(F, sup);
  return fq_rank(F, fq_stack(sup, sub)) == r;
}

namespace {

void combos(int n, int d, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == d) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    combos(n, d, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<FqMat> fq_subspaces(const Fq& F, int N, int d) {
  std::vector<FqMat> out;
  if (d < 0 || d > N) return out;
  if (d == 0) {
    out.emplace_back(0, N);
    return out;
  }
  std::vector<std::vector<int>> pivsets;
  std::vector<int> cur;
  combos(N, d, 0, cur, pivsets);
  const int q = F.q();
  for (const auto& piv : pivsets) {
    // Free positions: row r, column c > piv[r], c not a pivot column.
    std::vector<std::pair<int, int>> free;
    for (int r = 0; r < d; ++r)
      for (int c = piv[r] + 1; c < N; ++c)
        if (!std::binary_search(piv.begin(), piv.end(), c)) free.emplace_back(r, c);
    std::vector<int> digit(free.size(), 0);
    while (true) {
      FqMat m(d, N);
      for (int r = 0; r < d; ++r) m(r, piv[r]) = FqElem{1};
      for (std::size_t t = 0; t < free.size(); ++t)
        m(free[t].first, free[t].second) = FqElem{static_cast<std::uint8_t>(digit[t])};
      out.push_back(std::move(m));
      std::size_t t = 0;
      while (t < digit.size() && ++digit[t] == q) digit[t++] = 0;
      if (t == digit.size()) break;
    }
  }
  return out;
}

std::vector<FqMat> fq_intermediate(const Fq& F, const FqMat& big, const FqMat& small, int d) {
  const int b = big.rows;
  const int s = small.rows;
  std::vector<FqMat> out;
  if (d < s || d > b) return out;
  // Complement of small inside big, chosen among the rows of big.
  FqMat comp(0, big.cols);
  FqMat acc = small;
  int rank = s;
  for (int i = 0; i < b; ++i) {
    FqMat row(1, big.cols);
    for (int j = 0; j < big.cols; ++j) row(0, j) = big(i, j);
    FqMat trial = fq_stack(acc, row);
    int rk = fq_rank(F, trial);
    if (rk > rank) {
      acc = trial;
      rank = rk;
      comp = fq_stack(comp, row);
    }
  }
  if (rank != b) throw InvalidArgument("fq_intermediate: small is not contained in big");
  for (const auto& u : fq_subspaces(F, comp.rows, d - s)) {
    FqMat w = fq_stack(small, u.rows ? fq_mul(F, u, comp) : FqMat(0, big.cols));
    out.push_back(fq_rref(F, std::move(w)));
  }
  return out;
}

long long gaussian_binomial(long long q, int n, int k) {
  if (k < 0 || k > n) return 0;
  long long num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    long long a = 1, b = 1;
    for (int t = 0; t < n - i; ++t) a *= q;
    for (int t = 0; t < i + 1; ++t) b *= q;
    num *= (a - 1);
    den *= (b - 1);
  }
  return num / den;
}

}  // namespace bt
