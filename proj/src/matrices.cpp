#include "btharm/matrices.hpp"

#include <algorithm>
#include <sstream>

namespace bt {

MatK::MatK(const Fq& F, int rows, int cols)
    : f_(&F), rows_(rows), cols_(cols), e_(static_cast<std::size_t>(rows) * cols, Series::zero(F)) {}

MatK MatK::identity(const Fq& F, int n) {
  MatK m(F, n, n);
  for (int i = 0; i < n; ++i) m(i, i) = Series::one(F);
  return m;
}

MatK MatK::diag_pi(const Fq& F, const std::vector<int>& exps) {
  const int n = static_cast<int>(exps.size());
  MatK m(F, n, n);
  for (int i = 0; i < n; ++i) m(i, i) = Series::pi_power(F, exps[i]);
  return m;
}

MatK MatK::from_fq(const Fq& F, const FqMat& x) {
  MatK m(F, x.rows, x.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) m(i, j) = Series::constant(F, x(i, j));
  return m;
}

bool MatK::is_exact() const {
  return std::all_of(e_.begin(), e_.end(), [](const Series& s) { return s.is_exact(); });
}

int MatK::min_val() const {
  int v = Series::kExact;
  for (const auto& s : e_) {
    if (s.is_zero()) {
      if (!s.is_exact()) v = std::min(v, s.prec());
      continue;
    }
    v = std::min(v, s.val());
  }
  return v;
}

MatK MatK::transpose() const {
  MatK r(*f_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

MatK MatK::scaled(const Series& s) const {
  MatK r = *this;
  for (auto& x : r.e_) x = x * s;
  return r;
}

MatK MatK::shifted(int e) const {
  MatK r = *this;
  for (auto& x : r.e_) x = x.shifted(e);
  return r;
}

MatK MatK::row_block(int r0, int r1) const {
  MatK r(*f_, r1 - r0, cols_);
  for (int i = r0; i < r1; ++i)
    for (int j = 0; j < cols_; ++j) r(i - r0, j) = (*this)(i, j);
  return r;
}

MatK operator*(const MatK& a, const MatK& b) {
  if (a.cols_ != b.rows_) throw InvalidArgument("matrix product: dimension mismatch");
  if (a.f_ != b.f_) throw InvalidArgument("matrix product: field mismatch");
  MatK r(*a.f_, a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int l = 0; l < a.cols_; ++l) {
      const Series& x = a(i, l);
      if (x.is_exact_zero()) continue;
      for (int j = 0; j < b.cols_; ++j) r(i, j) += x * b(l, j);
    }
  return r;
}

MatK operator+(const MatK& a, const MatK& b) {
  MatK r = a;
  for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] += b.e_[i];
  return r;
}

MatK operator-(const MatK& a, const MatK& b) {
  MatK r = a;
  for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] -= b.e_[i];
  return r;
}

bool operator==(const MatK& a, const MatK& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
}

std::string MatK::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rows_; ++i) {
    os << (i ? ", [" : "[");
    for (int j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).to_string();
    os << "]";
  }
  os << "]";
  return os.str();
}

MatK mat_mul(const MatK& a, const MatK& b) { return a * b; }

namespace {

Series det_rec(const MatK& g, std::vector<int>& rows, std::vector<int>& cols) {
  const Fq& F = g.field();
  const int n = static_cast<int>(rows.size());
  if (n == 0) return Series::one(F);
  if (n == 1) return g(rows[0], cols[0]);
  if (n == 2)
    return g(rows[0], cols[0]) * g(rows[1], cols[1]) - g(rows[0], cols[1]) * g(rows[1], cols[0]);
  Series acc = Series::zero(F);
  const int r = rows[0];
  std::vector<int> sub_rows(rows.begin() + 1, rows.end());
  for (int t = 0; t < n; ++t) {
    const Series& x = g(r, cols[t]);
    if (x.is_exact_zero()) continue;
    std::vector<int> sub_cols;
    sub_cols.reserve(n - 1);
    for (int u = 0; u < n; ++u)
      if (u != t) sub_cols.push_back(cols[u]);
    Series m = x * det_rec(g, sub_rows, sub_cols);
    acc = (t % 2 == 0) ? acc + m : acc - m;
  }
  return acc;
}

}  // namespace

Series det(const MatK& g) {
  if (g.rows() != g.cols()) throw InvalidArgument("det: not square");
  std::vector<int> rows(g.rows()), cols(g.cols());
  for (int i = 0; i < g.rows(); ++i) rows[i] = cols[i] = i;
  return det_rec(g, rows, cols);
}

MatK adjugate(const MatK& g) {
  const int n = g.rows();
  MatK adj(g.field(), n, n);
  if (n == 1) {
    adj(0, 0) = Series::one(g.field());
    return adj;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // adj(j, i) = (-1)^{i+j} * minor(i, j)
      std::vector<int> rows, cols;
      for (int t = 0; t < n; ++t) {
        if (t != i) rows.push_back(t);
        if (t != j) cols.push_back(t);
      }
      Series m = det_rec(g, rows, cols);
      adj(j, i) = ((i + j) % 2 == 0) ? m : -m;
    }
  return adj;
}

MatK mat_inv(const MatK& g) {
  Series d = det(g);
  if (d.is_exact_zero()) throw Singular("matrix is singular");
  return adjugate(g).scaled(d.inverse());
}

int det_val(const MatK& g) {
  Series d = det(g);
  if (d.is_exact_zero()) throw Singular("matrix is singular");
  return d.val();
}

Iwasawa iwasawa(const MatK& g) {
  const int n = g.rows();
  const Fq& F = g.field();
  MatK b = g;
  MatK k = MatK::identity(F, n);
  for (int c = 0; c < n; ++c) {
    int p = -1;
    int best = Series::kExact;
    bool unknown = false;
    for (int i = c; i < n; ++i) {
      const Series& x = b(i, c);
      if (x.is_zero()) {
        if (!x.is_exact()) unknown = true;
        continue;
      }
      if (x.val() < best) {
        best = x.val();
        p = i;
      }
    }
    if (p < 0) {
      if (unknown) throw OutOfPrecision("iwasawa: pivot valuation is not determined");
      throw Singular("iwasawa: singular matrix");
    }
    if (unknown) {
      // A known-zero entry of insufficient precision could hide a smaller valuation.
      for (int i = c; i < n; ++i)
        if (b(i, c).is_zero() && !b(i, c).is_exact() && b(i, c).prec() <= best)
          throw OutOfPrecision("iwasawa: pivot valuation is not determined");
    }
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(b(p, j), b(c, j));
      for (int i = 0; i < n; ++i) std::swap(k(i, p), k(i, c));
    }
    Series pinv = b(c, c).inverse();
    for (int i = c + 1; i < n; ++i) {
      if (b(i, c).is_exact_zero()) continue;
      Series mult = b(i, c) * pinv;
      for (int j = c + 1; j < n; ++j) b(i, j) -= mult * b(c, j);
      b(i, c) = Series::zero(F);
      // Left row operation row_i -= mult * row_c is undone on k by column_c += mult * column_i.
      for (int r = 0; r < n; ++r) k(r, c) += mult * k(r, i);
    }
  }
  return {std::move(k), std::move(b)};
}

bool mat_agrees(const MatK& a, const MatK& b, int upto) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      int u = std::min({upto, a(i, j).prec(), b(i, j).prec()});
      if (!a(i, j).agrees_with(b(i, j), u)) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// ResRing

RElem ResRing::one() const {
  RElem r(m_);
  if (m_ > 0) r[0] = FqElem{1};
  return r;
}

RElem ResRing::from_fq(FqElem c) const {
  RElem r(m_);
  if (m_ > 0) r[0] = c;
  return r;
}

RElem ResRing::from_series(const Series& s) const {
  RElem r(m_);
  if (s.is_zero()) {
    if (s.prec() < m_) throw OutOfPrecision("residue of an entry known only below the level");
    return r;
  }
  if (s.val() < 0) throw NonIntegral("entry of negative valuation");
  if (s.prec() < m_) throw OutOfPrecision("entry precision below the residue level");
  for (int e = s.val(); e < m_ && e <= s.top(); ++e) r[e] = s.coeff(e);
  return r;
}

Series ResRing::to_series(const RElem& x) const { return Series::from_coeffs(*f_, 0, x); }

RElem ResRing::add(const RElem& a, const RElem& b) const {
  RElem r(m_);
  for (int i = 0; i < m_; ++i) r[i] = f_->add(a[i], b[i]);
  return r;
}

RElem ResRing::sub(const RElem& a, const RElem& b) const {
  RElem r(m_);
  for (int i = 0; i < m_; ++i) r[i] = f_->sub(a[i], b[i]);
  return r;
}

RElem ResRing::neg(const RElem& a) const {
  RElem r(m_);
  for (int i = 0; i < m_; ++i) r[i] = f_->neg(a[i]);
  return r;
}

RElem ResRing::mul(const RElem& a, const RElem& b) const {
  RElem r(m_);
  for (int i = 0; i < m_; ++i) {
    if (a[i].v == 0) continue;
    for (int j = 0; i + j < m_; ++j) r[i + j] = f_->add(r[i + j], f_->mul(a[i], b[j]));
  }
  return r;
}

bool ResRing::is_zero(const RElem& a) const {
  return std::all_of(a.begin(), a.end(), [](FqElem c) { return c.v == 0; });
}

RElem ResRing::inv(const RElem& a) const {
  if (!is_unit(a)) throw DivisionByZero("non-unit in O/pi^" + std::to_string(m_));
  RElem r(m_);
  FqElem c0 = f_->inv(a[0]);
  r[0] = c0;
  for (int i = 1; i < m_; ++i) {
    FqElem acc{0};
    for (int j = 1; j <= i; ++j) acc = f_->add(acc, f_->mul(a[j], r[i - j]));
    r[i] = f_->neg(f_->mul(c0, acc));
  }
  return r;
}

int ResRing::val(const RElem& a) const {
  for (int i = 0; i < m_; ++i)
    if (a[i].v != 0) return i;
  return m_;
}

// ---------------------------------------------------------------------------
// ResidueMat

ResidueMat::ResidueMat(const ResRing& R, int rows, int cols)
    : f_(&R.field()), m_(R.level()), rows_(rows), cols_(cols),
      e_(static_cast<std::size_t>(rows) * cols, R.zero()) {}

ResidueMat ResidueMat::identity(const ResRing& R, int n) {
  ResidueMat m(R, n, n);
  for (int i = 0; i < n; ++i) m(i, i) = R.one();
  return m;
}

FqMat ResidueMat::residue() const {
  FqMat r(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(i, j) = m_ > 0 ? (*this)(i, j)[0] : FqElem{0};
  return r;
}

bool ResidueMat::is_invertible() const {
  return rows_ == cols_ && m_ > 0 && fq_det(*f_, residue()).v != 0;
}

ResidueMat operator*(const ResidueMat& a, const ResidueMat& b) {
  if (a.cols_ != b.rows_ || a.m_ != b.m_) throw InvalidArgument("residue product: shape mismatch");
  ResRing R = a.ring();
  ResidueMat r(R, a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int l = 0; l < a.cols_; ++l) {
      const RElem& x = a(i, l);
      if (R.is_zero(x)) continue;
      for (int j = 0; j < b.cols_; ++j) r(i, j) = R.add(r(i, j), R.mul(x, b(l, j)));
    }
  return r;
}

ResidueMat ResidueMat::transpose() const {
  ResidueMat r(ring(), cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

ResidueMat ResidueMat::inverse() const {
  if (!is_invertible()) throw Singular("residue matrix is not invertible");
  ResRing R = ring();
  const int n = rows_;
  ResidueMat a = *this;
  ResidueMat inv = identity(R, n);
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (!R.is_unit(a(p, c))) ++p;
    if (p != c)
      for (int j = 0; j < n; ++j) {
        std::swap(a(p, j), a(c, j));
        std::swap(inv(p, j), inv(c, j));
      }
    RElem u = R.inv(a(c, c));
    for (int j = 0; j < n; ++j) {
      a(c, j) = R.mul(a(c, j), u);
      inv(c, j) = R.mul(inv(c, j), u);
    }
    for (int i = 0; i < n; ++i) {
      if (i == c || R.is_zero(a(i, c))) continue;
      RElem f = a(i, c);
      for (int j = 0; j < n; ++j) {
        a(i, j) = R.sub(a(i, j), R.mul(f, a(c, j)));
        inv(i, j) = R.sub(inv(i, j), R.mul(f, inv(c, j)));
      }
    }
  }
  return inv;
}

MatK ResidueMat::lift() const {
  ResRing R = ring();
  MatK g(*f_, rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) g(i, j) = R.to_series((*this)(i, j));
  return g;
}

ResidueMat reduce_mod(const MatK& g, int m) {
  ResRing R(g.field(), m);
  ResidueMat r(R, g.rows(), g.cols());
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) r(i, j) = R.from_series(g(i, j));
  return r;
}

// ---------------------------------------------------------------------------
// Random elements

namespace {

Series random_poly(const Fq& F, std::mt19937_64& rng, int lo, int hi) {
  std::uniform_int_distribution<int> coef(0, F.q() - 1);
  std::vector<FqElem> c(hi - lo + 1);
  for (auto& x : c) x = FqElem{static_cast<std::uint8_t>(coef(rng))};
  return Series::from_coeffs(F, lo, c);
}

}  // namespace

MatK random_laurent(const Fq& F, int n, std::mt19937_64& rng, int lo, int hi) {
  while (true) {
    MatK g(F, n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = random_poly(F, rng, lo, hi);
    if (!det(g).is_exact_zero()) return g;
  }
}

MatK random_integral(const Fq& F, int n, std::mt19937_64& rng, int hi) {
  while (true) {
    MatK g(F, n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = random_poly(F, rng, 0, hi);
    Series d = det(g);
    if (!d.is_exact_zero() && d.val() == 0) return g;
  }
}

FqMat random_gl_fq(const Fq& F, int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(0, F.q() - 1);
  while (true) {
    FqMat m(n, n);
    for (auto& x : m.a) x = FqElem{static_cast<std::uint8_t>(coef(rng))};
    if (fq_det(F, m).v != 0) return m;
  }
}

}  // namespace bt
