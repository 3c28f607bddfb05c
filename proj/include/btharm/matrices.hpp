#pragma once
//
// Square matrices over K = F_q((pi)), the residue rings O/pi^m, and
// matrices over those rings.
//

#include <random>
#include <vector>

#include "btharm/fqmat.hpp"
#include "btharm/scalars.hpp"

namespace bt {

class MatK {
 public:
  MatK() = default;
  /// Zero matrix of the given shape.
  MatK(const Fq& F, int rows, int cols);

  static MatK identity(const Fq& F, int n);
  /// diag(pi^{e_1}, ..., pi^{e_n}).
  static MatK diag_pi(const Fq& F, const std::vector<int>& exps);
  /// Lift of a residue matrix with constant entries.
  static MatK from_fq(const Fq& F, const FqMat& m);

  const Fq& field() const { return *f_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Series& operator()(int i, int j) { return e_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Series& operator()(int i, int j) const { return e_[static_cast<std::size_t>(i) * cols_ + j]; }

  bool is_exact() const;
  /// Minimum entry valuation; Series::kExact for the zero matrix.
  int min_val() const;
  bool is_integral() const { return min_val() >= 0; }

  MatK transpose() const;
  MatK scaled(const Series& s) const;
  /// Multiplication of every entry by pi^e.
  MatK shifted(int e) const;
  MatK row_block(int r0, int r1) const;

  friend MatK operator*(const MatK& a, const MatK& b);
  friend MatK operator+(const MatK& a, const MatK& b);
  friend MatK operator-(const MatK& a, const MatK& b);
  friend bool operator==(const MatK& a, const MatK& b);

  std::string to_string() const;

 private:
  const Fq* f_ = nullptr;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Series> e_;
};

MatK mat_mul(const MatK& a, const MatK& b);
Series det(const MatK& g);
MatK adjugate(const MatK& g);
/// g^{-1} = adj(g) / det(g).  Throws Singular on an exact-zero determinant.
MatK mat_inv(const MatK& g);
/// Valuation of det(g).  Throws Singular.
int det_val(const MatK& g);

struct Iwasawa {
  MatK k;  // in G(O)
  MatK b;  // upper triangular
};
Iwasawa iwasawa(const MatK& g);

/// Agreement of two matrices on all entries below absolute precision upto.
bool mat_agrees(const MatK& a, const MatK& b, int upto);

// ---------------------------------------------------------------------------
// O / pi^m

using RElem = std::vector<FqElem>;

class ResRing {
 public:
  ResRing(const Fq& F, int m) : f_(&F), m_(m) {}
  const Fq& field() const { return *f_; }
  int level() const { return m_; }

  RElem zero() const { return RElem(m_); }
  RElem one() const;
  RElem from_fq(FqElem c) const;
  /// Truncation of an integral series; NonIntegral / OutOfPrecision otherwise.
  RElem from_series(const Series& s) const;
  Series to_series(const RElem& x) const;

  RElem add(const RElem& a, const RElem& b) const;
  RElem sub(const RElem& a, const RElem& b) const;
  RElem neg(const RElem& a) const;
  RElem mul(const RElem& a, const RElem& b) const;
  bool is_zero(const RElem& a) const;
  bool is_unit(const RElem& a) const { return a[0].v != 0; }
  /// Throws DivisionByZero on non-units.
  RElem inv(const RElem& a) const;
  /// Valuation in [0, m]; m for zero.
  int val(const RElem& a) const;

 private:
  const Fq* f_;
  int m_;
};

class ResidueMat {
 public:
  ResidueMat() = default;
  ResidueMat(const ResRing& R, int rows, int cols);
  static ResidueMat identity(const ResRing& R, int n);

  ResRing ring() const { return ResRing(*f_, m_); }
  int level() const { return m_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  RElem& operator()(int i, int j) { return e_[static_cast<std::size_t>(i) * cols_ + j]; }
  const RElem& operator()(int i, int j) const { return e_[static_cast<std::size_t>(i) * cols_ + j]; }

  /// Reduction mod pi.
  FqMat residue() const;
  bool is_invertible() const;
  friend ResidueMat operator*(const ResidueMat& a, const ResidueMat& b);
  friend bool operator==(const ResidueMat& a, const ResidueMat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
  }
  ResidueMat transpose() const;
  /// Throws Singular.
  ResidueMat inverse() const;
  MatK lift() const;

 private:
  const Fq* f_ = nullptr;
  int m_ = 0;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<RElem> e_;
};

/// Entrywise truncation below pi^m.  NonIntegral on negative valuations.
ResidueMat reduce_mod(const MatK& g, int m);

// ---------------------------------------------------------------------------
// Random elements

/// Laurent polynomial entries with exponents in [lo, hi], uniform coefficients,
/// rejection-sampled for invertibility.
MatK random_laurent(const Fq& F, int n, std::mt19937_64& rng, int lo = -2, int hi = 2);
/// Element of G(O): polynomial entries of degree <= hi with unit determinant.
MatK random_integral(const Fq& F, int n, std::mt19937_64& rng, int hi = 2);
/// Uniform element of GL_n(F_q).
FqMat random_gl_fq(const Fq& F, int n, std::mt19937_64& rng);

}  // namespace bt
