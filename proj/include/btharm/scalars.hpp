#pragma once
//
// Residue field F_q and truncated Laurent series over it.
//
// A series carries an absolute precision: every coefficient of exponent
// below prec() is known, nothing is known at or above it.  Exact Laurent
// polynomials use prec() == Series::kExact.
//

#include <atomic>
#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "btharm/errors.hpp"

namespace bt {

/// Element of F_q, stored as the index sum_i coords[i] * p^i.
struct FqElem {
  std::uint8_t v = 0;
  friend constexpr auto operator<=>(FqElem, FqElem) = default;
};

/// Finite field descriptor with precomputed tables.  Instances are interned:
/// two descriptors describe the same field iff they are the same object.
class Fq {
 public:
  /// Prime fields need no polynomial; q in {4, 8, 9} use built-in moduli.
  static const Fq& get(int p, int e = 1);
  /// Field with an explicit monic modulus c_0 + c_1 x + ... + x^e.
  static const Fq& get(int p, int e, std::span<const int> modulus);
  static const Fq& of_order(int q);

  int p() const { return p_; }
  int e() const { return e_; }
  int q() const { return q_; }
  const std::vector<int>& modulus() const { return modulus_; }

  FqElem zero() const { return {0}; }
  FqElem one() const { return {1}; }
  FqElem add(FqElem a, FqElem b) const { return {add_[a.v * q_ + b.v]}; }
  FqElem sub(FqElem a, FqElem b) const { return add(a, neg(b)); }
  FqElem neg(FqElem a) const { return {neg_[a.v]}; }
  FqElem mul(FqElem a, FqElem b) const { return {mul_[a.v * q_ + b.v]}; }
  /// Throws DivisionByZero on zero.
  FqElem inv(FqElem a) const;
  FqElem div(FqElem a, FqElem b) const { return mul(a, inv(b)); }
  FqElem pow(FqElem a, long long k) const;
  /// Image of an integer under Z -> F_p -> F_q.
  FqElem from_int(long long k) const;
  FqElem from_coords(std::span<const int> coords) const;
  std::vector<int> coords(FqElem a) const;
  /// A generator of the cyclic group F_q^*.
  FqElem generator() const { return generator_; }
  /// Additive generators (the polynomial basis 1, x, ..., x^{e-1}).
  std::vector<FqElem> additive_basis() const;
  std::vector<FqElem> elements() const;

 private:
  Fq(int p, int e, std::vector<int> modulus);

  int p_;
  int e_;
  int q_;
  std::vector<int> modulus_;
  std::vector<std::uint8_t> add_, mul_, neg_, inv_;
  FqElem generator_;
};

/// Relative precision used when an exact non-monomial element is inverted.
int working_precision();
void set_working_precision(int n);

using SeriesCoeffs = boost::container::small_vector<FqElem, 12>;

/// Truncated Laurent series sum_e c_e pi^e over F_q.
class Series {
 public:
  static constexpr int kExact = std::numeric_limits<int>::max() / 4;

  /// Exact zero not yet tied to a field.
  Series() = default;

  static Series zero(const Fq& F) { return Series(&F); }
  /// The inexact zero O(pi^prec).
  static Series zero_to(const Fq& F, int prec);
  static Series monomial(const Fq& F, FqElem c, int e);
  static Series constant(const Fq& F, FqElem c) { return monomial(F, c, 0); }
  static Series one(const Fq& F) { return monomial(F, F.one(), 0); }
  static Series pi_power(const Fq& F, int e) { return monomial(F, F.one(), e); }
  /// Coefficients for exponents val, val+1, ...; zeros anywhere are allowed.
  static Series from_coeffs(const Fq& F, int val, std::span<const FqElem> coeffs,
                            int prec = kExact);

  const Fq* field() const { return f_; }
  bool is_exact() const { return prec_ >= kExact; }
  /// Known to vanish up to its precision (exact or not).
  bool is_zero() const { return c_.empty(); }
  bool is_exact_zero() const { return c_.empty() && is_exact(); }
  /// Valuation; kExact for the exact zero, OutOfPrecision for O(pi^prec).
  int val() const;
  /// val() for nonzero elements, prec() for known-zero ones.
  int val_lower_bound() const { return c_.empty() ? prec_ : val_; }
  int prec() const { return prec_; }
  /// Coefficient of pi^e; OutOfPrecision when e >= prec().
  FqElem coeff(int e) const;
  /// Highest nonzero exponent (requires a nonzero element).
  int top() const { return val_ + static_cast<int>(c_.size()) - 1; }
  std::span<const FqElem> stored() const { return {c_.data(), c_.size()}; }
  bool is_monomial() const { return c_.size() == 1 && is_exact(); }

  Series operator-() const;
  friend Series operator+(const Series& a, const Series& b);
  friend Series operator-(const Series& a, const Series& b);
  friend Series operator*(const Series& a, const Series& b);
  Series& operator+=(const Series& b) { return *this = *this + b; }
  Series& operator-=(const Series& b) { return *this = *this - b; }
  Series& operator*=(const Series& b) { return *this = *this * b; }

  /// a * result = 1 up to absolute precision target_prec.
  Series inverse(int target_prec) const;
  /// Inverse at the best precision available (exact for monomials).
  Series inverse() const;
  Series truncated(int prec) const;
  /// Multiplication by pi^e.
  Series shifted(int e) const;
  Series scaled(FqElem c) const;
  /// Terms of exponent < e (the representative of this mod pi^e O when
  /// the input is known below e).
  Series low_part(int e) const;
  /// Terms of exponent >= e, divided by pi^e.  Precision drops by e.
  Series high_part_div(int e) const;

  /// Representation equality (value and precision).
  friend bool operator==(const Series& a, const Series& b);
  /// Agreement of both values on every exponent < upto (both must be known there).
  bool agrees_with(const Series& o, int upto) const;

  std::string to_string() const;

 private:
  explicit Series(const Fq* f) : f_(f) {}
  void normalize();

  const Fq* f_ = nullptr;
  int val_ = 0;
  int prec_ = kExact;
  SeriesCoeffs c_;
};

/// Saturating addition on precisions.
constexpr int prec_add(int a, int b) {
  if (a >= Series::kExact || b >= Series::kExact) return Series::kExact;
  long long s = static_cast<long long>(a) + b;
  if (s >= Series::kExact) return Series::kExact;
  if (s <= -Series::kExact) return -Series::kExact;
  return static_cast<int>(s);
}

}  // namespace bt
