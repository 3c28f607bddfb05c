#include "btharm/scalars.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>

namespace bt {

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::vector<int> builtin_modulus(int p, int e) {
  if (e == 1) return {0, 1};
  if (p == 2 && e == 2) return {1, 1, 1};     // x^2 + x + 1
  if (p == 2 && e == 3) return {1, 1, 0, 1};  // x^3 + x + 1
  if (p == 3 && e == 2) return {1, 0, 1};     // x^2 + 1
  throw InvalidArgument("no built-in defining polynomial for q = " + std::to_string(p) +
                        "^" + std::to_string(e));
}

std::atomic<int> g_working_precision{24};

}  // namespace

int working_precision() { return g_working_precision.load(std::memory_order_relaxed); }

void set_working_precision(int n) {
  if (n < 1) throw InvalidArgument("working precision must be positive");
  g_working_precision.store(n, std::memory_order_relaxed);
}

// ---------------------------------------------------------------------------
// Fq

const Fq& Fq::get(int p, int e) {
  auto mod = builtin_modulus(p, e);
  return get(p, e, mod);
}

const Fq& Fq::get(int p, int e, std::span<const int> modulus) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, std::vector<int>>, std::unique_ptr<Fq>> registry;

  if (!is_prime(p)) throw InvalidArgument("characteristic must be prime");
  if (e < 1) throw InvalidArgument("extension degree must be >= 1");
  long long q = 1;
  for (int i = 0; i < e; ++i) q *= p;
  if (q > 256) throw InvalidArgument("field order above 256 is not supported");

  std::vector<int> mod(modulus.begin(), modulus.end());
  if (e == 1) {
    mod = {0, 1};
  } else {
    if (static_cast<int>(mod.size()) != e + 1 || mod.back() != 1)
      throw InvalidArgument("defining polynomial must be monic of degree e");
    for (int c : mod)
      if (c < 0 || c >= p) throw InvalidArgument("polynomial coefficient out of range");
  }

  std::lock_guard lock(mu);
  auto key = std::make_tuple(p, e, mod);
  auto it = registry.find(key);
  if (it == registry.end())
    it = registry.emplace(key, std::unique_ptr<Fq>(new Fq(p, e, mod))).first;
  return *it->second;
}

const Fq& Fq::of_order(int q) {
  for (int p = 2; p <= q; ++p) {
    if (!is_prime(p)) continue;
    int e = 0;
    int r = q;
    while (r % p == 0) {
      r /= p;
      ++e;
    }
    if (r == 1 && e > 0) return get(p, e);
    if (q % p == 0) break;
  }
  throw InvalidArgument("q = " + std::to_string(q) + " is not a prime power");
}

Fq::Fq(int p, int e, std::vector<int> modulus) : p_(p), e_(e), modulus_(std::move(modulus)) {
  q_ = 1;
  for (int i = 0; i < e; ++i) q_ *= p;
  const int q = q_;
  add_.resize(q * q);
  mul_.resize(q * q);
  neg_.resize(q);
  inv_.assign(q, 0);

  auto to_coords = [&](int a) {
    std::vector<int> c(e);
    for (int i = 0; i < e; ++i) {
      c[i] = a % p;
      a /= p;
    }
    return c;
  };
  auto to_index = [&](const std::vector<int>& c) {
    int a = 0;
    for (int i = e - 1; i >= 0; --i) a = a * p + c[i];
    return a;
  };

  for (int a = 0; a < q; ++a) {
    auto ca = to_coords(a);
    std::vector<int> cn(e);
    for (int i = 0; i < e; ++i) cn[i] = (p - ca[i]) % p;
    neg_[a] = static_cast<std::uint8_t>(to_index(cn));
    for (int b = 0; b < q; ++b) {
      auto cb = to_coords(b);
      std::vector<int> s(e);
      for (int i = 0; i < e; ++i) s[i] = (ca[i] + cb[i]) % p;
      add_[a * q + b] = static_cast<std::uint8_t>(to_index(s));

      // Schoolbook product, then reduction by the monic modulus.
      std::vector<int> prod(2 * e - 1, 0);
      for (int i = 0; i < e; ++i)
        for (int j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p;
      for (int d = 2 * e - 2; d >= e; --d) {
        int c = prod[d];
        if (c == 0) continue;
        for (int i = 0; i <= e; ++i)
          prod[d - e + i] = ((prod[d - e + i] - c * modulus_[i]) % p + p) % p;
      }
      prod.resize(e);
      mul_[a * q + b] = static_cast<std::uint8_t>(to_index(prod));
    }
  }

  for (int a = 1; a < q; ++a) {
    for (int b = 1; b < q; ++b) {
      if (mul_[a * q + b] == 1) {
        inv_[a] = static_cast<std::uint8_t>(b);
        break;
      }
    }
    if (inv_[a] == 0) throw InvalidArgument("defining polynomial is not irreducible");
  }

  generator_ = FqElem{1};
  for (int a = 1; a < q; ++a) {
    int order = 1;
    FqElem x{static_cast<std::uint8_t>(a)};
    FqElem y = x;
    while (y.v != 1) {
      y = mul(y, x);
      ++order;
    }
    if (order == q - 1) {
      generator_ = x;
      break;
    }
  }
}

FqElem Fq::inv(FqElem a) const {
  if (a.v == 0) throw DivisionByZero("inverse of zero in F_" + std::to_string(q_));
  return {inv_[a.v]};
}

FqElem Fq::pow(FqElem a, long long k) const {
  if (k < 0) return pow(inv(a), -k);
  FqElem r = one();
  while (k > 0) {
    if (k & 1) r = mul(r, a);
    a = mul(a, a);
    k >>= 1;
  }
  return r;
}

FqElem Fq::from_int(long long k) const {
  long long r = ((k % p_) + p_) % p_;
  return {static_cast<std::uint8_t>(r)};
}

FqElem Fq::from_coords(std::span<const int> coords) const {
  if (static_cast<int>(coords.size()) != e_) throw InvalidArgument("wrong coordinate count");
  int a = 0;
  for (int i = e_ - 1; i >= 0; --i) {
    if (coords[i] < 0 || coords[i] >= p_) throw InvalidArgument("coordinate out of range");
    a = a * p_ + coords[i];
  }
  return {static_cast<std::uint8_t>(a)};
}

std::vector<int> Fq::coords(FqElem a) const {
  std::vector<int> c(e_);
  int x = a.v;
  for (int i = 0; i < e_; ++i) {
    c[i] = x % p_;
    x /= p_;
  }
  return c;
}

std::vector<FqElem> Fq::additive_basis() const {
  std::vector<FqElem> b;
  int x = 1;
  for (int i = 0; i < e_; ++i, x *= p_) b.push_back({static_cast<std::uint8_t>(x)});
  return b;
}

std::vector<FqElem> Fq::elements() const {
  std::vector<FqElem> v(q_);
  for (int a = 0; a < q_; ++a) v[a] = {static_cast<std::uint8_t>(a)};
  return v;
}

// ---------------------------------------------------------------------------
// Series

namespace {

const Fq* common_field(const Series& a, const Series& b) {
  const Fq* fa = a.field();
  const Fq* fb = b.field();
  if (fa && fb && fa != fb) throw InvalidArgument("series over different fields");
  return fa ? fa : fb;
}

}  // namespace

Series Series::zero_to(const Fq& F, int prec) {
  Series s(&F);
  s.prec_ = prec;
  return s;
}

Series Series::monomial(const Fq& F, FqElem c, int e) {
  Series s(&F);
  if (c.v != 0) {
    s.val_ = e;
    s.c_.push_back(c);
  }
  return s;
}

Series Series::from_coeffs(const Fq& F, int val, std::span<const FqElem> coeffs, int prec) {
  Series s(&F);
  s.val_ = val;
  s.prec_ = prec;
  s.c_.assign(coeffs.begin(), coeffs.end());
  s.normalize();
  return s;
}

void Series::normalize() {
  // Drop coefficients at or beyond the precision.
  if (!is_exact()) {
    long long keep = static_cast<long long>(prec_) - val_;
    if (keep < static_cast<long long>(c_.size())) c_.resize(keep < 0 ? 0 : keep);
  }
  std::size_t lead = 0;
  while (lead < c_.size() && c_[lead].v == 0) ++lead;
  if (lead == c_.size()) {
    c_.clear();
    val_ = 0;
    return;
  }
  if (lead > 0) {
    c_.erase(c_.begin(), c_.begin() + lead);
    val_ += static_cast<int>(lead);
  }
  while (c_.back().v == 0) c_.pop_back();
}

int Series::val() const {
  if (!c_.empty()) return val_;
  if (is_exact()) return kExact;
  throw OutOfPrecision("valuation of O(pi^" + std::to_string(prec_) + ") is unknown");
}

FqElem Series::coeff(int e) const {
  if (e >= prec_) throw OutOfPrecision("coefficient of pi^" + std::to_string(e) +
                                       " beyond precision " + std::to_string(prec_));
  if (c_.empty() || e < val_ || e > top()) return FqElem{0};
  return c_[e - val_];
}

Series Series::operator-() const {
  Series r = *this;
  for (auto& c : r.c_) c = f_->neg(c);
  return r;
}

Series operator+(const Series& a, const Series& b) {
  const Fq* F = common_field(a, b);
  Series r(F);
  r.prec_ = std::min(a.prec_, b.prec_);
  if (a.c_.empty() && b.c_.empty()) return r;
  if (b.c_.empty()) {
    r.val_ = a.val_;
    r.c_ = a.c_;
    r.normalize();
    return r;
  }
  if (a.c_.empty()) {
    r.val_ = b.val_;
    r.c_ = b.c_;
    r.normalize();
    return r;
  }
  int lo = std::min(a.val_, b.val_);
  int hi = std::max(a.top(), b.top());
  if (!r.is_exact()) hi = std::min(hi, r.prec_ - 1);
  r.val_ = lo;
  if (hi >= lo) {
    r.c_.assign(hi - lo + 1, FqElem{0});
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      int ex = a.val_ + static_cast<int>(i);
      if (ex <= hi) r.c_[ex - lo] = a.c_[i];
    }
    for (std::size_t i = 0; i < b.c_.size(); ++i) {
      int ex = b.val_ + static_cast<int>(i);
      if (ex <= hi) r.c_[ex - lo] = F->add(r.c_[ex - lo], b.c_[i]);
    }
  }
  r.normalize();
  return r;
}

Series operator-(const Series& a, const Series& b) { return a + (-b); }

Series operator*(const Series& a, const Series& b) {
  const Fq* F = common_field(a, b);
  Series r(F);
  if (a.is_exact_zero() || b.is_exact_zero()) return r;
  r.prec_ = std::min(prec_add(a.prec_, b.val_lower_bound()), prec_add(b.prec_, a.val_lower_bound()));
  if (a.c_.empty() || b.c_.empty()) return r;
  r.val_ = a.val_ + b.val_;
  std::size_t len = a.c_.size() + b.c_.size() - 1;
  if (!r.is_exact()) {
    long long cap = static_cast<long long>(r.prec_) - r.val_;
    if (cap <= 0) {
      r.c_.clear();
      return r;
    }
    len = std::min<std::size_t>(len, static_cast<std::size_t>(cap));
  }
  r.c_.assign(len, FqElem{0});
  for (std::size_t i = 0; i < a.c_.size() && i < len; ++i) {
    if (a.c_[i].v == 0) continue;
    for (std::size_t j = 0; j < b.c_.size() && i + j < len; ++j)
      r.c_[i + j] = F->add(r.c_[i + j], F->mul(a.c_[i], b.c_[j]));
  }
  r.normalize();
  return r;
}

Series Series::inverse(int target_prec) const {
  if (c_.empty()) {
    if (is_exact()) throw DivisionByZero("inverse of the exact zero series");
    throw OutOfPrecision("inverse of O(pi^" + std::to_string(prec_) + ")");
  }
  const int v = val_;
  if (is_monomial()) {
    Series r = monomial(*f_, f_->inv(c_[0]), -v);
    return target_prec >= kExact ? r : r.truncated(target_prec);
  }
  long long need = static_cast<long long>(target_prec) + v;  // relative length
  long long have = is_exact() ? static_cast<long long>(kExact) : static_cast<long long>(prec_) - v;
  if (need > have)
    throw OutOfPrecision("inverse to precision " + std::to_string(target_prec) +
                         " needs relative precision " + std::to_string(need));
  Series r(f_);
  r.prec_ = target_prec;
  r.val_ = -v;
  if (need <= 0) return r;
  const Fq& F = *f_;
  FqElem c0inv = F.inv(c_[0]);
  r.c_.assign(need, FqElem{0});
  r.c_[0] = c0inv;
  for (long long i = 1; i < need; ++i) {
    FqElem acc{0};
    for (long long j = 1; j <= i && j < static_cast<long long>(c_.size()); ++j)
      acc = F.add(acc, F.mul(c_[j], r.c_[i - j]));
    r.c_[i] = F.neg(F.mul(c0inv, acc));
  }
  r.normalize();
  return r;
}

Series Series::inverse() const {
  if (c_.empty()) return inverse(0);  // raises the appropriate error
  if (is_monomial()) return inverse(kExact);
  if (is_exact()) return inverse(-val_ + working_precision());
  return inverse(prec_ - 2 * val_);
}

Series Series::truncated(int prec) const {
  if (prec >= prec_) return *this;
  Series r = *this;
  r.prec_ = prec;
  r.normalize();
  return r;
}

Series Series::shifted(int e) const {
  Series r = *this;
  if (!r.c_.empty()) r.val_ += e;
  r.prec_ = prec_add(prec_, e);
  return r;
}

Series Series::scaled(FqElem c) const {
  if (c.v == 0) return is_exact() ? Series(f_) : zero_to(*f_, prec_);
  Series r = *this;
  for (auto& x : r.c_) x = f_->mul(x, c);
  return r;
}

Series Series::low_part(int e) const {
  if (e > prec_) throw OutOfPrecision("low part beyond precision");
  Series r(f_);
  if (c_.empty() || e <= val_) return r;
  r.val_ = val_;
  r.c_.assign(c_.begin(), c_.begin() + std::min<long long>(c_.size(), static_cast<long long>(e) - val_));
  r.normalize();
  return r;
}

Series Series::high_part_div(int e) const {
  Series r(f_);
  r.prec_ = prec_add(prec_, -e);
  if (c_.empty()) return r;
  if (top() < e) return r;
  int start = std::max(val_, e);
  r.val_ = start - e;
  r.c_.assign(c_.begin() + (start - val_), c_.end());
  r.normalize();
  return r;
}

bool operator==(const Series& a, const Series& b) {
  if (a.prec_ != b.prec_) return false;
  if (a.c_.size() != b.c_.size()) return false;
  if (a.c_.empty()) return true;
  if (a.field() && b.field() && a.field() != b.field()) return false;
  return a.val_ == b.val_ && std::equal(a.c_.begin(), a.c_.end(), b.c_.begin());
}

bool Series::agrees_with(const Series& o, int upto) const {
  if (upto > prec_ || upto > o.prec_) throw OutOfPrecision("comparison beyond known precision");
  Series d = *this - o;
  return d.c_.empty() || d.val_ >= upto;
}

std::string Series::to_string() const {
  std::ostringstream os;
  if (c_.empty()) {
    os << "0";
  } else {
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i].v == 0) continue;
      if (!first) os << " + ";
      first = false;
      os << int(c_[i].v);
      int ex = val_ + static_cast<int>(i);
      if (ex != 0) os << "*pi^" << ex;
    }
  }
  if (!is_exact()) os << " + O(pi^" << prec_ << ")";
  return os.str();
}

}  // namespace bt
