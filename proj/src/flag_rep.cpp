#include "btharm/flag_rep.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <tuple>

namespace bt {

namespace {

void append_residue_key(Key& key, const ResidueMat& m) {
  key.push_back(m.rows());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      for (FqElem c : m(i, j)) key.push_back(c.v);
}

ResidueMat from_fq_mat(const ResRing& R, const FqMat& x) {
  ResidueMat r(R, x.rows, x.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) r(i, j) = R.from_fq(x(i, j));
  return r;
}

std::vector<ResidueMat> level_generators(const Fq& F, int N, int m) {
  ResRing R(F, m);
  std::vector<ResidueMat> gens;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      for (int s = 0; s < m; ++s)
        for (FqElem a : F.additive_basis()) {
          ResidueMat g = ResidueMat::identity(R, N);
          g(i, j)[s] = a;
          gens.push_back(std::move(g));
        }
    }
  return gens;
}

}  // namespace

// ---------------------------------------------------------------------------
// FlagSpace

FlagPoint FlagSpace::normalize(std::vector<ResidueMat> spaces) const {
  FlagPoint p;
  ResRing R(*f_, m_);
  for (auto& V : spaces) {
    FqMat red = V.residue();
    auto piv = fq_rref_inplace(*f_, red);
    const int d = V.rows();
    if (static_cast<int>(piv.size()) != d) throw InvalidArgument("flag space basis is not a direct summand");
    ResidueMat S(R, d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) S(r, c) = V(r, piv[c]);
    p.spaces.push_back(S.inverse() * V);
  }
  for (const auto& V : p.spaces) append_residue_key(p.key, V);
  return p;
}

FlagPoint FlagSpace::point_of(const ResidueMat& g) const {
  ResRing R(*f_, m_);
  const int N = n_ + 1;
  std::vector<ResidueMat> spaces;
  for (int d : dims_) {
    ResidueMat V(R, d, N);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < N; ++c) V(r, c) = g(c, r);
    spaces.push_back(std::move(V));
  }
  return normalize(std::move(spaces));
}

FlagPoint FlagSpace::translate(const ResidueMat& s, const FlagPoint& x) const {
  ResidueMat st = s.transpose();
  std::vector<ResidueMat> spaces;
  for (const auto& V : x.spaces) spaces.push_back(V * st);
  return normalize(std::move(spaces));
}

FlagPoint FlagSpace::project_level(const FlagPoint& x, int m2) const {
  if (m2 > m_) throw InvalidArgument("projection to a higher level");
  ResRing R2(*f_, m2);
  FlagPoint p;
  for (const auto& V : x.spaces) {
    ResidueMat W(R2, V.rows(), V.cols());
    for (int i = 0; i < V.rows(); ++i)
      for (int j = 0; j < V.cols(); ++j) W(i, j).assign(V(i, j).begin(), V(i, j).begin() + m2);
    p.spaces.push_back(std::move(W));
  }
  for (const auto& V : p.spaces) append_residue_key(p.key, V);
  return p;
}

int FlagSpace::find(const Key& key) const {
  auto it = index_.find(key);
  return it == index_.end() ? -1 : it->second;
}

FlagSpacePtr FlagSpace::get(const Fq& F, int n, unsigned J, int m, const Limits& lim) {
  static std::mutex mu;
  static std::map<std::tuple<const Fq*, int, unsigned, int>, FlagSpacePtr> cache;
  if (m < 1) throw InvalidArgument("flag space level must be >= 1");
  {
    std::lock_guard lock(mu);
    auto it = cache.find({&F, n, J, m});
    if (it != cache.end()) return it->second;
  }
  std::shared_ptr<FlagSpace> s(new FlagSpace());
  s->f_ = &F;
  s->n_ = n;
  s->J_ = J;
  s->m_ = m;
  s->dims_ = complement_indices(n, J);
  const int N = n + 1;
  ResRing R(F, m);
  ResidueMat id = ResidueMat::identity(R, N);
  auto gens = level_generators(F, N, m);
  s->points_.push_back(s->point_of(id));
  s->lifts_.push_back(id);
  s->index_.emplace(s->points_[0].key, 0);
  for (std::size_t head = 0; head < s->points_.size(); ++head) {
    for (const auto& g : gens) {
      FlagPoint y = s->translate(g, s->points_[head]);
      if (s->index_.count(y.key)) continue;
      s->index_.emplace(y.key, static_cast<int>(s->points_.size()));
      s->lifts_.push_back(g * s->lifts_[head]);
      s->points_.push_back(std::move(y));
      if (s->points_.size() > lim.max_group) throw ResourceLimit("flag space exceeds the size limit");
    }
  }
  std::lock_guard lock(mu);
  auto [it, inserted] = cache.emplace(std::make_tuple(&F, n, J, m), s);
  return it->second;
}

// ---------------------------------------------------------------------------
// LevelFunction

LevelFunction LevelFunction::zero(FlagSpacePtr s) {
  LevelFunction f;
  f.values.assign(s->size(), Rational(0));
  f.space = std::move(s);
  return f;
}

LevelFunction operator+(const LevelFunction& a, const LevelFunction& b) {
  if (a.space != b.space) throw InvalidArgument("functions on different flag spaces");
  LevelFunction r = a;
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] += b.values[i];
  return r;
}

LevelFunction operator-(const LevelFunction& a, const LevelFunction& b) {
  if (a.space != b.space) throw InvalidArgument("functions on different flag spaces");
  LevelFunction r = a;
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] -= b.values[i];
  return r;
}

LevelFunction LevelFunction::scaled(const Rational& c) const {
  LevelFunction r = *this;
  for (auto& v : r.values) v *= c;
  return r;
}

LevelFunction embed_level(const LevelFunction& f, int m2) {
  const FlagSpace& S = *f.space;
  if (m2 == S.level()) return f;
  auto S2 = FlagSpace::get(S.field(), S.n(), S.J(), m2);
  LevelFunction r = LevelFunction::zero(S2);
  for (int i = 0; i < S2->size(); ++i) {
    int j = S.find(S2->project_level(S2->point(i), S.level()).key);
    if (j < 0) throw std::logic_error("embed_level: projected point not found");
    r.values[i] = f.values[j];
  }
  return r;
}

// ---------------------------------------------------------------------------
// Parahorics and product sets

bool in_parabolic(const FqMat& x, unsigned I) {
  const int N = x.rows;
  std::vector<int> block(N, 0);
  for (int i = 1; i < N; ++i) block[i] = block[i - 1] + ((I & (1u << (i - 1))) ? 0 : 1);
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c)
      if (block[r] > block[c] && x(r, c).v != 0) return false;
  return true;
}

bool parahoric_member(const MatK& g, unsigned I, bool circ) {
  const int N = g.rows();
  if (!circ) {
    int dv = det_val(g);
    if (dv % N != 0) return false;
    return parahoric_member(g.shifted(-dv / N), I, true);
  }
  if (g.min_val() < 0) return false;
  if (det_val(g) != 0) return false;
  return in_parabolic(reduce_mod(g, 1).residue(), I);
}

std::vector<FqMat> parabolic_generators(const Fq& F, int n, unsigned L) {
  const int N = n + 1;
  std::vector<FqMat> gens;
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j)
      for (FqElem a : F.additive_basis()) {
        FqMat g = FqMat::identity(N);
        g(i, j) = a;
        gens.push_back(std::move(g));
      }
  for (int i = 1; i <= n; ++i) {
    if (!(L & (1u << (i - 1)))) continue;
    for (FqElem a : F.additive_basis()) {
      FqMat g = FqMat::identity(N);
      g(i, i - 1) = a;
      gens.push_back(std::move(g));
    }
  }
  if (F.q() > 2)
    for (int i = 0; i < N; ++i) {
      FqMat g = FqMat::identity(N);
      g(i, i) = F.generator();
      gens.push_back(std::move(g));
    }
  return gens;
}

std::vector<FqMat> group_closure(const Fq& F, const std::vector<FqMat>& gens, const Limits& lim) {
  if (gens.empty()) return {};
  const int N = gens.front().rows;
  std::vector<FqMat> out{FqMat::identity(N)};
  std::set<FqMat> seen{out.front()};
  for (std::size_t head = 0; head < out.size(); ++head)
    for (const auto& g : gens) {
      FqMat y = fq_mul(F, g, out[head]);
      if (seen.insert(y).second) {
        out.push_back(std::move(y));
        if (out.size() > lim.max_group) throw ResourceLimit("group exceeds the size limit");
      }
    }
  return out;
}

std::vector<unsigned> ci_factors(int n, unsigned I, CiMode mode) {
  auto comp = complement_indices(n, I);
  const int k = static_cast<int>(comp.size());
  auto interval = [](int lo, int hi) {
    unsigned m = 0;
    for (int i = lo; i <= hi; ++i) m |= 1u << (i - 1);
    return m;
  };
  std::vector<unsigned> out;
  for (int m = k; m >= 1; --m) {
    if (mode == CiMode::Displayed && m != k && m != 1) continue;
    out.push_back(interval(comp[m - 1] + 1, n - k + m));
  }
  out.push_back(j_k(n, k));
  return out;
}

ProductSet product_set(const Fq& F, int n, unsigned I, CiMode mode, const Limits& lim) {
  ProductSet ps;
  ps.I = I;
  ps.k = static_cast<int>(complement_indices(n, I).size());
  ps.space = FlagSpace::get(F, n, j_k(n, ps.k), 1, lim);
  ps.factors = ci_factors(n, I, mode);
  const FlagSpace& S = *ps.space;
  ResRing R(F, 1);
  std::map<int, FqMat> members{{0, FqMat::identity(n + 1)}};
  for (auto it = ps.factors.rbegin(); it != ps.factors.rend(); ++it) {
    auto gens = parabolic_generators(F, n, *it);
    std::vector<ResidueMat> rgens;
    for (const auto& g : gens) rgens.push_back(from_fq_mat(R, g));
    std::deque<int> queue;
    for (auto& [i, l] : members) queue.push_back(i);
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop_front();
      for (std::size_t t = 0; t < gens.size(); ++t) {
        int y = S.find(S.translate(rgens[t], S.point(x)).key);
        if (members.count(y)) continue;
        members.emplace(y, fq_mul(F, gens[t], members.at(x)));
        queue.push_back(y);
      }
    }
  }
  for (auto& [i, l] : members) {
    ps.points.push_back(i);
    ps.lifts.push_back(l);
  }
  return ps;
}

LevelFunction chi_B(const Fq& F, int n, int k) {
  LevelFunction f = LevelFunction::zero(FlagSpace::get(F, n, j_k(n, k), 1));
  f.values[0] = 1;
  return f;
}

LevelFunction chi_C(const ProductSet& ps) {
  LevelFunction f = LevelFunction::zero(ps.space);
  for (int i : ps.points) f.values[i] = 1;
  return f;
}

LevelFunction chi_C_decomposed(const ProductSet& ps) {
  const Fq& F = ps.space->field();
  const int n = ps.space->n();
  LevelFunction b = chi_B(F, n, ps.k);
  LevelFunction acc = LevelFunction::zero(ps.space);
  for (const auto& l : ps.lifts) acc = acc + act_on_function(MatK::from_fq(F, l), b);
  return acc;
}

// ---------------------------------------------------------------------------
// Action on functions

int action_depth(const MatK& g) {
  int a = g.min_val();
  int b = adjugate(g).min_val() - det_val(g);
  return std::max(0, -a) + std::max(0, -b);
}

LevelFunction act_on_function(const MatK& g, const LevelFunction& f) {
  const FlagSpace& S = *f.space;
  const int m = S.level();
  const int depth = action_depth(g);
  if (depth == 0) {
    ResidueMat ginv = reduce_mod(g, m).inverse();
    LevelFunction r = LevelFunction::zero(f.space);
    for (int i = 0; i < S.size(); ++i) {
      int j = S.find(S.translate(ginv, S.point(i)).key);
      r.values[i] = f.values[j];
    }
    return r;
  }
  auto S2 = FlagSpace::get(S.field(), S.n(), S.J(), m + depth);
  MatK adj = adjugate(g);
  LevelFunction r = LevelFunction::zero(S2);
  for (int i = 0; i < S2->size(); ++i) {
    Iwasawa iw = iwasawa(adj * S2->lift(i).lift());
    int j = S.find(S.point_of(reduce_mod(iw.k, m)).key);
    if (j < 0) throw std::logic_error("act_on_function: image point not found");
    r.values[i] = f.values[j];
  }
  return r;
}

// ---------------------------------------------------------------------------
// Special representations

std::vector<std::vector<int>> degenerate_fibres(const Fq& F, int n, int k, int m) {
  auto S = FlagSpace::get(F, n, j_k(n, k), m);
  const auto& dims = S->dims();
  std::vector<std::vector<int>> out;
  for (int j = n - k + 1; j <= n; ++j) {
    const int drop = static_cast<int>(std::find(dims.begin(), dims.end(), j) - dims.begin());
    std::map<Key, std::vector<int>> fibres;
    for (int i = 0; i < S->size(); ++i) {
      Key sub;
      const auto& sp = S->point(i).spaces;
      for (int t = 0; t < static_cast<int>(sp.size()); ++t)
        if (t != drop) append_residue_key(sub, sp[t]);
      fibres[sub].push_back(i);
    }
    for (auto& [key, idx] : fibres) out.push_back(std::move(idx));
  }
  return out;
}

std::vector<LevelFunction> degenerate_basis(const Fq& F, int n, int k, int m) {
  auto S = FlagSpace::get(F, n, j_k(n, k), m);
  std::vector<LevelFunction> out;
  for (const auto& idx : degenerate_fibres(F, n, k, m)) {
    LevelFunction f = LevelFunction::zero(S);
    for (int i : idx) f.values[i] = 1;
    out.push_back(std::move(f));
  }
  return out;
}

namespace {

SparseVec sparse_of(const LevelFunction& f) { return to_sparse(f.values); }

SparseVec indicator_row(const std::vector<int>& idx) {
  SparseVec row;
  for (int i : idx) row.emplace_back(i, Rational(1));
  return row;
}

struct DegenerateSpan {
  std::mutex mu;
  RowReducer red;
  explicit DegenerateSpan(int ncols) : red(ncols) {}
};

DegenerateSpan& degenerate_span(const Fq& F, int n, int k, int m) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int, int>, std::unique_ptr<DegenerateSpan>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{F.q(), n, k, m}];
  if (!slot) {
    slot = std::make_unique<DegenerateSpan>(FlagSpace::get(F, n, j_k(n, k), m)->size());
    for (const auto& idx : degenerate_fibres(F, n, k, m)) slot->red.add(indicator_row(idx));
  }
  return *slot;
}

}  // namespace

bool sp_equal(const LevelFunction& f1, const LevelFunction& f2, int k) {
  const FlagSpace& S = *f1.space;
  const int m = std::max(f1.level(), f2.level());
  LevelFunction d = embed_level(f1, m) - embed_level(f2, m);
  DegenerateSpan& span = degenerate_span(S.field(), S.n(), k, m);
  std::lock_guard<std::mutex> lock(span.mu);
  return span.red.in_span(sparse_of(d));
}

int steinberg_dim(const Fq& F, int n, int k) {
  auto S = FlagSpace::get(F, n, j_k(n, k), 1);
  RowReducer red(S->size());
  for (const auto& idx : degenerate_fibres(F, n, k, 1)) red.add(indicator_row(idx));
  return S->size() - red.rank();
}

int steinberg_dim_bareiss(const Fq& F, int n, int k) {
  auto S = FlagSpace::get(F, n, j_k(n, k), 1);
  auto basis = degenerate_basis(F, n, k, 1);
  std::vector<std::vector<mpz_class>> m;
  for (auto it = basis.rbegin(); it != basis.rend(); ++it) {
    std::vector<mpz_class> row(S->size());
    for (int i = 0; i < S->size(); ++i) row[i] = it->values[i].get_num();
    m.push_back(std::move(row));
  }
  return S->size() - rank_bareiss(std::move(m));
}

int chi_b_translate_rank(const Fq& F, int n, int k, const Limits& lim) {
  auto group = group_closure(F, parabolic_generators(F, n, j_k(n, 0)), lim);
  LevelFunction b = chi_B(F, n, k);
  RowReducer red(b.space->size());
  for (const auto& u : group) {
    red.add(sparse_of(act_on_function(MatK::from_fq(F, u), b)));
    if (red.rank() == b.space->size()) break;
  }
  return red.rank();
}

}  // namespace bt
