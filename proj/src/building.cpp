#include "btharm/building.hpp"

#include <omp.h>

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace bt {

std::size_t KeyHash::operator()(const Key& k) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::int32_t x : k) {
    h ^= static_cast<std::uint32_t>(x);
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

std::string key_string(const Key& k) {
  std::ostringstream os;
  for (std::size_t i = 0; i < k.size(); ++i) os << (i ? "," : "") << k[i];
  return os.str();
}

// ---------------------------------------------------------------------------
// Canonical form

namespace {

using RRow = std::vector<RElem>;

RElem shift_down(const RElem& x, int s) {
  RElem r(x.size());
  for (std::size_t t = 0; t + s < x.size(); ++t) r[t] = x[t + s];
  return r;
}

RRow row_shift_up(const RRow& row, int s) {
  RRow r = row;
  for (auto& x : r) {
    RElem y(x.size());
    for (std::size_t t = 0; t + s < x.size(); ++t) y[t + s] = x[t];
    x = std::move(y);
  }
  return r;
}

bool row_is_zero(const ResRing& R, const RRow& row) {
  return std::all_of(row.begin(), row.end(), [&](const RElem& x) { return R.is_zero(x); });
}

void row_axpy(const ResRing& R, RRow& dst, const RElem& f, const RRow& src) {
  for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = R.sub(dst[j], R.mul(f, src[j]));
}

void append_series_key(Key& key, const Series& s) {
  if (s.is_zero()) {
    key.push_back(0);
    return;
  }
  auto c = s.stored();
  key.push_back(static_cast<std::int32_t>(c.size()));
  key.push_back(s.val());
  for (FqElem x : c) key.push_back(x.v);
}

Key vertex_key(const std::vector<int>& a, const MatK& H) {
  Key key;
  const int N = static_cast<int>(a.size());
  key.push_back(N);
  for (int x : a) key.push_back(x);
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) append_series_key(key, H(i, j));
  return key;
}

/// Row vector c with c H = x, for H canonical upper triangular with monomial diagonal.
std::vector<Series> coords_in(const Vertex& v, const MatK& X, int row) {
  const MatK& H = v.basis;
  const int N = v.dim();
  std::vector<Series> c(N, Series::zero(H.field()));
  for (int j = 0; j < N; ++j) {
    Series s = X(row, j);
    for (int i = 0; i < j; ++i)
      if (!c[i].is_exact_zero() && !H(i, j).is_exact_zero()) s -= c[i] * H(i, j);
    c[j] = s.shifted(-v.a[j]);
  }
  return c;
}

}  // namespace

CanonicalLattice canonicalize(const MatK& B) {
  const Fq& F = B.field();
  const int N = B.rows();
  if (B.cols() != N) throw InvalidArgument("canonicalize: basis must be square");
  const int mv = B.min_val();
  if (mv >= Series::kExact) throw Singular("canonicalize: zero matrix");
  MatK Bi = B.shifted(-mv);
  const int D = det_val(Bi);

  std::vector<int> A(N, 0);
  MatK H = MatK::identity(F, N);
  if (D > 0) {
    ResRing R(F, D);
    std::vector<RRow> rem;
    for (int i = 0; i < N; ++i) {
      RRow row(N);
      for (int j = 0; j < N; ++j) row[j] = R.from_series(Bi(i, j));
      rem.push_back(std::move(row));
    }
    std::vector<RRow> piv(N, RRow(N, R.zero()));
    for (int c = 0; c < N; ++c) {
      int best = D, bi = -1;
      for (int i = 0; i < static_cast<int>(rem.size()); ++i) {
        int v = R.val(rem[i][c]);
        if (v < best) {
          best = v;
          bi = i;
        }
      }
      A[c] = best;
      if (bi < 0) continue;
      RRow row = std::move(rem[bi]);
      rem.erase(rem.begin() + bi);
      RElem uinv = R.inv(shift_down(row[c], best));
      for (auto& x : row) x = R.mul(x, uinv);
      for (auto& other : rem) {
        if (R.val(other[c]) >= D) continue;
        row_axpy(R, other, shift_down(other[c], best), row);
      }
      RRow ann = row_shift_up(row, D - best);
      if (!row_is_zero(R, ann)) rem.push_back(std::move(ann));
      std::erase_if(rem, [&](const RRow& r) { return row_is_zero(R, r); });
      piv[c] = std::move(row);
    }
    int sum = 0;
    for (int x : A) sum += x;
    if (sum != D) throw std::logic_error("canonicalize: elementary divisor count mismatch");
    // Reduce entries above the diagonal, column by column.
    for (int j = 0; j < N; ++j) {
      if (A[j] >= D) continue;
      for (int i = 0; i < j; ++i) {
        RElem qpart = shift_down(piv[i][j], A[j]);
        if (!R.is_zero(qpart)) row_axpy(R, piv[i], qpart, piv[j]);
      }
    }
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        if (j < i) {
          H(i, j) = Series::zero(F);
        } else if (j == i) {
          H(i, j) = Series::pi_power(F, A[i]);
        } else {
          RElem x = piv[i][j];
          for (int t = A[j]; t < D; ++t) x[t] = FqElem{0};
          H(i, j) = R.to_series(x);
        }
      }
  }
  const int m = *std::min_element(A.begin(), A.end());
  auto v = std::make_shared<Vertex>();
  v->a = A;
  for (int& x : v->a) x -= m;
  v->basis = m ? H.shifted(-m) : H;
  v->key = vertex_key(v->a, v->basis);
  return {std::move(v), -mv - m};
}

VertexPtr vertex_from_matrix(const MatK& g) { return canonicalize(g).vertex; }

VertexPtr standard_vertex(const Fq& F, int n, int i) {
  std::vector<int> e(n + 1, 0);
  for (int t = 0; t < i; ++t) e[t] = 1;
  return vertex_from_matrix(MatK::diag_pi(F, e));
}

// ---------------------------------------------------------------------------
// Pointed cells

PointedCell PointedCell::make(VertexPtr base, std::vector<FqMat> flag) {
  PointedCell c;
  c.base = std::move(base);
  c.flag = std::move(flag);
  c.key = c.base->key;
  c.key.push_back(-1);
  for (const auto& f : c.flag) {
    c.key.push_back(f.rows);
    for (FqElem x : f.a) c.key.push_back(x.v);
  }
  return c;
}

PointedCell vertex_cell(VertexPtr v) { return PointedCell::make(std::move(v), {}); }

MatK preimage_basis(const Vertex& v, const FqMat& sub) {
  const MatK& H = v.basis;
  const Fq& F = H.field();
  const int N = v.dim();
  FqMat s = fq_rref(F, sub);
  std::vector<int> pivrow(N, -1);
  for (int r = 0; r < s.rows; ++r)
    for (int c = 0; c < N; ++c)
      if (s(r, c).v != 0) {
        pivrow[c] = r;
        break;
      }
  MatK out(F, N, N);
  for (int i = 0; i < N; ++i) {
    if (pivrow[i] < 0) {
      for (int j = 0; j < N; ++j) out(i, j) = H(i, j).shifted(1);
      continue;
    }
    const int r = pivrow[i];
    for (int l = 0; l < N; ++l) {
      FqElem x = s(r, l);
      if (x.v == 0) continue;
      for (int j = l; j < N; ++j)
        if (!H(l, j).is_exact_zero()) out(i, j) += H(l, j).scaled(x);
    }
  }
  return out;
}

MatK chain_basis(const PointedCell& c, int j) {
  if (j == 0) return c.base->basis;
  if (j == c.k() + 1) return c.base->basis.shifted(1);
  return preimage_basis(*c.base, c.flag[j - 1]);
}

PointedCell make_cell(const std::vector<MatK>& chain, bool validate) {
  if (chain.empty()) throw InvalidArgument("make_cell: empty chain");
  CanonicalLattice cl = canonicalize(chain[0]);
  const Vertex& v = *cl.vertex;
  const Fq& F = v.basis.field();
  const int N = v.dim();
  int base_dv = 0;
  for (int x : v.a) base_dv += x;
  std::vector<FqMat> flag;
  for (std::size_t j = 1; j < chain.size(); ++j) {
    MatK X = chain[j].shifted(cl.scale);
    FqMat red(N, N);
    for (int r = 0; r < N; ++r) {
      auto c = coords_in(v, X, r);
      for (int t = 0; t < N; ++t) {
        if (c[t].is_zero()) continue;
        if (c[t].val() < 0) throw InvalidArgument("make_cell: lattice not contained in Lambda_0");
        red(r, t) = c[t].coeff(0);
      }
    }
    FqMat f = fq_rref(F, std::move(red));
    if (validate) {
      const int prev = flag.empty() ? N : flag.back().rows;
      if (f.rows <= 0 || f.rows >= prev) throw InvalidArgument("make_cell: chain is not strictly decreasing");
      if (!flag.empty() && !fq_contains(F, flag.back(), f))
        throw InvalidArgument("make_cell: chain is not nested");
      if (det_val(X) != base_dv + (N - f.rows))
        throw InvalidArgument("make_cell: lattice does not contain pi Lambda_0");
    }
    flag.push_back(std::move(f));
  }
  return PointedCell::make(cl.vertex, std::move(flag));
}

std::vector<VertexPtr> cell_vertices(const PointedCell& c) {
  std::vector<VertexPtr> out{c.base};
  for (int j = 1; j <= c.k(); ++j) out.push_back(vertex_from_matrix(chain_basis(c, j)));
  return out;
}

bool chain_condition_holds(const PointedCell& c) {
  const Fq& F = c.field();
  const int N = c.dim();
  int prev = N;
  for (int j = 0; j < c.k(); ++j) {
    const FqMat& f = c.flag[j];
    if (f.rows <= 0 || f.rows >= prev) return false;
    if (fq_rref(F, f) != f) return false;
    if (j > 0 && !fq_contains(F, c.flag[j - 1], f)) return false;
    prev = f.rows;
  }
  return true;
}

PointedCell act(const MatK& g, const PointedCell& c) {
  MatK adj = adjugate(g);
  std::vector<MatK> chain;
  for (int j = 0; j <= c.k(); ++j) chain.push_back(chain_basis(c, j) * adj);
  return make_cell(chain, false);
}

CellType pointed_type(const PointedCell& c) {
  CellType t;
  int prev = c.dim();
  for (const auto& f : c.flag) {
    t.push_back(prev - f.rows);
    prev = f.rows;
  }
  t.push_back(prev);
  return t;
}

PointedCell rotate(const PointedCell& c) {
  if (c.k() == 0) return c;
  std::vector<MatK> chain;
  for (int j = 1; j <= c.k() + 1; ++j) chain.push_back(chain_basis(c, j));
  return make_cell(chain, false);
}

PointedCell face(const PointedCell& c, int j) {
  if (c.k() < 1 || j < 0 || j > c.k()) throw InvalidArgument("face: index out of range");
  if (j >= 1) {
    std::vector<FqMat> fl = c.flag;
    fl.erase(fl.begin() + (j - 1));
    return PointedCell::make(c.base, std::move(fl));
  }
  std::vector<MatK> chain;
  for (int t = 1; t <= c.k(); ++t) chain.push_back(chain_basis(c, t));
  return make_cell(chain, false);
}

std::vector<PointedCell> faces(const PointedCell& c) {
  std::vector<PointedCell> out;
  for (int j = 0; j <= c.k(); ++j) out.push_back(face(c, j));
  return out;
}

// ---------------------------------------------------------------------------
// Standard cells

std::vector<int> complement_indices(int n, unsigned I) {
  std::vector<int> out;
  for (int i = 1; i <= n; ++i)
    if (!(I & (1u << (i - 1)))) out.push_back(i);
  return out;
}

unsigned subset_mask(const std::vector<int>& elems) {
  unsigned m = 0;
  for (int i : elems) m |= 1u << (i - 1);
  return m;
}

unsigned j_k(int n, int k) {
  unsigned m = 0;
  for (int i = 1; i <= n - k; ++i) m |= 1u << (i - 1);
  return m;
}

PointedCell standard_cell(const Fq& F, int n, unsigned I) {
  const int N = n + 1;
  std::vector<FqMat> flag;
  for (int i : complement_indices(n, I)) {
    FqMat f(N - i, N);
    for (int r = 0; r < N - i; ++r) f(r, i + r) = FqElem{1};
    flag.push_back(std::move(f));
  }
  return PointedCell::make(standard_vertex(F, n, 0), std::move(flag));
}

MatK simple_reflection(const Fq& F, int n, int j) {
  const int N = n + 1;
  MatK s(F, N, N);
  for (int i = 0; i < N; ++i) s(i, i) = Series::one(F);
  s(j - 1, j - 1) = Series::zero(F);
  s(j, j) = Series::zero(F);
  s(j - 1, j) = Series::one(F);
  s(j, j - 1) = Series::one(F);
  return s;
}

WijPair wij_pair(const Fq& F, int n, int i) {
  if (i < 0 || i > n) throw InvalidArgument("wij_pair: index out of range");
  std::vector<int> e(n + 1, 0);
  for (int t = i; t <= n; ++t) e[t] = 1;
  MatK w = MatK::identity(F, n + 1);
  // (s_i ... s_n)(s_{i-1} ... s_{n-1}) ... (s_1 ... s_{n-i+1})
  for (int t = 0; t < i; ++t)
    for (int j = i - t; j <= n - t; ++j) w = w * simple_reflection(F, n, j);
  return {MatK::diag_pi(F, e), std::move(w)};
}

// ---------------------------------------------------------------------------
// Neighbour enumerations

namespace {

FqMat full_space(int N) { return FqMat::identity(N); }

FqMat flag_at(const PointedCell& c, int j) {
  if (j == 0) return full_space(c.dim());
  if (j == c.k() + 1) return FqMat(0, c.dim());
  return c.flag[j - 1];
}

void sort_by_key(std::vector<PointedCell>& v) {
  std::sort(v.begin(), v.end(), [](const PointedCell& x, const PointedCell& y) { return x.key < y.key; });
}

}  // namespace

std::vector<PointedCell> enum_csj(const PointedCell& c, int j) {
  if (c.k() < 1 || j < 0 || j > c.k()) throw InvalidArgument("enum_csj: slot out of range");
  const Fq& F = c.field();
  FqMat big = flag_at(c, j);
  FqMat small = flag_at(c, j + 1);
  if (big.rows - small.rows == 1) return {c};
  std::vector<PointedCell> out;
  for (auto& W : fq_intermediate(F, big, small, small.rows + 1)) {
    if (j >= 1) {
      std::vector<FqMat> fl = c.flag;
      fl[j - 1] = std::move(W);
      out.push_back(PointedCell::make(c.base, std::move(fl)));
    } else {
      std::vector<MatK> chain{preimage_basis(*c.base, W)};
      for (int t = 1; t <= c.k(); ++t) chain.push_back(chain_basis(c, t));
      out.push_back(make_cell(chain, false));
    }
  }
  return out;
}

std::vector<PointedCell> enum_b_eta_t(const PointedCell& eta, const CellType& t, Hc2Mode mode) {
  const Fq& F = eta.field();
  const int k = eta.k() + 1;
  if (static_cast<int>(t.size()) != k + 1) return {};
  CellType te = pointed_type(eta);
  std::vector<PointedCell> out;
  std::unordered_set<Key, KeyHash> seen;
  auto emit = [&](PointedCell c) {
    if (seen.insert(c.key).second) out.push_back(std::move(c));
  };
  for (int s = 0; s < k; ++s) {
    FqMat big = flag_at(eta, s);
    FqMat small = flag_at(eta, s + 1);
    for (int w = small.rows + 1; w < big.rows; ++w) {
      CellType split = te;
      split[s] = big.rows - w;
      split.insert(split.begin() + s + 1, w - small.rows);
      if (mode == Hc2Mode::PointedCompatible && split != t) continue;
      if (mode == Hc2Mode::UnderlyingFace) {
        // Some rotation must carry type t.
        bool any = false;
        for (int r = 0; r <= k && !any; ++r) {
          CellType rt(split.begin() + r, split.end());
          rt.insert(rt.end(), split.begin(), split.begin() + r);
          any = (rt == t);
        }
        if (!any) continue;
      }
      for (auto& W : fq_intermediate(F, big, small, w)) {
        std::vector<FqMat> fl = eta.flag;
        fl.insert(fl.begin() + s, std::move(W));
        PointedCell c = PointedCell::make(eta.base, std::move(fl));
        if (mode == Hc2Mode::PointedCompatible) {
          emit(std::move(c));
          continue;
        }
        PointedCell r = c;
        for (int rot = 0; rot <= k; ++rot) {
          if (pointed_type(r) == t) emit(r);
          r = rotate(r);
        }
      }
    }
  }
  sort_by_key(out);
  return out;
}

std::vector<VertexPtr> neighbors(const Vertex& v) {
  const Fq& F = v.basis.field();
  const int N = v.dim();
  std::vector<VertexPtr> out;
  for (int d = 1; d < N; ++d)
    for (const auto& W : fq_subspaces(F, N, d)) out.push_back(vertex_from_matrix(preimage_basis(v, W)));
  return out;
}

namespace {

std::vector<VertexPtr> ball_impl(const Fq& F, int n, int r, const Limits& lim, bool parallel) {
  std::unordered_map<Key, VertexPtr, KeyHash> seen;
  VertexPtr v0 = standard_vertex(F, n, 0);
  seen.emplace(v0->key, v0);
  std::vector<VertexPtr> frontier{v0};
  for (int step = 0; step < r; ++step) {
    std::vector<std::vector<VertexPtr>> found(frontier.size());
    const long long fs = static_cast<long long>(frontier.size());
    if (parallel) {
      std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
      for (long long i = 0; i < fs; ++i) {
        try {
          found[i] = neighbors(*frontier[i]);
        } catch (...) {
#pragma omp critical
          err = std::current_exception();
        }
      }
      if (err) std::rethrow_exception(err);
    } else {
      for (long long i = 0; i < fs; ++i) found[i] = neighbors(*frontier[i]);
    }
    std::vector<VertexPtr> next;
    for (auto& list : found)
      for (auto& w : list)
        if (seen.emplace(w->key, w).second) next.push_back(w);
    if (seen.size() > lim.max_cells) throw ResourceLimit("ball exceeds the vertex limit");
    frontier = std::move(next);
  }
  std::vector<VertexPtr> out;
  out.reserve(seen.size());
  for (auto& [k, v] : seen) out.push_back(v);
  std::sort(out.begin(), out.end(), [](const VertexPtr& a, const VertexPtr& b) { return a->key < b->key; });
  return out;
}

void flags_rec(const Fq& F, const std::vector<FqMat>& subs, std::vector<FqMat>& cur, int k,
               const VertexPtr& base, std::vector<PointedCell>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(PointedCell::make(base, cur));
    return;
  }
  for (const auto& W : subs) {
    if (!cur.empty()) {
      if (W.rows >= cur.back().rows) continue;
      if (!fq_contains(F, cur.back(), W)) continue;
    }
    cur.push_back(W);
    flags_rec(F, subs, cur, k, base, out);
    cur.pop_back();
  }
}

std::vector<PointedCell> cells_at_base(const VertexPtr& base, int k,
                                       const std::unordered_set<Key, KeyHash>& inside) {
  const Fq& F = base->basis.field();
  const int N = base->dim();
  if (k == 0) return {vertex_cell(base)};
  std::vector<FqMat> subs;
  for (int d = N - 1; d >= 1; --d)
    for (auto& W : fq_subspaces(F, N, d))
      if (inside.count(vertex_from_matrix(preimage_basis(*base, W))->key)) subs.push_back(std::move(W));
  std::vector<PointedCell> out;
  std::vector<FqMat> cur;
  flags_rec(F, subs, cur, k, base, out);
  return out;
}

std::vector<PointedCell> cells_impl(const std::vector<VertexPtr>& verts, int k, const Limits& lim,
                                    bool parallel) {
  if (verts.empty()) return {};
  if (k < 0 || k >= verts.front()->dim()) throw InvalidArgument("cells_in_ball: degree out of range");
  std::unordered_set<Key, KeyHash> inside;
  for (const auto& v : verts) inside.insert(v->key);
  std::vector<std::vector<PointedCell>> per(verts.size());
  const long long nv = static_cast<long long>(verts.size());
  if (parallel) {
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < nv; ++i) {
      try {
        per[i] = cells_at_base(verts[i], k, inside);
      } catch (...) {
#pragma omp critical
        err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  } else {
    for (long long i = 0; i < nv; ++i) per[i] = cells_at_base(verts[i], k, inside);
  }
  std::vector<PointedCell> out;
  for (auto& p : per) {
    for (auto& c : p) out.push_back(std::move(c));
    if (out.size() > lim.max_cells) throw ResourceLimit("cell count exceeds the configured limit");
  }
  sort_by_key(out);
  return out;
}

}  // namespace

std::vector<VertexPtr> ball(const Fq& F, int n, int r, const Limits& lim) {
  return ball_impl(F, n, r, lim, true);
}

std::vector<VertexPtr> ball_serial(const Fq& F, int n, int r, const Limits& lim) {
  return ball_impl(F, n, r, lim, false);
}

std::vector<PointedCell> cells_in_ball(const std::vector<VertexPtr>& verts, int k, const Limits& lim) {
  return cells_impl(verts, k, lim, true);
}

std::vector<PointedCell> cells_in_ball_serial(const std::vector<VertexPtr>& verts, int k,
                                              const Limits& lim) {
  return cells_impl(verts, k, lim, false);
}

// ---------------------------------------------------------------------------
// Transitivity

MatK adapted_basis(const PointedCell& c) {
  const Fq& F = c.field();
  const int N = c.dim();
  // Blocks of new rows, from the smallest flag member outwards.
  std::vector<FqMat> blocks;
  FqMat acc(0, N);
  for (int j = c.k() + 1; j >= 0; --j) {
    FqMat target = flag_at(c, j);
    FqMat block(0, N);
    int rank = acc.rows;
    for (int r = 0; r < target.rows; ++r) {
      FqMat row(1, N);
      for (int t = 0; t < N; ++t) row(0, t) = target(r, t);
      FqMat trial = fq_stack(acc, row);
      if (fq_rank(F, trial) > rank) {
        acc = trial;
        ++rank;
        block = fq_stack(block, row);
      }
    }
    blocks.push_back(block);
  }
  FqMat W(0, N);
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) W = fq_stack(W, *it);
  return MatK::from_fq(F, W) * c.base->basis;
}

MatK transporter(const PointedCell& c1, const PointedCell& c2) {
  if (pointed_type(c1) != pointed_type(c2)) throw InvalidArgument("transporter: types differ");
  return adjugate(adapted_basis(c2)) * adapted_basis(c1);
}

}  // namespace bt
