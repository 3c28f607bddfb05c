#include "btharm/arithmetic.hpp"

#include <algorithm>
#include <numeric>

#include "btharm/errors.hpp"

namespace bt {

BundleType normalize_type(std::vector<int> exps) {
  std::sort(exps.begin(), exps.end(), std::greater<>());
  if (!exps.empty()) {
    const int lo = exps.back();
    for (auto& e : exps) e -= lo;
  }
  return exps;
}

std::string type_string(const BundleType& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + ")";
}

bool is_gamma(const MatK& m) {
  if (m.rows() != m.cols() || !m.is_exact()) return false;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero() && m(i, j).top() > 0) return false;
  Series d = det(m);
  return d.is_monomial() && d.val() == 0;
}

GammaElement GammaElement::make(MatK m) {
  if (!is_gamma(m)) throw InvalidArgument("matrix is not in GL(F_q[t])");
  return GammaElement{std::move(m)};
}

namespace {

Series random_poly_t(const Fq& F, int deg, std::mt19937_64& rng) {
  // sum_{d <= deg} c_d t^d = sum c_d pi^{-d}.
  std::vector<FqElem> c(deg + 1);
  std::uniform_int_distribution<int> pick(0, F.q() - 1);
  for (auto& x : c) x = FqElem{static_cast<std::uint8_t>(pick(rng))};
  std::reverse(c.begin(), c.end());
  return Series::from_coeffs(F, -deg, c);
}

void row_axpy(MatK& m, int dst, const Series& f, int src) {
  for (int j = 0; j < m.cols(); ++j) m(dst, j) += f * m(src, j);
}

}  // namespace

GammaElement random_gamma(const Fq& F, int N, std::mt19937_64& rng, int deg, int steps) {
  if (steps <= 0) steps = 2 * N;
  MatK m = MatK::identity(F, N);
  std::uniform_int_distribution<int> idx(0, N - 1);
  for (int s = 0; s < steps; ++s) {
    const int i = idx(rng);
    int j = idx(rng);
    if (N > 1)
      while (j == i) j = idx(rng);
    if (i != j) row_axpy(m, i, random_poly_t(F, deg, rng), j);
  }
  std::vector<int> perm(N);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_int_distribution<int> unit(1, F.q() - 1);
  MatK out(F, N, N);
  for (int i = 0; i < N; ++i) {
    const FqElem u{static_cast<std::uint8_t>(unit(rng))};
    for (int j = 0; j < N; ++j) out(i, j) = m(perm[i], j).scaled(u);
  }
  return GammaElement::make(std::move(out));
}

// ---------------------------------------------------------------------------
// Birkhoff factorization
//
// Rows are reduced by unimodular operations over F_q[t] until the leading
// coefficient vectors (coefficient of pi^{a_i}, a_i the row valuation) are
// independent; then diag(pi^{-a}) times the rows lies in G(O).

namespace {

int row_val(const MatK& m, int i) {
  int v = Series::kExact;
  for (int j = 0; j < m.cols(); ++j)
    if (!m(i, j).is_zero()) v = std::min(v, m(i, j).val());
  return v;
}

// Coefficients c with lc_{i0} = sum_{i != i0} c_i lc_i, rows inserted by decreasing a.
bool find_dependency(const Fq& F, const std::vector<std::vector<FqElem>>& lc, const std::vector<int>& order,
                     int& i0, std::vector<FqElem>& coef) {
  const int N = static_cast<int>(lc.size());
  std::vector<std::vector<FqElem>> basis;  // reduced rows
  std::vector<std::vector<FqElem>> combo;  // basis row as a combination of input rows
  std::vector<int> piv;
  for (int i : order) {
    std::vector<FqElem> v = lc[i];
    std::vector<FqElem> c(N, F.zero());
    c[i] = F.one();
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const FqElem x = v[piv[b]];
      if (x.v == 0) continue;
      for (int j = 0; j < N; ++j) {
        v[j] = F.sub(v[j], F.mul(x, basis[b][j]));
        c[j] = F.sub(c[j], F.mul(x, combo[b][j]));
      }
    }
    int p = -1;
    for (int j = 0; j < N && p < 0; ++j)
      if (v[j].v != 0) p = j;
    if (p < 0) {
      // sum_j c_j lc_j = 0 with c_i = 1.
      i0 = i;
      coef.assign(N, F.zero());
      for (int j = 0; j < N; ++j)
        if (j != i) coef[j] = F.neg(c[j]);
      return true;
    }
    const FqElem inv = F.inv(v[p]);
    for (int j = 0; j < N; ++j) {
      v[j] = F.mul(v[j], inv);
      c[j] = F.mul(c[j], inv);
    }
    basis.push_back(std::move(v));
    combo.push_back(std::move(c));
    piv.push_back(p);
  }
  return false;
}

}  // namespace

BirkhoffResult birkhoff_reduce(const MatK& g) {
  if (g.rows() != g.cols()) throw InvalidArgument("square matrix required");
  if (!g.is_exact()) throw NonLaurent("entries must be exact Laurent polynomials");
  const Fq& F = g.field();
  const int N = g.rows();
  const int dv = det_val(g);
  MatK m = g;
  MatK u = MatK::identity(F, N);  // u * g = m
  std::vector<int> a(N);
  for (int iter = 0;; ++iter) {
    long long sum = 0;
    for (int i = 0; i < N; ++i) {
      a[i] = row_val(m, i);
      if (a[i] >= Series::kExact) throw Singular("zero row");
      sum += a[i];
    }
    if (sum > dv || iter > 64 * N * (std::abs(dv) + 4 * N + 4)) throw OutOfPrecision("Birkhoff reduction did not settle");
    std::vector<std::vector<FqElem>> lc(N, std::vector<FqElem>(N));
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) lc[i][j] = m(i, j).is_zero() ? F.zero() : m(i, j).coeff(a[i]);
    std::vector<int> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return a[x] > a[y]; });
    int i0 = -1;
    std::vector<FqElem> coef;
    if (!find_dependency(F, lc, order, i0, coef)) break;
    // row_{i0} -= sum_i coef_i pi^{a_{i0} - a_i} row_i, a polynomial in t since a_i >= a_{i0}.
    for (int i = 0; i < N; ++i) {
      if (i == i0 || coef[i].v == 0) continue;
      const Series f = Series::monomial(F, F.neg(coef[i]), a[i0] - a[i]);
      row_axpy(m, i0, f, i);
      row_axpy(u, i0, f, i);
    }
  }
  std::vector<int> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return a[x] > a[y]; });
  MatK ms(F, N, N), us(F, N, N);
  BirkhoffResult res;
  for (int i = 0; i < N; ++i) {
    res.exps.push_back(a[order[i]]);
    for (int j = 0; j < N; ++j) {
      ms(i, j) = m(order[i], j).shifted(-a[order[i]]);
      us(i, j) = u(order[i], j);
    }
  }
  res.kappa = std::move(ms);
  res.gamma = GammaElement::make(mat_inv(us));
  res.type = normalize_type(res.exps);
  return res;
}

BundleType vertex_orbit_invariant(const Vertex& v) { return birkhoff_reduce(v.basis.transpose()).type; }

Key cell_orbit_key(const PointedCell& c) {
  Key key;
  for (const auto& v : cell_vertices(c)) {
    for (int x : vertex_orbit_invariant(*v)) key.push_back(x);
    key.push_back(-1);
  }
  return key;
}

namespace {

std::map<BundleType, int> census_impl(const Fq& F, int r, const Limits& lim, bool parallel) {
  auto verts = parallel ? ball(F, 1, r, lim) : ball_serial(F, 1, r, lim);
  std::vector<BundleType> inv(verts.size());
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
  for (long long i = 0; i < static_cast<long long>(verts.size()); ++i) inv[i] = vertex_orbit_invariant(*verts[i]);
  std::map<BundleType, int> out;
  for (const auto& t : inv) ++out[t];
  return out;
}

}  // namespace

std::map<BundleType, int> tree_quotient_census(const Fq& F, int r, const Limits& lim) {
  return census_impl(F, r, lim, true);
}

std::map<BundleType, int> tree_quotient_census_serial(const Fq& F, int r, const Limits& lim) {
  return census_impl(F, r, lim, false);
}

InvarianceReport gamma_invariance_check(const Cochain& h, const std::vector<GammaElement>& gens) {
  const CellSet& cs = *h.cells;
  const std::size_t nc = cs.cells.size();
  std::vector<signed char> st(nc * gens.size(), 0);
#pragma omp parallel for schedule(dynamic, 8)
  for (long long i = 0; i < static_cast<long long>(nc); ++i)
    for (std::size_t g = 0; g < gens.size(); ++g) {
      const int j = cs.find(act(gens[g].m, cs.cells[i]).key);
      st[i * gens.size() + g] = j < 0 ? 2 : (h.values[j] == h.values[i] ? 1 : -1);
    }
  InvarianceReport rep;
  for (std::size_t x = 0; x < st.size(); ++x) {
    if (st[x] == 2) {
      ++rep.skipped;
      continue;
    }
    ++rep.checked;
    if (st[x] == 1)
      ++rep.passed;
    else if (rep.failures.size() < 8)
      rep.failures.push_back(key_string(cs.cells[x / gens.size()].key));
  }
  return rep;
}

std::set<BundleType> finite_support_mod_gamma(const Cochain& h) {
  std::set<BundleType> out;
  for (std::size_t i = 0; i < h.values.size(); ++i)
    if (h.values[i] != 0) out.insert(vertex_orbit_invariant(*h.cells->cells[i].base));
  return out;
}

// ---------------------------------------------------------------------------
// Orbit functions

Rational OrbitFunction::at(const Key& orbit_key) const {
  auto it = values.find(orbit_key);
  return it == values.end() ? fallback : it->second;
}

Rational OrbitFunction::at(const PointedCell& c) const { return at(cell_orbit_key(c)); }

Rational OrbitFunction::at(const MatK& g) const { return at(act(g, standard_cell(*field, n, j_k(n, k)))); }

std::set<BundleType> OrbitFunction::support_types() const {
  std::set<BundleType> out;
  for (const auto& [key, v] : values) {
    if (v == 0) continue;
    auto end = std::find(key.begin(), key.end(), -1);
    out.insert(BundleType(key.begin(), end));
  }
  return out;
}

OrbitFunction operator+(const OrbitFunction& a, const OrbitFunction& b) {
  if (a.k != b.k || a.n != b.n) throw InvalidArgument("orbit functions of different degree");
  OrbitFunction c = a;
  for (auto& [key, v] : c.values)
    if (!b.values.count(key)) v += b.fallback;
  for (const auto& [key, v] : b.values) {
    auto it = c.values.find(key);
    if (it == c.values.end())
      c.values[key] = a.fallback + v;
    else
      it->second += v;
  }
  c.fallback = a.fallback + b.fallback;
  return c;
}

OrbitFunction constant_orbit_function(const Fq& F, int n, int k, const Rational& c) {
  OrbitFunction f;
  f.field = &F;
  f.n = n;
  f.k = k;
  f.fallback = c;
  return f;
}

Cochain orbit_pullback(const OrbitFunction& f, CellSetPtr cells) {
  Cochain h = Cochain::zero(cells);
  for (int i = 0; i < cells->size(); ++i) h.values[i] = f.at(cells->cells[i]);
  return h;
}

InvariantHarmonic gamma_invariant_harmonic(const Fq& F, int r, const HarmonicConfig& cfg) {
  InvariantHarmonic out;
  out.r = r;
  WindowPtr w = Window::make(F, 1, r, cfg.limits);
  CellSetPtr cs = CellSet::make(w, 1, cfg.limits);
  std::map<Key, int> cls;
  std::vector<Key> keys(cs->size());
  for (int i = 0; i < cs->size(); ++i) {
    keys[i] = cell_orbit_key(cs->cells[i]);
    cls.emplace(keys[i], 0);
  }
  int nv = 0;
  for (auto& [key, id] : cls) id = nv++;
  out.orbit_classes = cls.size();
  RowReducer red(nv);
  auto add = [&](std::map<int, Rational> acc) {
    SparseVec row;
    for (auto& [c, v] : acc)
      if (v != 0) row.emplace_back(c, v);
    if (row.empty()) return;
    ++out.constraints;
    red.add(row);
  };
  // HC1.
  for (int i = 0; i < cs->size(); ++i) {
    std::map<int, Rational> acc;
    acc[cls[keys[i]]] += 1;
    acc[cls[cell_orbit_key(rotate(cs->cells[i]))]] += 1;
    add(std::move(acc));
  }
  // HC2 at every vertex whose star lies in the window.
  for (const auto& v : w->vertices)
    for (const auto& t : cell_types(1, 1)) {
      auto star = enum_b_eta_t(vertex_cell(v), t, cfg.hc2);
      std::map<int, Rational> acc;
      bool inside = true;
      for (const auto& c : star) {
        const int j = cs->find(c.key);
        if (j < 0) {
          inside = false;
          break;
        }
        acc[cls[keys[j]]] += 1;
      }
      if (inside && !star.empty()) add(std::move(acc));
    }
  for (const auto& x : red.nullspace()) {
    OrbitFunction f;
    f.field = &F;
    f.n = 1;
    f.k = 1;
    for (const auto& [key, id] : cls)
      if (x[id] != 0) f.values[key] = x[id];
    out.basis.push_back(std::move(f));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Unipotent period

Rational unipotent_average(const OrbitFunction& f, const MatK& g, int depth) {
  const Fq& F = *f.field;
  if (f.n != 1) throw InvalidArgument("unipotent periods are implemented for GL_2 only");
  long long count = 1;
  for (int i = 0; i < depth; ++i) {
    count *= F.q();
    if (count > 50'000'000) throw ResourceLimit("depth too large");
  }
  PointedCell base = standard_cell(F, 1, j_k(1, f.k));
  std::vector<Rational> vals(count);
#pragma omp parallel for schedule(dynamic, 16)
  for (long long x = 0; x < count; ++x) {
    std::vector<FqElem> c(depth);
    long long y = x;
    for (int i = 0; i < depth; ++i) {
      c[i] = FqElem{static_cast<std::uint8_t>(y % F.q())};
      y /= F.q();
    }
    MatK u = MatK::identity(F, 2);
    if (depth > 0) u(0, 1) = Series::from_coeffs(F, 1, c);
    vals[x] = f.at(act(u * g, base));
  }
  Rational sum = 0;
  for (const auto& v : vals) sum += v;
  return sum / Rational(static_cast<long>(count));
}

int distance_from_base(const Vertex& v) {
  const MatK& b = v.basis;
  return det_val(b) - adjugate(b).min_val() - b.min_val();
}

int required_depth(const MatK& g, int k) {
  const Fq& F = g.field();
  int d = 0;
  for (const auto& v : cell_vertices(act(g, standard_cell(F, 1, j_k(1, k))))) d = std::max(d, distance_from_base(*v));
  return std::max(0, d - 1);
}

CuspSum cusp_sum_gl2(const OrbitFunction& f, const MatK& g, int depth) {
  CuspSum s;
  s.depth = depth;
  s.required_depth = required_depth(g, f.k);
  if (depth < s.required_depth)
    throw DepthInsufficient("depth " + std::to_string(depth) + " below the certified depth " +
                            std::to_string(s.required_depth));
  s.value = unipotent_average(f, g, depth);
  s.next_value = unipotent_average(f, g, depth + 1);
  if (s.value != s.next_value)
    throw DepthInsufficient("unipotent sum changes between depth " + std::to_string(depth) + " and " +
                            std::to_string(depth + 1));
  return s;
}

}  // namespace bt
