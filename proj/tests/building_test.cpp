#include <gtest/gtest.h>

#include <random>
#include <set>

#include "btharm/building.hpp"

namespace bt {
namespace {

Series poly(const Fq& F, int val, std::initializer_list<int> c) {
  std::vector<FqElem> v;
  for (int x : c) v.push_back(F.from_int(x));
  return Series::from_coeffs(F, val, v);
}

/// Random product of elementary matrices over F_q[pi] with unit diagonal: an element of G(O).
MatK random_unimodular(const Fq& F, int N, std::mt19937_64& rng) {
  MatK u = MatK::identity(F, N);
  std::uniform_int_distribution<int> pos(0, N - 1), coef(0, F.q() - 1), deg(0, 3);
  for (int t = 0; t < 3 * N; ++t) {
    int i = pos(rng), j = pos(rng);
    if (i == j) continue;
    MatK e = MatK::identity(F, N);
    e(i, j) = Series::monomial(F, FqElem{static_cast<std::uint8_t>(coef(rng))}, deg(rng));
    u = u * e;
  }
  return u;
}

PointedCell random_cell(const Fq& F, int n, int k, std::mt19937_64& rng) {
  MatK g = random_laurent(F, n + 1, rng, -1, 1);
  std::vector<int> dims;
  std::vector<int> pool;
  for (int d = 1; d <= n; ++d) pool.push_back(d);
  std::shuffle(pool.begin(), pool.end(), rng);
  std::vector<int> pick(pool.begin(), pool.begin() + k);
  std::sort(pick.begin(), pick.end());
  unsigned I = 0;
  for (int i = 1; i <= n; ++i)
    if (std::find(pick.begin(), pick.end(), i) == pick.end()) I |= 1u << (i - 1);
  return act(g, standard_cell(F, n, I));
}

TEST(VertexTest, StandardAndHomothety) {
  const Fq& F = Fq::get(2);
  auto v0 = vertex_from_matrix(MatK::identity(F, 3));
  EXPECT_EQ(v0->a, (std::vector<int>{0, 0, 0}));
  auto a = vertex_from_matrix(MatK::diag_pi(F, {2, 1}));
  auto b = vertex_from_matrix(MatK::diag_pi(F, {1, 0}));
  EXPECT_EQ(a->key, b->key);
  EXPECT_EQ(b->a, (std::vector<int>{1, 0}));
}

TEST(VertexTest, RepresentativeIndependence) {
  std::mt19937_64 rng(11);
  for (int q : {2, 3}) {
    const Fq& F = Fq::get(q);
    for (int N : {2, 3, 4}) {
      for (int t = 0; t < 25; ++t) {
        MatK g = random_laurent(F, N, rng);
        auto v = vertex_from_matrix(g);
        for (int s = 0; s < 4; ++s) {
          MatK u = random_unimodular(F, N, rng);
          EXPECT_EQ(vertex_from_matrix(u * g)->key, v->key);
        }
        EXPECT_EQ(vertex_from_matrix(g.shifted(3))->key, v->key);
        int mn = *std::min_element(v->a.begin(), v->a.end());
        EXPECT_EQ(mn, 0);
        // The canonical basis spans the same class.
        EXPECT_EQ(vertex_from_matrix(v->basis)->key, v->key);
      }
    }
  }
}

TEST(VertexTest, HowellCase) {
  // span((pi, 1), (0, pi^2)): the first row alone produces (0, pi) after scaling.
  const Fq& F = Fq::get(2);
  MatK g(F, 2, 2);
  g(0, 0) = Series::pi_power(F, 1);
  g(0, 1) = Series::one(F);
  g(1, 1) = Series::pi_power(F, 2);
  auto v = vertex_from_matrix(g);
  EXPECT_EQ(v->a, (std::vector<int>{0, 1}));
  EXPECT_EQ(vertex_from_matrix(v->basis)->key, v->key);
}

TEST(CellTest, TypesOfStandardCells) {
  const Fq& F = Fq::get(2);
  EXPECT_EQ(pointed_type(standard_cell(F, 2, 0)), (CellType{1, 1, 1}));
  EXPECT_EQ(pointed_type(standard_cell(F, 2, subset_mask({1}))), (CellType{2, 1}));
  EXPECT_EQ(pointed_type(standard_cell(F, 2, subset_mask({1, 2}))), (CellType{3}));
  EXPECT_EQ(standard_cell(F, 3, subset_mask({1, 2, 3})).k(), 0);
}

TEST(CellTest, ActionLawAndHomothety) {
  std::mt19937_64 rng(5);
  const Fq& F = Fq::get(3);
  for (int t = 0; t < 60; ++t) {
    int n = 1 + t % 3;
    PointedCell c = random_cell(F, n, 1 + t % n, rng);
    MatK g = random_laurent(F, n + 1, rng);
    MatK h = random_laurent(F, n + 1, rng);
    EXPECT_EQ(act(MatK::identity(F, n + 1), c).key, c.key);
    EXPECT_EQ(act(g * h, c).key, act(g, act(h, c)).key);
    MatK lam = MatK::identity(F, n + 1).scaled(poly(F, -2, {1, 2, 1}));
    EXPECT_EQ(act(lam, c).key, c.key);
    EXPECT_EQ(pointed_type(act(g, c)), pointed_type(c));
    EXPECT_TRUE(chain_condition_holds(act(g, c)));
  }
}

TEST(CellTest, RotateAndFaces) {
  std::mt19937_64 rng(9);
  const Fq& F = Fq::get(2);
  for (int t = 0; t < 60; ++t) {
    int n = 1 + t % 3;
    int k = 1 + t % n;
    PointedCell c = random_cell(F, n, k, rng);
    CellType ty = pointed_type(c);
    PointedCell r = rotate(c);
    CellType shifted(ty.begin() + 1, ty.end());
    shifted.push_back(ty.front());
    EXPECT_EQ(pointed_type(r), shifted);
    PointedCell it = c;
    for (int s = 0; s <= k; ++s) it = rotate(it);
    EXPECT_EQ(it.key, c.key);
    auto fs = faces(c);
    ASSERT_EQ(static_cast<int>(fs.size()), k + 1);
    auto verts = cell_vertices(c);
    for (int j = 0; j <= k; ++j) {
      // Merge rule on types, indices mod k+2 of the pointed chain.
      CellType expect;
      if (j == 0) {
        // Pointed at v_1: (d_2, ..., d_k, d_{k+1} + d_1).
        expect.assign(ty.begin() + 1, ty.end());
        expect.back() += ty[0];
      } else {
        expect = ty;
        expect[j - 1] += expect[j];
        expect.erase(expect.begin() + j);
      }
      EXPECT_EQ(pointed_type(fs[j]), expect) << "j=" << j;
      auto fv = cell_vertices(fs[j]);
      std::vector<Key> expect_v;
      for (int t2 = 0; t2 <= k; ++t2)
        if (t2 != j) expect_v.push_back(verts[t2]->key);
      std::vector<Key> got;
      for (auto& v : fv) got.push_back(v->key);
      EXPECT_EQ(got, expect_v);
    }
    MatK g = random_laurent(F, n + 1, rng);
    auto gf = faces(act(g, c));
    for (int j = 0; j <= k; ++j) EXPECT_EQ(gf[j].key, act(g, fs[j]).key);
  }
}

TEST(CellTest, EdgeFacesAreVertices) {
  const Fq& F = Fq::get(2);
  PointedCell e = standard_cell(F, 1, 0);
  auto fs = faces(e);
  auto vs = cell_vertices(e);
  EXPECT_EQ(fs[0].key, vertex_cell(vs[1]).key);
  EXPECT_EQ(fs[1].key, vertex_cell(vs[0]).key);
}

TEST(WijTest, SmallCasesByHand) {
  const Fq& F = Fq::get(2);
  auto p0 = wij_pair(F, 2, 0);
  // y_0 = diag(pi, pi, pi) is a scalar, so it acts as the identity.
  EXPECT_EQ(p0.y, MatK::diag_pi(F, {1, 1, 1}));
  EXPECT_EQ(p0.w, MatK::identity(F, 3));
  PointedCell ch = standard_cell(F, 2, 0);
  EXPECT_EQ(act(p0.y * p0.w, ch).key, ch.key);
  auto p = wij_pair(F, 1, 1);
  EXPECT_EQ(p.y, MatK::diag_pi(F, {0, 1}));
  EXPECT_EQ(p.w, simple_reflection(F, 1, 1));
  EXPECT_EQ(det_val(p.y), 1);
}

TEST(WijTest, ChamberImagesForAllIndices) {
  for (int q : {2, 3}) {
    const Fq& F = Fq::get(q);
    for (int n = 1; n <= 4; ++n) {
      PointedCell chamber = standard_cell(F, n, 0);
      for (int i = 0; i <= n; ++i) {
        auto [y, w] = wij_pair(F, n, i);
        EXPECT_EQ(det_val(y), n + 1 - i);
        // (sigma_empty, v_i) as the chain Lambda_i > ... > Lambda_n > pi Lambda_0 > ... > pi Lambda_{i-1}.
        std::vector<MatK> chain;
        for (int l = i; l <= n; ++l) chain.push_back(standard_vertex(F, n, l)->basis);
        for (int l = 0; l < i; ++l) chain.push_back(standard_vertex(F, n, l)->basis.shifted(1));
        EXPECT_EQ(act(y * w, chamber).key, make_cell(chain).key) << "n=" << n << " i=" << i;
      }
    }
  }
}

TEST(NeighbourTest, CsjCounts) {
  const Fq& F = Fq::get(2);
  PointedCell c = standard_cell(F, 2, subset_mask({1}));  // type (2,1)
  auto s0 = enum_csj(c, 0);
  EXPECT_EQ(s0.size(), 3u);
  auto s1 = enum_csj(c, 1);
  ASSERT_EQ(s1.size(), 1u);
  EXPECT_EQ(s1[0].key, c.key);
  for (auto& x : s0) {
    EXPECT_EQ(pointed_type(x), (CellType{1, 2}));
    // Every slot other than 0 is shared.
    EXPECT_EQ(vertex_from_matrix(chain_basis(x, 1))->key, vertex_from_matrix(chain_basis(c, 1))->key);
  }
}

TEST(NeighbourTest, TreeValence) {
  for (int q : {2, 3}) {
    const Fq& F = Fq::get(q);
    PointedCell v = vertex_cell(standard_vertex(F, 1, 0));
    EXPECT_EQ(enum_b_eta_t(v, {1, 1}).size(), static_cast<std::size_t>(q + 1));
    EXPECT_TRUE(enum_b_eta_t(v, {2, 1}).empty());
    EXPECT_EQ(ball(F, 1, 1).size(), static_cast<std::size_t>(q + 2));
  }
}

TEST(NeighbourTest, GaussianBinomialStars) {
  const Fq& F = Fq::get(2);
  PointedCell eta = standard_cell(F, 3, subset_mask({1, 3}));  // type (2, 2)
  EXPECT_EQ(enum_b_eta_t(eta, {1, 1, 2}).size(), static_cast<std::size_t>(gaussian_binomial(2, 2, 1)));
  PointedCell v = vertex_cell(standard_vertex(F, 3, 0));
  EXPECT_EQ(enum_b_eta_t(v, {2, 2}).size(), static_cast<std::size_t>(gaussian_binomial(2, 4, 2)));
  EXPECT_EQ(enum_b_eta_t(v, {1, 3}).size(), static_cast<std::size_t>(gaussian_binomial(2, 4, 1)));
}

TEST(BallTest, SerialAndParallelAgree) {
  const Fq& F = Fq::get(2);
  auto a = ball(F, 2, 1);
  auto b = ball_serial(F, 2, 1);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(a.size(), 15u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i]->key, b[i]->key);
  auto ca = cells_in_ball(a, 1);
  auto cb = cells_in_ball_serial(b, 1);
  ASSERT_EQ(ca.size(), cb.size());
  for (std::size_t i = 0; i < ca.size(); ++i) EXPECT_EQ(ca[i].key, cb[i].key);
  for (auto& c : ca) EXPECT_TRUE(chain_condition_holds(c));
  EXPECT_EQ(ball(F, 2, 0).size(), 1u);
}

TEST(TransitivityTest, TransporterMapsCells) {
  std::mt19937_64 rng(3);
  const Fq& F = Fq::get(3);
  for (int t = 0; t < 30; ++t) {
    int n = 1 + t % 2;
    int k = 1 + t % n;
    PointedCell c1 = random_cell(F, n, k, rng);
    MatK g = random_laurent(F, n + 1, rng);
    PointedCell c2 = act(g, c1);
    MatK h = transporter(c1, c2);
    EXPECT_EQ(act(h, c1).key, c2.key);
  }
}

}  // namespace
}  // namespace bt
