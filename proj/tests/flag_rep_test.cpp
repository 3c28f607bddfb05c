#include <gtest/gtest.h>

#include <random>
#include <set>

#include "btharm/flag_rep.hpp"

namespace bt {
namespace {

long long count_flags(long long q, int N, const std::vector<int>& dims) {
  // |GL_N(q)/P| as a product of Gaussian binomials along the jumps.
  long long total = 1;
  int prev = 0;
  for (int d : dims) {
    total *= gaussian_binomial(q, N - prev, d - prev);
    prev = d;
  }
  return total;
}

TEST(FlagSpaceTest, SizesMatchFlagCounts) {
  for (int q : {2, 3}) {
    const Fq& F = Fq::get(q);
    for (int n = 1; n <= 2; ++n)
      for (unsigned J = 0; J < (1u << n); ++J) {
        auto S = FlagSpace::get(F, n, J, 1);
        EXPECT_EQ(S->size(), count_flags(q, n + 1, complement_indices(n, J)));
      }
  }
  // Level 2 multiplies by q^{dim G/P}.
  auto S2 = FlagSpace::get(Fq::get(2), 1, 0, 2);
  EXPECT_EQ(S2->size(), 3 * 2);
}

TEST(FlagSpaceTest, LiftsReproducePoints) {
  const Fq& F = Fq::get(3);
  auto S = FlagSpace::get(F, 2, 0, 1);
  for (int i = 0; i < S->size(); ++i) EXPECT_EQ(S->point_of(S->lift(i)).key, S->point(i).key);
  auto S2 = FlagSpace::get(Fq::get(2), 2, j_k(2, 1), 2);
  for (int i = 0; i < S2->size(); ++i) EXPECT_EQ(S2->point_of(S2->lift(i)).key, S2->point(i).key);
}

TEST(ParahoricTest, Examples) {
  const Fq& F = Fq::get(2);
  EXPECT_TRUE(parahoric_member(MatK::identity(F, 2), 0, true));
  EXPECT_TRUE(parahoric_member(MatK::identity(F, 3), subset_mask({2}), false));
  MatK s1 = simple_reflection(F, 1, 1);
  EXPECT_FALSE(parahoric_member(s1, 0, true));
  EXPECT_TRUE(parahoric_member(s1, subset_mask({1}), true));
  MatK d = MatK::diag_pi(F, {1, 0});
  for (unsigned I : {0u, 1u}) {
    EXPECT_FALSE(parahoric_member(d, I, false));
    // Oracle: no scalar pi^s with s in [-3, 3] normalizes d into B_I^o.
    for (int s = -3; s <= 3; ++s) EXPECT_FALSE(parahoric_member(d.shifted(s), I, true));
  }
  EXPECT_TRUE(parahoric_member(MatK::identity(F, 2).shifted(-4), 0, false));
}

TEST(ProductSetTest, DegenerateCases) {
  for (int q : {2, 3}) {
    const Fq& F = Fq::get(q);
    for (int n = 1; n <= 2; ++n) {
      auto ps = product_set(F, n, 0, CiMode::General);  // k = n
      EXPECT_EQ(ps.points, std::vector<int>{0});
      auto p0 = product_set(F, n, j_k(n, 0), CiMode::General);  // k = 0
      EXPECT_EQ(p0.points, std::vector<int>{0});
      EXPECT_EQ(p0.space->size(), 1);
    }
  }
}

TEST(ProductSetTest, ClosureMatchesDirectTripleProduct) {
  const Fq& F = Fq::get(2);
  const int n = 2;
  for (unsigned I : {subset_mask({1}), subset_mask({2})}) {
    auto ps = product_set(F, n, I, CiMode::General);
    // Independent oracle: enumerate every group element of each factor and apply all products.
    std::vector<std::vector<FqMat>> groups;
    for (unsigned L : ps.factors) groups.push_back(group_closure(F, parabolic_generators(F, n, L)));
    const FlagSpace& S = *ps.space;
    ResRing R(F, 1);
    std::set<int> direct;
    std::vector<FqMat> prods{FqMat::identity(n + 1)};
    for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
      std::set<FqMat> next;
      for (const auto& p : *it)
        for (const auto& x : prods) next.insert(fq_mul(F, p, x));
      prods.assign(next.begin(), next.end());
    }
    for (const auto& g : prods) {
      ResidueMat r(R, n + 1, n + 1);
      for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) r(i, j) = R.from_fq(g(i, j));
      direct.insert(S.find(S.point_of(r).key));
    }
    EXPECT_EQ(std::vector<int>(direct.begin(), direct.end()), ps.points);
    for (std::size_t t = 0; t < ps.points.size(); ++t) {
      ResidueMat r(R, n + 1, n + 1);
      for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) r(i, j) = R.from_fq(ps.lifts[t](i, j));
      EXPECT_EQ(S.point_of(r).key, S.point(ps.points[t]).key);
    }
  }
  // I = {2}: the planes containing e_1.
  EXPECT_EQ(product_set(F, n, subset_mask({2})).points.size(), 3u);
  EXPECT_EQ(product_set(F, n, subset_mask({1})).points.size(), 1u);
}

TEST(ProductSetTest, DisplayedFactorsAgreeForSmallK) {
  const Fq& F = Fq::get(2);
  for (unsigned I = 0; I < 8; ++I) {
    auto a = product_set(F, 3, I, CiMode::General);
    auto b = product_set(F, 3, I, CiMode::Displayed);
    if (a.k <= 2) EXPECT_EQ(a.points, b.points);
  }
}

TEST(ChiTest, DecompositionOfChiC) {
  for (int q : {2, 3}) {
    const Fq& F = Fq::get(q);
    for (int n = 1; n <= 2; ++n)
      for (unsigned I = 0; I < (1u << n); ++I) {
        auto ps = product_set(F, n, I);
        EXPECT_EQ(chi_C(ps).values, chi_C_decomposed(ps).values);
      }
    EXPECT_EQ(chi_C(product_set(F, 2, 0)).values, chi_B(F, 2, 2).values);
  }
}

TEST(ActionTest, IdentityPermutationAndLaw) {
  std::mt19937_64 rng(17);
  const Fq& F = Fq::get(2);
  const int n = 1;
  auto S = FlagSpace::get(F, n, 0, 1);
  LevelFunction f = LevelFunction::zero(S);
  for (int i = 0; i < S->size(); ++i) f.values[i] = i * i + 1;
  EXPECT_EQ(act_on_function(MatK::identity(F, 2), f).values, f.values);
  for (int t = 0; t < 20; ++t) {
    MatK u = random_integral(F, 2, rng);
    auto r = act_on_function(u, f);
    auto a = r.values, b = f.values;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
  }
  for (int t = 0; t < 15; ++t) {
    MatK g = random_laurent(F, 2, rng, -1, 1);
    MatK h = random_laurent(F, 2, rng, -1, 1);
    LevelFunction lhs = act_on_function(g, act_on_function(h, f));
    LevelFunction rhs = act_on_function(g * h, f);
    int m = std::max(lhs.level(), rhs.level());
    EXPECT_EQ(embed_level(lhs, m).values, embed_level(rhs, m).values);
  }
}

TEST(SpecialTest, SteinbergDimensions) {
  EXPECT_EQ(steinberg_dim(Fq::get(2), 1, 0), 1);
  EXPECT_EQ(steinberg_dim(Fq::get(2), 1, 1), 2);
  EXPECT_EQ(steinberg_dim(Fq::get(3), 1, 1), 3);
  EXPECT_EQ(steinberg_dim(Fq::get(2), 2, 2), 8);
  EXPECT_EQ(steinberg_dim(Fq::get(3), 2, 2), 27);
  for (int q : {2, 3})
    for (int k = 0; k <= 2; ++k)
      EXPECT_EQ(steinberg_dim(Fq::get(q), 2, k), steinberg_dim_bareiss(Fq::get(q), 2, k));
  // k = 1, n = 2: functions on P^2(F_q) modulo constants.
  EXPECT_EQ(steinberg_dim(Fq::get(2), 2, 1), 6);
}

TEST(SpecialTest, DegenerateBasis) {
  const Fq& F = Fq::get(2);
  EXPECT_TRUE(degenerate_basis(F, 1, 0, 1).empty());
  auto b = degenerate_basis(F, 1, 1, 1);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].values, std::vector<Rational>(3, Rational(1)));
  // Fibre indicators for j are invariant under the generators of P_{J_k + {j}}.
  const int n = 2;
  for (int k = 1; k <= 2; ++k)
    for (int j = n - k + 1; j <= n; ++j) {
      unsigned big = j_k(n, k) | (1u << (j - 1));
      auto basis = degenerate_basis(F, n, k, 1);
      auto gens = parabolic_generators(F, n, big);
      // The fibre indicators for this j form a union; its span is stable under P_big.
      RowReducer red(basis[0].space->size());
      for (auto& f : basis) red.add(to_sparse(f.values));
      for (auto& f : basis)
        for (auto& g : gens)
          EXPECT_TRUE(red.in_span(to_sparse(act_on_function(MatK::from_fq(F, g), f).values)));
    }
}

TEST(SpecialTest, SpEqual) {
  const Fq& F = Fq::get(2);
  LevelFunction f = chi_B(F, 1, 1);
  LevelFunction ones = LevelFunction::zero(f.space);
  for (auto& v : ones.values) v = 1;
  EXPECT_TRUE(sp_equal(f, f + ones, 1));
  EXPECT_TRUE(sp_equal(f, f, 1));
  LevelFunction cb = chi_B(F, 2, 2);
  EXPECT_FALSE(sp_equal(cb, cb.scaled(2), 2));
  // Compatible with the action of an integral element.
  std::mt19937_64 rng(2);
  MatK u = random_integral(F, 2, rng);
  EXPECT_TRUE(sp_equal(act_on_function(u, f), act_on_function(u, f + ones), 1));
}

TEST(SpecialTest, ChiBTranslatesSpan) {
  for (int q : {2, 3}) {
    const Fq& F = Fq::get(q);
    for (int n = 1; n <= 2; ++n)
      for (int k = 0; k <= n; ++k)
        EXPECT_EQ(chi_b_translate_rank(F, n, k), FlagSpace::get(F, n, j_k(n, k), 1)->size());
  }
}

}  // namespace
}  // namespace bt
