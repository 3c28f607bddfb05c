#include <gtest/gtest.h>

#include <random>

#include "btharm/errors.hpp"
#include "btharm/harmonic.hpp"

namespace bt {
namespace {

long long binom(int a, int b) {
  long long r = 1;
  for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

TEST(CellTypesTest, CompositionCounts) {
  for (int n = 1; n <= 4; ++n)
    for (int k = 0; k <= n; ++k) {
      auto ts = cell_types(n, k);
      EXPECT_EQ(static_cast<long long>(ts.size()), binom(n, k));
      for (const auto& t : ts) {
        int s = 0;
        for (int d : t) s += d;
        EXPECT_EQ(s, n + 1);
      }
    }
}

TEST(CheckTest, ZeroCochainSatisfiesEverything) {
  const Fq& F = Fq::get(2);
  auto w = Window::make(F, 2, 1);
  for (int k = 0; k <= 2; ++k) {
    Cochain h = Cochain::zero(CellSet::make(w, k));
    auto rep = check_all(h);
    EXPECT_TRUE(rep.pass());
    EXPECT_GT(rep.checked[0], 0u);
  }
}

TEST(CheckTest, Hc3TrivialWhenStepIsOne) {
  const Fq& F = Fq::get(3);
  auto w = Window::make(F, 2, 1);
  auto cs = CellSet::make(w, 1);
  Cochain h = Cochain::zero(cs);
  std::mt19937_64 rng(5);
  for (auto& v : h.values) v = static_cast<int>(rng() % 7) - 3;
  for (const auto& c : cs->cells) {
    auto t = pointed_type(c);
    for (int j = 0; j <= 1; ++j)
      if (t[j] == 1) {
        EXPECT_EQ(enum_csj(c, j).size(), 1u);
        EXPECT_EQ(check_hc3(h, c, j).status, CheckStatus::Holds);
      }
  }
}

TEST(CheckTest, RandomCochainFailsWithWitness) {
  const Fq& F = Fq::get(2);
  auto cs = CellSet::make(Window::make(F, 1, 1), 1);
  Cochain h = Cochain::zero(cs);
  h.values[0] = 1;
  auto r = check_hc1(h, cs->cells[0]);
  EXPECT_EQ(r.status, CheckStatus::Fails);
  EXPECT_EQ(r.witness.size(), 2u);
  EXPECT_FALSE(check_all(h).pass());
}

TEST(CheckTest, BoundarySiteIsInconclusive) {
  const Fq& F = Fq::get(2);
  auto cs = CellSet::make(Window::make(F, 1, 1), 1);
  Cochain h = Cochain::zero(cs);
  // A vertex on the boundary: its star leaves the window.
  for (const auto& v : cs->window->vertices) {
    if (v->key == standard_vertex(F, 1, 0)->key) continue;
    auto r = check_hc2(h, vertex_cell(v), {1, 1}, Hc2Mode::PointedCompatible);
    EXPECT_EQ(r.status, CheckStatus::Inconclusive);
    EXPECT_FALSE(r.witness.empty());
    break;
  }
}

TEST(SolverTest, TreeEdgesAlternate) {
  const Fq& F = Fq::get(2);
  auto sol = solve_harmonic(F, 1, 1, 2);
  // 9 edges, one star relation at each of the 4 interior vertices.
  EXPECT_EQ(sol.unknowns, 9u);
  EXPECT_EQ(sol.rank, 4);
  ASSERT_EQ(sol.basis.size(), 5u);
  for (const auto& h : sol.basis) {
    EXPECT_FALSE(h.is_zero());
    for (const auto& c : sol.cells->cells) EXPECT_EQ(h.value(rotate(c)), -h.value(c));
    EXPECT_TRUE(check_all(h).pass());
  }
}

TEST(SolverTest, ChambersSatisfyStarSums) {
  const Fq& F = Fq::get(2);
  auto sol = solve_harmonic(F, 2, 2, 1);
  ASSERT_FALSE(sol.basis.empty());
  PointedCell v0 = vertex_cell(standard_vertex(F, 2, 0));
  auto w = sol.cells->window;
  auto etas = cells_in_ball(w->vertices, 1);
  for (const auto& h : sol.basis) {
    EXPECT_TRUE(check_all(h).pass());
    std::size_t interior = 0;
    for (const auto& eta : etas) {
      if (eta.base->key != v0.base->key) continue;
      for (const auto& t : cell_types(2, 2)) {
        auto r = check_hc2(h, eta, t, Hc2Mode::PointedCompatible);
        EXPECT_NE(r.status, CheckStatus::Fails);
        interior += (r.status == CheckStatus::Holds);
      }
    }
    EXPECT_GT(interior, 0u);
  }
}

TEST(SolverTest, DegenerateWindow) {
  const Fq& F = Fq::get(2);
  auto s0 = solve_harmonic(F, 2, 0, 0);
  EXPECT_EQ(s0.cells->size(), 1);
  EXPECT_EQ(s0.basis.size(), 1u);
  auto s2 = solve_harmonic(F, 2, 2, 0);
  EXPECT_EQ(s2.cells->size(), 0);
  EXPECT_TRUE(s2.basis.empty());
}

TEST(SolverTest, VerticesGiveConstants) {
  for (int n = 1; n <= 2; ++n) {
    auto sol = solve_harmonic(Fq::get(2), n, 0, 2);
    ASSERT_EQ(sol.basis.size(), 1u);
    const auto& h = sol.basis[0];
    for (const auto& v : h.values) EXPECT_EQ(v, h.values[0]);
  }
}

TEST(SolverTest, SerialMatchesParallel) {
  const Fq& F = Fq::get(2);
  for (int k = 1; k <= 2; ++k) {
    auto a = solve_harmonic(F, 2, k, 1);
    auto b = solve_harmonic_serial(F, 2, k, 1);
    ASSERT_EQ(a.basis.size(), b.basis.size());
    EXPECT_EQ(a.constraints, b.constraints);
    for (std::size_t i = 0; i < a.basis.size(); ++i) EXPECT_EQ(a.basis[i].values, b.basis[i].values);
  }
}

TEST(SolverTest, ModeSwitches) {
  const Fq& F = Fq::get(2);
  HarmonicConfig under;
  under.hc2 = Hc2Mode::UnderlyingFace;
  // For odd k the underlying-face star sum cancels under HC1.
  auto s = solve_harmonic(F, 1, 1, 2, under);
  EXPECT_EQ(s.basis.size(), s.unknowns);
  HarmonicConfig printed;
  printed.hc4 = Hc4Mode::Printed;
  EXPECT_TRUE(solve_harmonic(F, 1, 0, 2, printed).basis.empty());
}

TEST(PhiTest, TrivialCombinations) {
  const Fq& F = Fq::get(2);
  auto sol = solve_harmonic(F, 2, 1, 2);
  std::mt19937_64 rng(8);
  for (const auto& h : sol.basis) {
    EXPECT_EQ(phi_of_h(h, {{1, MatK::identity(F, 3)}}), h.value(standard_cell(F, 2, j_k(2, 1))));
    MatK g = random_integral(F, 3, rng);
    EXPECT_EQ(phi_of_h(h, {{1, g}, {-1, g}}), 0);
  }
  MatK far = MatK::diag_pi(F, {5, 0, 0});
  EXPECT_THROW(phi_of_h(sol.basis[0], {{1, far}}), OutOfWindow);
}

TEST(PhiTest, WellDefinedOnSpecialQuotient) {
  const Fq& F = Fq::get(2);
  for (auto [n, k] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {2, 2}}) {
    auto sol = solve_harmonic(F, n, k, 2);
    auto rep = phi_well_defined(sol, 20, 3);
    EXPECT_GT(rep.relations, 0u);
    EXPECT_TRUE(rep.pass());
  }
}

TEST(RoundtripTest, TrivialCases) {
  const Fq& F = Fq::get(2);
  auto top = solve_harmonic(F, 2, 2, 1);
  for (const auto& h : top.basis) EXPECT_TRUE(roundtrip_check(h, MatK::identity(F, 3), 0).pass);
  auto bottom = solve_harmonic(F, 2, 0, 1);
  for (const auto& h : bottom.basis) {
    auto r = roundtrip_check(h, MatK::identity(F, 3), 3u);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.lhs, h.value(vertex_cell(standard_vertex(F, 2, 0))));
  }
}

TEST(RoundtripTest, EdgesOfThePlane) {
  const Fq& F = Fq::get(2);
  auto sol = solve_harmonic(F, 2, 1, 2);
  ASSERT_FALSE(sol.basis.empty());
  const unsigned I = subset_mask({2});
  auto ps = product_set(F, 2, I);
  EXPECT_EQ(ps.lifts.size(), 3u);
  std::mt19937_64 rng(21);
  std::vector<MatK> gs{MatK::identity(F, 3)};
  for (int i = 0; i < 20; ++i) gs.push_back(random_integral(F, 3, rng));
  for (const auto& h : sol.basis)
    for (const auto& g : gs) EXPECT_TRUE(roundtrip_check(h, g, I, &ps).pass);
}

TEST(RoundtripTest, SuiteSerialMatchesParallel) {
  const Fq& F = Fq::get(2);
  auto sol = solve_harmonic(F, 2, 1, 1);
  auto a = roundtrip_suite(sol, 5, 9);
  auto b = roundtrip_suite_serial(sol, 5, 9);
  EXPECT_EQ(a.checked, b.checked);
  EXPECT_EQ(a.passed, b.passed);
  EXPECT_EQ(a.skipped, b.skipped);
  EXPECT_TRUE(a.pass());
  EXPECT_GT(a.checked, 0u);
}

TEST(RoundtripTest, TwoFactorProductsInRankFour) {
  // n = 3, k = 2: C_I is a product of two parahoric factors for I = {1}, {2}.
  const Fq& F = Fq::get(2);
  auto sol = solve_harmonic(F, 3, 2, 1);
  ASSERT_FALSE(sol.basis.empty());
  std::mt19937_64 rng(4);
  for (unsigned I : subsets_of_corank(3, 2)) {
    auto ps = product_set(F, 3, I);
    for (int s = 0; s < 5; ++s) {
      MatK g = random_integral(F, 4, rng);
      for (const auto& h : sol.basis) EXPECT_TRUE(roundtrip_check(h, g, I, &ps).pass);
    }
  }
}

}  // namespace
}  // namespace bt
