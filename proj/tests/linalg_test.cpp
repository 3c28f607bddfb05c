#include <gtest/gtest.h>

#include <random>

#include "btharm/linalg.hpp"

namespace bt {
namespace {

std::vector<std::vector<mpz_class>> random_int(int r, int c, int rank, std::mt19937_64& rng) {
  std::vector<std::vector<mpz_class>> a(r, std::vector<mpz_class>(rank)), b(rank, std::vector<mpz_class>(c));
  for (auto& row : a)
    for (auto& x : row) x = static_cast<long>(rng() % 7) - 3;
  for (auto& row : b)
    for (auto& x : row) x = static_cast<long>(rng() % 7) - 3;
  std::vector<std::vector<mpz_class>> m(r, std::vector<mpz_class>(c));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      for (int l = 0; l < rank; ++l) m[i][j] += a[i][l] * b[l][j];
  return m;
}

SparseVec row_of(const std::vector<mpz_class>& r) {
  std::vector<Rational> d(r.begin(), r.end());
  return to_sparse(d);
}

TEST(LinalgTest, RankMatchesBareiss) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    const int r = 1 + static_cast<int>(rng() % 8), c = 1 + static_cast<int>(rng() % 8);
    const int k = static_cast<int>(rng() % 6);
    auto m = random_int(r, c, k, rng);
    RowReducer red(c);
    for (const auto& row : m) red.add(row_of(row));
    EXPECT_EQ(red.rank(), rank_bareiss(m));
    EXPECT_LE(red.rank(), k);
  }
}

TEST(LinalgTest, NullspaceIsAnnihilatedAndComplete) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const int c = 2 + static_cast<int>(rng() % 7);
    auto m = random_int(5, c, static_cast<int>(rng() % 5), rng);
    RowReducer red(c);
    for (const auto& row : m) red.add(row_of(row));
    auto ns = red.nullspace();
    EXPECT_EQ(static_cast<int>(ns.size()), c - red.rank());
    for (const auto& x : ns)
      for (const auto& row : m) EXPECT_EQ(dot(row_of(row), x), 0);
    RowReducer basis(c);
    for (const auto& x : ns) basis.add(to_sparse(x));
    EXPECT_EQ(basis.rank(), static_cast<int>(ns.size()));
  }
}

TEST(LinalgTest, SpanMembership) {
  RowReducer red(3);
  EXPECT_TRUE(red.add({{0, 1}, {1, 2}}));
  EXPECT_TRUE(red.add({{1, 1}, {2, 1}}));
  EXPECT_FALSE(red.add({{0, 2}, {1, 6}, {2, 2}}));
  EXPECT_TRUE(red.in_span({{0, 1}, {1, 3}, {2, 1}}));
  EXPECT_FALSE(red.in_span({{2, 1}}));
  EXPECT_EQ(red.rank(), 2);
  EXPECT_EQ(red.pivot_cols(), (std::vector<int>{0, 1}));
  EXPECT_TRUE(red.reduce({}).empty());
}

TEST(LinalgTest, SparseConversion) {
  std::vector<Rational> d{0, Rational(1, 2), 0, -3};
  SparseVec s = to_sparse(d);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].first, 1);
  EXPECT_EQ(s[1].second, -3);
  EXPECT_EQ(dot(s, d), Rational(37, 4));
  EXPECT_EQ(rank_bareiss({}), 0);
  EXPECT_EQ(rank_bareiss({{0, 0}, {0, 0}}), 0);
}

}  // namespace
}  // namespace bt
