#include <gtest/gtest.h>

#include <random>

#include "btharm/errors.hpp"
#include "btharm/fqmat.hpp"
#include "btharm/matrices.hpp"

namespace bt {
namespace {

FqMat random_fq(const Fq& F, int r, int c, std::mt19937_64& rng) {
  FqMat m(r, c);
  for (auto& x : m.a) x = {static_cast<std::uint8_t>(rng() % F.q())};
  return m;
}

TEST(FqMatTest, GaussianBinomials) {
  EXPECT_EQ(gaussian_binomial(2, 3, 1), 7);
  EXPECT_EQ(gaussian_binomial(3, 3, 1), 13);
  EXPECT_EQ(gaussian_binomial(2, 4, 2), 35);
  EXPECT_EQ(gaussian_binomial(3, 4, 2), 130);
  EXPECT_EQ(gaussian_binomial(2, 5, 0), 1);
  EXPECT_EQ(gaussian_binomial(2, 2, 3), 0);
}

TEST(FqMatTest, SubspaceCountsMatchGaussianBinomials) {
  for (int q : {2, 3, 4}) {
    const Fq& F = Fq::of_order(q);
    for (int N = 1; N <= 4; ++N)
      for (int d = 0; d <= N; ++d) {
        if (q == 4 && N == 4) continue;
        auto subs = fq_subspaces(F, N, d);
        EXPECT_EQ(static_cast<long long>(subs.size()), gaussian_binomial(q, N, d));
        for (const auto& s : subs) {
          EXPECT_EQ(s.rows, d);
          EXPECT_EQ(fq_rref(F, s), s);
        }
      }
  }
}

TEST(FqMatTest, IntermediateSubspaces) {
  const Fq& F = Fq::get(3);
  FqMat big = FqMat::identity(4);
  auto lines = fq_subspaces(F, 4, 1);
  for (int d = 1; d <= 4; ++d) {
    auto ws = fq_intermediate(F, big, lines[5], d);
    EXPECT_EQ(static_cast<long long>(ws.size()), gaussian_binomial(3, 3, d - 1));
    for (const auto& w : ws) EXPECT_TRUE(fq_contains(F, w, lines[5]));
  }
}

TEST(FqMatTest, InverseAndDeterminant) {
  std::mt19937_64 rng(3);
  for (int q : {2, 3, 5, 9}) {
    const Fq& F = Fq::of_order(q);
    for (int t = 0; t < 30; ++t) {
      FqMat g = random_gl_fq(F, 4, rng);
      EXPECT_EQ(fq_rank(F, g), 4);
      EXPECT_NE(fq_det(F, g), F.zero());
      EXPECT_EQ(fq_mul(F, g, fq_inverse(F, g)), FqMat::identity(4));
      FqMat h = random_gl_fq(F, 4, rng);
      EXPECT_EQ(fq_det(F, fq_mul(F, g, h)), F.mul(fq_det(F, g), fq_det(F, h)));
    }
  }
  FqMat z(2, 2);
  EXPECT_THROW(fq_inverse(Fq::get(2), z), Singular);
  EXPECT_EQ(fq_det(Fq::get(2), z), Fq::get(2).zero());
}

TEST(FqMatTest, RankOfProducts) {
  std::mt19937_64 rng(4);
  const Fq& F = Fq::get(2);
  for (int t = 0; t < 50; ++t) {
    FqMat a = random_fq(F, 4, 2, rng), b = random_fq(F, 2, 5, rng);
    int r = fq_rank(F, fq_mul(F, a, b));
    EXPECT_LE(r, std::min(fq_rank(F, a), fq_rank(F, b)));
    EXPECT_EQ(fq_rank(F, fq_transpose(a)), fq_rank(F, a));
    FqMat s = fq_stack(a, a);
    EXPECT_EQ(fq_rank(F, fq_transpose(s)), fq_rank(F, a));
  }
}

}  // namespace
}  // namespace bt
