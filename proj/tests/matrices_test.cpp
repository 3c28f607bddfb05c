#include <gtest/gtest.h>

#include <random>

#include "btharm/errors.hpp"
#include "btharm/matrices.hpp"

namespace bt {
namespace {

bool upper_triangular(const MatK& b) {
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < i; ++j)
      if (!b(i, j).is_exact_zero()) return false;
  return true;
}

TEST(MatKTest, IdentityAndDiag) {
  const Fq& F = Fq::get(3);
  MatK d = MatK::diag_pi(F, {2, -1, 0});
  EXPECT_EQ(det_val(d), 1);
  EXPECT_EQ(d.min_val(), -1);
  EXPECT_FALSE(d.is_integral());
  EXPECT_EQ(d * MatK::diag_pi(F, {-2, 1, 0}), MatK::identity(F, 3));
  EXPECT_EQ(d.shifted(1), MatK::diag_pi(F, {3, 0, 1}));
  EXPECT_EQ(d.transpose(), d);
  EXPECT_EQ(MatK(F, 2, 2).min_val(), Series::kExact);
}

TEST(MatKTest, InverseAndAdjugate) {
  std::mt19937_64 rng(5);
  for (int q : {2, 3}) {
    const Fq& F = Fq::get(q);
    for (int n = 1; n <= 4; ++n)
      for (int t = 0; t < 10; ++t) {
        MatK g = random_laurent(F, n, rng, -1, 1);
        MatK a = adjugate(g);
        MatK dI = MatK::identity(F, n).scaled(det(g));
        EXPECT_EQ(g * a, dI);
        EXPECT_EQ(a * g, dI);
        MatK gi = mat_inv(g);
        EXPECT_TRUE(mat_agrees(g * gi, MatK::identity(F, n), 10));
      }
  }
  EXPECT_THROW(mat_inv(MatK(Fq::get(2), 2, 2)), Singular);
  EXPECT_THROW(det_val(MatK(Fq::get(2), 2, 2)), Singular);
}

TEST(MatKTest, DetValIsAdditive) {
  std::mt19937_64 rng(6);
  const Fq& F = Fq::get(2);
  for (int t = 0; t < 100; ++t) {
    MatK a = random_laurent(F, 3, rng), b = random_laurent(F, 3, rng);
    EXPECT_EQ(det_val(a * b), det_val(a) + det_val(b));
  }
}

TEST(MatKTest, RandomIntegralIsInGO) {
  std::mt19937_64 rng(7);
  for (int q : {2, 3, 4}) {
    const Fq& F = Fq::of_order(q);
    for (int t = 0; t < 30; ++t) {
      MatK k = random_integral(F, 3, rng);
      EXPECT_TRUE(k.is_integral());
      EXPECT_EQ(det_val(k), 0);
      EXPECT_TRUE(reduce_mod(k, 1).is_invertible());
    }
  }
}

TEST(IwasawaTest, ContractOnRandomMatrices) {
  std::mt19937_64 rng(8);
  int count = 0;
  for (int q : {2, 3}) {
    const Fq& F = Fq::get(q);
    for (int n = 1; n <= 4; ++n)
      for (int t = 0; t < 63; ++t, ++count) {
        MatK g = random_laurent(F, n, rng);
        Iwasawa w = iwasawa(g);
        EXPECT_TRUE(w.k.is_integral());
        EXPECT_EQ(det_val(w.k), 0);
        EXPECT_TRUE(upper_triangular(w.b));
        EXPECT_TRUE(mat_agrees(w.k * w.b, g, 8));
        EXPECT_EQ(det_val(w.b), det_val(g));
      }
  }
  EXPECT_GE(count, 500);
}

TEST(IwasawaTest, Errors) {
  const Fq& F = Fq::get(2);
  EXPECT_THROW(iwasawa(MatK(F, 2, 2)), Singular);
  MatK g = MatK::identity(F, 2);
  g(0, 0) = Series::zero_to(F, 3);
  g(1, 0) = Series::zero_to(F, 3);
  EXPECT_THROW(iwasawa(g), OutOfPrecision);
}

TEST(ResidueTest, RingArithmetic) {
  const Fq& F = Fq::get(3);
  ResRing R(F, 3);
  RElem a = R.from_series(Series::one(F) + Series::pi_power(F, 1));
  RElem ai = R.inv(a);
  EXPECT_EQ(R.mul(a, ai), R.one());
  RElem p = R.from_series(Series::pi_power(F, 1));
  EXPECT_EQ(R.val(p), 1);
  EXPECT_EQ(R.val(R.mul(p, R.mul(p, p))), 3);
  EXPECT_TRUE(R.is_zero(R.mul(p, R.mul(p, p))));
  EXPECT_THROW(R.inv(p), DivisionByZero);
  EXPECT_THROW(R.from_series(Series::pi_power(F, -1)), NonIntegral);
  EXPECT_EQ(R.add(a, R.neg(a)), R.zero());
}

TEST(ResidueTest, MatrixReductionAndLift) {
  std::mt19937_64 rng(9);
  const Fq& F = Fq::get(2);
  for (int t = 0; t < 20; ++t) {
    MatK a = random_integral(F, 3, rng), b = random_integral(F, 3, rng);
    ResidueMat ra = reduce_mod(a, 3), rb = reduce_mod(b, 3);
    EXPECT_EQ(ra * rb, reduce_mod(a * b, 3));
    EXPECT_EQ(ra * ra.inverse(), ResidueMat::identity(ra.ring(), 3));
    EXPECT_EQ(reduce_mod(ra.lift(), 3), ra);
    EXPECT_EQ(ra.transpose(), reduce_mod(a.transpose(), 3));
    EXPECT_EQ(ra.residue(), reduce_mod(a, 1).residue());
  }
  EXPECT_THROW(reduce_mod(MatK::diag_pi(F, {-1, 0}), 2), NonIntegral);
  EXPECT_FALSE(reduce_mod(MatK::diag_pi(F, {1, 0}), 2).is_invertible());
}

}  // namespace
}  // namespace bt
