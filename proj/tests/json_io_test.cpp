#include <gtest/gtest.h>

#include "btharm/errors.hpp"
#include "btharm/json_io.hpp"

namespace bt {
namespace {

TEST(JsonTest, Rationals) {
  EXPECT_EQ(rational_string(Rational(-3, 6)), "-1/2");
  EXPECT_EQ(rational_string(Rational(4)), "4");
  EXPECT_EQ(rational_from_json(Json("6/4")), Rational(3, 2));
  EXPECT_EQ(rational_from_json(Json(-7)), -7);
  EXPECT_THROW(rational_from_json(Json("x")), InvalidArgument);
  EXPECT_THROW(rational_from_json(Json("1/0")), InvalidArgument);
  EXPECT_THROW(rational_from_json(Json(1.5)), InvalidArgument);
}

TEST(JsonTest, KeysRoundTrip) {
  const Fq& F = Fq::get(3);
  for (const auto& c : cells_in_ball(ball(F, 2, 1), 2)) EXPECT_EQ(key_from_string(key_string(c.key)), c.key);
  EXPECT_TRUE(key_from_string("").empty());
  EXPECT_EQ(key_from_string("-1,2"), (Key{-1, 2}));
  EXPECT_THROW(key_from_string("1;2"), InvalidArgument);
  EXPECT_THROW(key_from_string("1,"), InvalidArgument);
}

TEST(JsonTest, CochainRoundTrip) {
  auto sol = solve_harmonic(Fq::get(2), 2, 1, 1);
  ASSERT_FALSE(sol.basis.empty());
  const Cochain& h = sol.basis.back();
  Json j = cochain_json(h);
  Cochain back = cochain_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back.values, h.values);
  EXPECT_TRUE(hc_report_json(check_all(back))["pass"].get<bool>());
  j["values"]["9,9,9"] = "1";
  EXPECT_THROW(cochain_from_json(j), OutOfWindow);
  EXPECT_THROW(cochain_from_json(Json{{"p", 2}}), InvalidArgument);
}

TEST(JsonTest, ReportsAndErrors) {
  RoundtripReport r;
  r.checked = 2;
  r.passed = 1;
  r.failures.push_back("x");
  Json j = roundtrip_report_json(r);
  EXPECT_FALSE(j["pass"].get<bool>());
  EXPECT_EQ(j["failures"].size(), 1u);
  Json e = error_json(OutOfWindow("far"));
  EXPECT_EQ(e["error"], "OutOfWindow");
  EXPECT_EQ(e["message"], "far");
  EXPECT_EQ(census_json({{{1, 0}, 3}})[0]["count"], 3);
  CuspSum c{Rational(1, 2), Rational(1, 2), 3, 3};
  EXPECT_EQ(cusp_sum_json(c)["value"], "1/2");
}

}  // namespace
}  // namespace bt
