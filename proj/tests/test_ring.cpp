#include <doctest.h>

#include <numeric>
#include <set>

#include "padic/error.hpp"
#include "padic/random.hpp"
#include "padic/ring.hpp"

using namespace padic;

TEST_CASE("rational parsing is exact") {
  CHECK(Rational::parse("3/6") == Rational(1, 2));
  CHECK(Rational::parse("0.45") == Rational(9, 20));
  CHECK(Rational::parse("7") == Rational(7));
  CHECK(Rational::parse("-2/4") == Rational(-1, 2));
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(Rational(1, 3) < Rational(34, 100));
  CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
  CHECK(Rational(4, 8).to_string() == "1/2");
  CHECK(Rational(5).to_string() == "5");
  CHECK_THROWS_AS(Rational::parse("1/0"), RangeError);
  CHECK_THROWS_AS(Rational::parse("abc"), RangeError);
  CHECK_THROWS_AS(Rational::parse(""), RangeError);
  CHECK_THROWS_AS(Rational::parse("1/2x"), RangeError);
}

TEST_CASE("ring construction validates parameters") {
  CHECK_THROWS_AS(RingCtx(4, 1), ConfigError);
  CHECK_THROWS_AS(RingCtx(2, 3), ConfigError);
  CHECK_THROWS_AS(RingCtx(3, 0), ConfigError);
  // 3^16 points fit under 2^26, 3^18 do not
  CHECK_THROWS_AS(RingCtx(3, 9), ConfigError);
  CHECK_NOTHROW(RingCtx(3, 8));
  const RingCtx c(7, 2);
  CHECK(c.modulus() == 49);
  CHECK(c.num_points() == 2401);
  CHECK_FALSE(c.one_mod_four());
  CHECK(RingCtx(13, 1).one_mod_four());
}

TEST_CASE("inverse against a search oracle") {
  const RingCtx c(7, 2);
  CHECK(c.inverse(3) == 33);  // 3 * 33 = 99 = 2 * 49 + 1
  for (Residue x = 0; x < c.modulus(); ++x) {
    if (x % 7 == 0) {
      CHECK_THROWS_AS(c.inverse(x), NonUnit);
      continue;
    }
    Residue found = 0;
    for (Residue y = 1; y < c.modulus(); ++y) {
      if (x * y % 49 == 1) found = y;
    }
    CHECK(c.inverse(x) == found);
  }
}

TEST_CASE("valuation") {
  const RingCtx c(3, 3);
  CHECK(c.valuation(0) == 3);
  CHECK(c.valuation(1) == 0);
  CHECK(c.valuation(9) == 2);
  CHECK(c.valuation(18) == 2);
  CHECK(c.valuation(6) == 1);
  CHECK(c.vec_valuation({9, 3}) == 1);
  CHECK(c.vec_valuation({0, 0}) == 3);
}

TEST_CASE("vec_reduce recovers x = p^v x~ with x~ primitive") {
  const RingCtx c(5, 3);
  for (PointIndex i = 1; i < c.num_points(); i += 7) {
    const Vec2 x = c.point(i);
    const ReducedVec red = vec_reduce(c, x);
    REQUIRE_FALSE(red.is_zero());
    CHECK(red.tilde_modulus == c.pow_p(3 - red.v));
    CHECK((red.tilde->x1 % 5 != 0 || red.tilde->x2 % 5 != 0));
    const Residue pv = c.pow_p(red.v);
    CHECK(Vec2{pv * red.tilde->x1, pv * red.tilde->x2} == x);
  }
  CHECK(vec_reduce(c, {0, 0}).is_zero());
  const ReducedVec r = vec_reduce(RingCtx(3, 2), {3, 0});
  CHECK(r.v == 1);
  CHECK(*r.tilde == Vec2{1, 0});
}

TEST_CASE("index and point are inverse") {
  const RingCtx c(5, 2);
  for (PointIndex i = 0; i < c.num_points(); ++i) CHECK(c.index(c.point(i)) == i);
  CHECK(c.index({1, 2}) == 27);
}

TEST_CASE("circle sizes match a direct count") {
  for (auto [p, r] : {std::pair{3u, 1u}, {3u, 2u}, {5u, 1u}, {5u, 2u}, {7u, 1u}}) {
    const RingCtx c(p, r);
    std::vector<std::uint64_t> counts(c.modulus(), 0);
    for (std::uint32_t a = 0; a < c.modulus(); ++a) {
      for (std::uint32_t b = 0; b < c.modulus(); ++b) ++counts[(a * a + b * b) % c.modulus()];
    }
    for (Residue j = 0; j < c.modulus(); ++j) CHECK(circle(c, j).size() == counts[j]);
  }
  // unit circles: p + 1 points for p = 3 mod 4, p - 1 for p = 1 mod 4
  CHECK(circle(RingCtx(3, 1), 1).size() == 4);
  CHECK(circle(RingCtx(7, 1), 1).size() == 8);
  CHECK(circle(RingCtx(5, 1), 1).size() == 4);
  CHECK(circle(RingCtx(3, 2), 1).size() == 12);
}

TEST_CASE("point sets") {
  const RingCtx c(3, 2);
  PointSet s(c);
  CHECK(s.empty());
  s.insert({1, 2});
  s.insert({1, 2});
  s.insert_index(0);
  CHECK(s.size() == 2);
  CHECK(s.contains({1, 2}));
  CHECK(s.indices() == std::vector<PointIndex>{0, 11});
  CHECK(s.density() == Rational(2, 81));
  s.erase_index(0);
  s.erase_index(0);
  CHECK(s.size() == 1);
  CHECK(PointSet::full(c).size() == 81);
  CHECK(PointSet::full(c).density() == Rational(1));
}

TEST_CASE("point set JSON is a sorted index array") {
  const RingCtx c(3, 2);
  const std::vector<PointIndex> idx{40, 3, 17};
  const PointSet s = PointSet::from_indices(c, idx);
  CHECK(point_set_to_json(s) == "[3,17,40]");
  CHECK(point_set_from_json(c, "[3, 17, 40]") == s);
  CHECK(point_set_from_json(c, "[]").empty());
  CHECK_THROWS(point_set_from_json(c, "[81]"));
  CHECK_THROWS(point_set_from_json(c, "{\"a\": 1}"));
}

TEST_CASE("seeded generation is reproducible and stream-separated") {
  const RingCtx c(5, 2);
  Rng a = make_rng(42, 1), b = make_rng(42, 1), d = make_rng(42, 2);
  const PointSet x = random_point_set(c, Rational(1, 3), a);
  const PointSet y = random_point_set(c, Rational(1, 3), b);
  const PointSet z = random_point_set(c, Rational(1, 3), d);
  CHECK(x == y);
  CHECK_FALSE(x == z);
  Rng e = make_rng(1);
  CHECK(random_point_set(c, Rational(0), e).empty());
  CHECK(random_point_set(c, Rational(1), e).size() == c.num_points());
}

TEST_CASE("uniform_below stays in range and hits every value") {
  Rng rng = make_rng(7);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = uniform_below(rng, 13);
    CHECK(v < 13);
    seen.insert(v);
  }
  CHECK(seen.size() == 13);
}
