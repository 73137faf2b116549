#include <doctest.h>

#include <set>

#include "padic/error.hpp"
#include "padic/experiments.hpp"
#include "padic/fourier.hpp"

using namespace padic;

namespace {

std::uint64_t g_diff_oracle(const RingCtx& c, Rotation g, const PointSet& a, const PointSet& b) {
  std::set<PointIndex> seen;
  for (PointIndex i : a.indices()) {
    for (PointIndex j : b.indices()) seen.insert(c.index(c.vsub(apply(c, g, c.point(i)), c.point(j))));
  }
  return seen.size();
}

}  // namespace

TEST_CASE("|gA - B| against a set-based oracle") {
  const RingCtx c(5, 1);
  const auto g = RotationGroup::hensel_enumerate(c);
  Rng rng = make_rng(21);
  const PointSet a = random_point_set(c, Rational(1, 5), rng);
  const PointSet b = random_point_set(c, Rational(1, 6), rng);
  for (const Rotation& x : g.elements()) CHECK(g_difference_size(x, a, b) == g_diff_oracle(c, x, a, b));
}

TEST_CASE("coset sets of the sharpness example") {
  const RingCtx c(3, 2);
  const auto g = RotationGroup::hensel_enumerate(c);
  const auto [a, b] = example13_sets(c, 1, 1, 0);
  CHECK(a.size() == 9);
  CHECK(b.size() == 9);
  for (std::uint32_t m : {1u, 2u, 3u, 9u}) {
    for (std::uint32_t n : {1u, 2u, 3u, 9u}) {
      const auto [sa, sb] = example13_sets(c, m, n, 5);
      CHECK(sa.size() == m * 9);
      CHECK(sb.size() == n * 9);
      for (const Rotation& x : g.elements()) {
        CHECK(rotate_set(sa, x).size() == sa.size());
        CHECK(g_difference_size(x, sa, sb) <= m * n * 9);
      }
    }
  }
  CHECK_THROWS_AS(example13_sets(c, 0, 1), RangeError);
  CHECK_THROWS_AS(example13_sets(c, 1, 10), RangeError);
}

TEST_CASE("gamma probe") {
  const RingCtx c(5, 2);
  const auto g = RotationGroup::hensel_enumerate(c);
  const SharpnessReport s = sharpness_probe(g, Rational(1, 5));
  CHECK(s.n == 5);
  CHECK(s.bound == 125);
  CHECK(s.holds);
  CHECK(s.max_diff <= 125);
  const SharpnessReport one = sharpness_probe(g, Rational(1));
  CHECK(one.max_diff == 625);
  const SharpnessReport c3 = sharpness_probe(RotationGroup::hensel_enumerate(RingCtx(3, 2)), Rational(1, 3));
  CHECK(c3.bound == 27);
  CHECK(c3.holds);
  CHECK_THROWS_AS(sharpness_probe(g, Rational(1, 3)), RangeError);
  CHECK_THROWS_AS(sharpness_probe(g, Rational(0)), RangeError);
}

TEST_CASE("circle coset sets") {
  const RingCtx c(3, 2);
  const auto y = unit_circle_mod_p(c);
  CHECK(y.size() == 4);
  const PointSet full = circle_coset_set(c, y);
  CHECK(full.size() == 36);
  const PointSet single = circle_coset_set(c, {y.front()});
  CHECK(single.size() == 9);
  CHECK(difference_set_size(full, full) <= 16 * 9);
  CHECK_THROWS_AS(circle_coset_set(c, {}), EmptySet);
  CHECK_THROWS_AS(circle_coset_set(c, {Vec2{1, 1}}), RangeError);
}

TEST_CASE("density conditions in exact arithmetic") {
  const RingCtx c(7, 1);
  // delta_A delta_B^2 >= 4/49 with |A| = 49 delta_A
  CHECK(sqrt_density_condition(c, 49, 14));      // 1 * (2/7)^2 = 4/49
  CHECK_FALSE(sqrt_density_condition(c, 48, 14));
  CHECK(product_density_condition(c, 49, 14));   // 1 * 2/7
  CHECK_FALSE(product_density_condition(c, 49, 13));
}

TEST_CASE("proportion of good rotations and the bad set") {
  const RingCtx c(7, 1);
  const auto g = RotationGroup::hensel_enumerate(c);
  Rng rng = make_rng(3);
  const PointSet a = random_point_set(c, Rational(7, 10), rng);
  const PointSet b = random_point_set(c, Rational(9, 20), rng);
  const TrialReport t = proportion_good(g, a, b);
  CHECK(t.rotations.size() == g.order());
  std::uint64_t good = 0, bad = 0;
  for (std::size_t k = 0; k < t.rotations.size(); ++k) {
    const std::uint64_t d = g_diff_oracle(c, t.rotations[k], a, b);
    CHECK(t.diff_sizes[k] == d);
    good += 2 * d >= 49;
    bad += 2 * (49 - d) >= 49;
  }
  CHECK(t.good == good);
  CHECK(t.bad == bad);
  CHECK(bad_set_measure(g, a, b) == bad);
  CHECK(t.fraction_good == doctest::Approx(static_cast<double>(good) / g.order()));

  const TrialReport sampled = proportion_good(g, a, b, Rational(1, 2), GSampling{3, 9});
  CHECK(sampled.rotations.size() == 3);
  CHECK(std::is_sorted(sampled.rotations.begin(), sampled.rotations.end()));
  CHECK_THROWS_AS(proportion_good(g, a, b, Rational(0)), RangeError);
  CHECK_THROWS_AS(proportion_good(g, a, b, Rational(3, 2)), RangeError);

  const PointSet all = PointSet::full(c);
  CHECK(proportion_good(g, all, all).fraction_good == 1.0);
}

TEST_CASE("pruning keeps only primitive points") {
  const RingCtx c(3, 2);
  const PointSet pruned = prune_nonprimitive(PointSet::full(c));
  CHECK(pruned.size() == 81 - 9);
  for (PointIndex i : pruned.indices()) CHECK(c.vec_valuation(c.point(i)) == 0);
}

TEST_CASE("balanced sweep at full density") {
  const RingCtx c(5, 1);
  const auto g = RotationGroup::hensel_enumerate(c);
  const auto rows = conjecture_sweep(g, {Rational(1), Rational(2, 5)}, 1, 3);
  CHECK(rows.size() == 6);
  for (const auto& r : rows) {
    if (r.delta == Rational(1)) CHECK(r.fraction_good == 1.0);
    CHECK(r.fraction_good >= 0.0);
    CHECK(r.fraction_good <= 1.0);
  }
}
