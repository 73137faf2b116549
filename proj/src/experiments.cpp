#include "padic/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "padic/error.hpp"
#include "padic/fourier.hpp"
#include "padic/parallel.hpp"

namespace padic {

std::uint64_t g_difference_size(const Rotation& g, const PointSet& a, const PointSet& b) {
  return difference_set_size(rotate_set(a, g), b);
}

PointSet prune_nonprimitive(const PointSet& a) {
  const RingCtx& ctx = a.ctx();
  PointSet out(ctx);
  for (PointIndex i : a.indices()) {
    if (ctx.vec_valuation(ctx.point(i)) == 0) out.insert_index(i);
  }
  return out;
}

bool sqrt_density_condition(const RingCtx& ctx, std::uint64_t size_a, std::uint64_t size_b) {
  using i128 = unsigned __int128;
  const i128 n = ctx.num_points();
  const i128 p = ctx.p();
  return static_cast<i128>(size_a) * size_b * size_b * p * p >= 4 * n * n * n;
}

bool product_density_condition(const RingCtx& ctx, std::uint64_t size_a, std::uint64_t size_b) {
  using i128 = unsigned __int128;
  const i128 n = ctx.num_points();
  return static_cast<i128>(size_a) * size_b * ctx.p() >= 2 * n * n;
}

TrialReport proportion_good(const RotationGroup& group, const PointSet& a, const PointSet& b,
                            const Rational& c, const GSampling& mode) {
  if (c <= Rational(0) || c > Rational(1)) throw RangeError("threshold c must lie in (0, 1]");
  const RingCtx& ctx = group.ctx();
  TrialReport rep;
  rep.p = ctx.p();
  rep.r = ctx.r();
  rep.size_a = a.size();
  rep.size_b = b.size();
  rep.threshold_c = c;
  rep.sqrt_condition = sqrt_density_condition(ctx, rep.size_a, rep.size_b);
  rep.product_condition = product_density_condition(ctx, rep.size_a, rep.size_b);

  const auto& all = group.elements();
  if (mode.sample && *mode.sample < all.size()) {
    Rng rng = make_rng(mode.seed, 0x67);
    std::set<std::uint64_t> chosen;
    for (std::uint64_t j = all.size() - *mode.sample; j < all.size(); ++j) {
      const std::uint64_t t = uniform_below(rng, j + 1);
      if (!chosen.insert(t).second) chosen.insert(j);
    }
    for (std::uint64_t k : chosen) rep.rotations.push_back(all[k]);
  } else {
    rep.rotations = all;
  }

  rep.diff_sizes.assign(rep.rotations.size(), 0);
  parallel_for(rep.rotations.size(),
               [&](std::size_t k) { rep.diff_sizes[k] = g_difference_size(rep.rotations[k], a, b); });

  const std::uint64_t n = ctx.num_points();
  rep.min_diff = n;
  for (std::uint64_t d : rep.diff_sizes) {
    if (static_cast<__int128>(d) * c.den() >= static_cast<__int128>(c.num()) * n) ++rep.good;
    if (2 * (n - d) >= n) ++rep.bad;
    rep.min_diff = std::min(rep.min_diff, d);
    rep.max_diff = std::max(rep.max_diff, d);
  }
  if (rep.rotations.empty()) rep.min_diff = 0;
  rep.fraction_good = rep.rotations.empty() ? 0.0
                                            : static_cast<double>(rep.good) / static_cast<double>(rep.rotations.size());
  return rep;
}

std::uint64_t bad_set_measure(const RotationGroup& group, const PointSet& a, const PointSet& b) {
  const RingCtx& ctx = group.ctx();
  const std::uint64_t n = ctx.num_points();
  const auto& elems = group.elements();
  std::vector<std::uint8_t> is_bad(elems.size(), 0);
  parallel_for(elems.size(), [&](std::size_t k) {
    // z with B and gA + z disjoint are exactly those outside B - gA
    const std::uint64_t empty_translates = n - difference_set_size(b, rotate_set(a, elems[k]));
    is_bad[k] = 2 * empty_translates >= n;
  });
  return std::accumulate(is_bad.begin(), is_bad.end(), std::uint64_t{0});
}

namespace {

std::vector<std::uint32_t> shuffled_codes(std::uint32_t count, Rng& rng) {
  std::vector<std::uint32_t> codes(count);
  std::iota(codes.begin(), codes.end(), 0u);
  for (std::uint32_t i = count; i > 1; --i) {
    std::swap(codes[i - 1], codes[uniform_below(rng, i)]);
  }
  return codes;
}

PointSet coset_union(const RingCtx& ctx, const std::vector<std::uint8_t>& residue_mask) {
  const std::uint32_t p = ctx.p();
  PointSet out(ctx);
  for (PointIndex i = 0; i < ctx.num_points(); ++i) {
    const Vec2 x = ctx.point(i);
    if (residue_mask[(x.x1 % p) * p + x.x2 % p]) out.insert_index(i);
  }
  return out;
}

}  // namespace

std::pair<PointSet, PointSet> example13_sets(const RingCtx& ctx, std::uint32_t m, std::uint32_t n,
                                             std::uint64_t seed) {
  const std::uint32_t p2 = ctx.p() * ctx.p();
  if (m < 1 || m > p2 || n < 1 || n > p2) {
    throw RangeError("coset counts must lie in [1, p^2]; got m=" + std::to_string(m) + ", n=" + std::to_string(n));
  }
  Rng rng_a = make_rng(seed, 0x13a);
  Rng rng_b = make_rng(seed, 0x13b);
  const auto codes_a = shuffled_codes(p2, rng_a);
  const auto codes_b = shuffled_codes(p2, rng_b);
  std::vector<std::uint8_t> mask_a(p2, 0), mask_b(p2, 0);
  for (std::uint32_t k = 0; k < m; ++k) mask_a[codes_a[k]] = 1;
  for (std::uint32_t k = 0; k < n; ++k) mask_b[codes_b[k]] = 1;
  return {coset_union(ctx, mask_a), coset_union(ctx, mask_b)};
}

std::vector<Vec2> unit_circle_mod_p(const RingCtx& ctx) {
  const std::uint32_t p = ctx.p();
  std::vector<Vec2> out;
  for (std::uint32_t y1 = 0; y1 < p; ++y1) {
    for (std::uint32_t y2 = 0; y2 < p; ++y2) {
      if ((y1 * y1 + y2 * y2) % p == 1) out.push_back({y1, y2});
    }
  }
  return out;
}

PointSet circle_coset_set(const RingCtx& ctx, const std::vector<Vec2>& y) {
  if (y.empty()) throw EmptySet("circle coset construction needs a nonempty Y");
  const std::uint32_t p = ctx.p();
  std::vector<std::uint8_t> mask(p * p, 0);
  for (const Vec2& v : y) {
    if (v.x1 >= p || v.x2 >= p || (v.x1 * v.x1 + v.x2 * v.x2) % p != 1) {
      throw RangeError("Y must lie on the unit circle mod p");
    }
    mask[v.x1 * p + v.x2] = 1;
  }
  return coset_union(ctx, mask);
}

SharpnessReport sharpness_probe(const RotationGroup& group, const Rational& gamma, std::uint64_t seed) {
  const RingCtx& ctx = group.ctx();
  const std::int64_t p2 = static_cast<std::int64_t>(ctx.p()) * ctx.p();
  if (gamma.num() <= 0 || (gamma.num() * p2) % gamma.den() != 0 || gamma > Rational(1)) {
    throw RangeError("gamma p^2 must be an integer in [1, p^2]; got gamma = " + gamma.to_string());
  }
  SharpnessReport rep;
  rep.gamma = gamma;
  rep.n = static_cast<std::uint32_t>(gamma.num() * p2 / gamma.den());
  const auto [a, b] = example13_sets(ctx, 1, rep.n, seed);
  rep.density_product = std::sqrt(a.density().to_double()) * b.density().to_double();
  rep.bound = static_cast<std::uint64_t>(rep.n) * (ctx.num_points() / static_cast<std::uint64_t>(p2));
  std::vector<std::uint64_t> sizes(group.order());
  parallel_for(sizes.size(), [&](std::size_t k) { sizes[k] = g_difference_size(group.elements()[k], a, b); });
  rep.max_diff = *std::max_element(sizes.begin(), sizes.end());
  rep.holds = rep.max_diff <= rep.bound;
  return rep;
}

std::vector<ConjectureRow> conjecture_sweep(const RotationGroup& group, const std::vector<Rational>& deltas,
                                            std::uint64_t seed, std::uint32_t trials) {
  const RingCtx& ctx = group.ctx();
  std::vector<ConjectureRow> rows;
  for (std::size_t d = 0; d < deltas.size(); ++d) {
    for (std::uint32_t t = 0; t < trials; ++t) {
      const std::uint64_t s = seed + t;
      Rng rng = make_rng(s, 0xc0 + d);
      const PointSet a = random_point_set(ctx, deltas[d], rng);
      const PointSet b = random_point_set(ctx, deltas[d], rng);
      const TrialReport rep = proportion_good(group, a, b);
      rows.push_back({deltas[d], s, a.size(), b.size(), rep.fraction_good});
    }
  }
  return rows;
}

}  // namespace padic
