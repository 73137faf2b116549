#include "padic/rotation.hpp"

#include <algorithm>

#include "padic/error.hpp"

namespace padic {

namespace {

std::uint32_t inverse_mod_p(std::uint32_t x, std::uint32_t p) {
  // p is prime: x^{p-2}
  std::uint64_t result = 1, base = x % p;
  for (std::uint32_t e = p - 2; e > 0; e >>= 1) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
  }
  return static_cast<std::uint32_t>(result);
}

}  // namespace

RotationGroup::RotationGroup(const RingCtx& ctx, std::vector<Rotation> elements)
    : ctx_(ctx), elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
}

RotationGroup RotationGroup::brute_enumerate(const RingCtx& ctx) {
  std::vector<Rotation> out;
  const Residue q = ctx.modulus();
  for (Residue a = 0; a < q; ++a) {
    for (Residue b = 0; b < q; ++b) {
      if (ctx.add(ctx.mul(a, a), ctx.mul(b, b)) == 1) out.push_back({a, b});
    }
  }
  return RotationGroup(ctx, std::move(out));
}

RotationGroup RotationGroup::hensel_enumerate(const RingCtx& ctx) {
  const std::uint32_t p = ctx.p();
  std::vector<Rotation> level;
  for (Residue a = 0; a < p; ++a) {
    for (Residue b = 0; b < p; ++b) {
      if ((a * a + b * b) % p == 1) level.push_back({a, b});
    }
  }
  for (const Rotation& g : level) {
    if ((2 * g.a) % p == 0 && (2 * g.b) % p == 0) {
      throw DegenerateGradient("vanishing gradient at level-1 solution (" + std::to_string(g.a) +
                               ", " + std::to_string(g.b) + ")");
    }
  }

  // Each solution mod p^l lifts to exactly p solutions mod p^{l+1}: the
  // digits (s, t) lie on the line 2a s + 2b t = -(a^2 + b^2 - 1)/p^l (mod p).
  for (std::uint32_t l = 1; l < ctx.r(); ++l) {
    const std::int64_t pl = ctx.pow_p(l);
    std::vector<Rotation> next;
    next.reserve(level.size() * p);
    for (const Rotation& g : level) {
      const std::int64_t a = g.a, b = g.b;
      const std::int64_t excess = (a * a + b * b - 1) / pl;
      const std::int64_t rhs = ((-excess) % p + p) % p;
      const std::int64_t ga = (2 * a) % p, gb = (2 * b) % p;
      for (std::int64_t free_digit = 0; free_digit < p; ++free_digit) {
        std::int64_t s, t;
        if (ga != 0) {
          t = free_digit;
          s = ((rhs - gb * t) % p + p) % p * inverse_mod_p(static_cast<std::uint32_t>(ga), p) % p;
        } else {
          s = free_digit;
          t = ((rhs - ga * s) % p + p) % p * inverse_mod_p(static_cast<std::uint32_t>(gb), p) % p;
        }
        next.push_back({static_cast<Residue>(a + pl * s), static_cast<Residue>(b + pl * t)});
      }
    }
    level = std::move(next);
  }
  return RotationGroup(ctx, std::move(level));
}

bool RotationGroup::contains(Rotation g) const {
  return std::binary_search(elements_.begin(), elements_.end(), g);
}

std::uint64_t group_order_formula(const RingCtx& ctx) {
  const std::uint64_t base = ctx.pow_p(ctx.r() - 1);
  return ctx.one_mod_four() ? base * (ctx.p() - 1) : base * (ctx.p() + 1);
}

std::uint64_t orbit_size_formula(const RingCtx& ctx, std::uint32_t v) {
  if (v >= ctx.r()) throw RangeError("orbit formula needs v <= r - 1");
  const std::uint64_t base = ctx.pow_p(ctx.r() - v - 1);
  return ctx.one_mod_four() ? base * (ctx.p() - 1) : base * (ctx.p() + 1);
}

std::uint64_t stabilizer_size_formula(const RingCtx& ctx, std::uint32_t v) {
  if (v >= ctx.r()) throw RangeError("stabilizer formula needs v <= r - 1");
  return ctx.pow_p(v);
}

PointSet Orbit::as_point_set(const RingCtx& ctx) const {
  PointSet s(ctx);
  for (const Vec2& x : points) s.insert(x);
  return s;
}

Orbit orbit(const RotationGroup& group, Vec2 m) {
  const RingCtx& ctx = group.ctx();
  const ReducedVec red = vec_reduce(ctx, m);
  if (red.is_zero()) throw ZeroVector("orbit of the zero vector");

  Orbit out;
  out.base = m;
  out.v_m = red.v;
  out.reduced_norm_mod_p = (red.tilde->x1 * red.tilde->x1 + red.tilde->x2 * red.tilde->x2) % ctx.p();

  std::vector<PointIndex> idx;
  idx.reserve(group.order());
  for (const Rotation& g : group.elements()) {
    const Vec2 y = apply(ctx, g, m);
    if (y == m) ++out.stabilizer_order;
    idx.push_back(ctx.index(y));
  }
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  out.points.reserve(idx.size());
  for (PointIndex i : idx) out.points.push_back(ctx.point(i));
  return out;
}

std::vector<Orbit> all_orbits(const RotationGroup& group) {
  const RingCtx& ctx = group.ctx();
  std::vector<std::uint8_t> seen(ctx.num_points(), 0);
  std::vector<Orbit> out;
  for (PointIndex i = 1; i < ctx.num_points(); ++i) {
    if (seen[i]) continue;
    Orbit o = orbit(group, ctx.point(i));
    for (const Vec2& x : o.points) seen[ctx.index(x)] = 1;
    out.push_back(std::move(o));
  }
  return out;
}

Branch branch_of(const RingCtx& ctx, const Orbit& orbit) {
  if (!ctx.one_mod_four()) return Branch::ThreeModFour;
  return orbit.reduced_norm_mod_p == 0 ? Branch::OneModFourIsotropic : Branch::OneModFourUnit;
}

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::ThreeModFour: return "p3";
    case Branch::OneModFourUnit: return "p1_unit";
    case Branch::OneModFourIsotropic: return "p1_isotropic";
  }
  return "?";
}

Autocorrelation orbit_autocorrelation(const RotationGroup& group, Vec2 m) {
  const RingCtx& ctx = group.ctx();
  const Orbit o = orbit(group, m);
  Autocorrelation out;
  out.counts.assign(ctx.num_points(), 0);
  for (const Vec2& x : o.points) {
    for (const Vec2& y : o.points) ++out.counts[ctx.index(ctx.vsub(x, y))];
  }
  for (PointIndex z = 1; z < ctx.num_points(); ++z) {
    out.max_nonzero = std::max(out.max_nonzero, out.counts[z]);
  }
  out.branch = branch_of(ctx, o);
  const std::uint32_t e = ctx.r() - o.v_m;
  out.bound_shape = out.branch == Branch::OneModFourIsotropic ? ctx.pow_p(e) : ctx.pow_p(e - 1);
  out.ratio = static_cast<double>(out.max_nonzero) / static_cast<double>(out.bound_shape);
  return out;
}

}  // namespace padic
