#pragma once

// The rotation group G_r = SO_2(Z/p^rZ), its action on the plane, orbits
// and stabilizers.

#include <cstdint>
#include <vector>

#include "padic/ring.hpp"

namespace padic {

/// The matrix [a -b; b a] with a^2 + b^2 = 1.
struct Rotation {
  Residue a = 1;
  Residue b = 0;

  friend auto operator<=>(const Rotation&, const Rotation&) = default;
};

inline Vec2 apply(const RingCtx& ctx, Rotation g, Vec2 x) {
  return {ctx.sub(ctx.mul(g.a, x.x1), ctx.mul(g.b, x.x2)),
          ctx.add(ctx.mul(g.b, x.x1), ctx.mul(g.a, x.x2))};
}

inline Rotation compose(const RingCtx& ctx, Rotation g, Rotation h) {
  return {ctx.sub(ctx.mul(g.a, h.a), ctx.mul(g.b, h.b)),
          ctx.add(ctx.mul(g.a, h.b), ctx.mul(g.b, h.a))};
}

/// Transpose, which is the inverse for determinant one.
inline Rotation invert(const RingCtx& ctx, Rotation g) { return {g.a, ctx.neg(g.b)}; }

class RotationGroup {
 public:
  /// Scans every (a, b) and keeps a^2 + b^2 = 1.
  static RotationGroup brute_enumerate(const RingCtx& ctx);

  /// Enumerates G_1 by scanning, then lifts one p-adic digit at a time.
  /// Throws DegenerateGradient if a level-1 solution has (2a, 2b) = 0 mod p.
  static RotationGroup hensel_enumerate(const RingCtx& ctx);

  const RingCtx& ctx() const { return ctx_; }

  /// Sorted by (a, b).
  const std::vector<Rotation>& elements() const { return elements_; }
  std::uint64_t order() const { return elements_.size(); }

  bool contains(Rotation g) const;

 private:
  RotationGroup(const RingCtx& ctx, std::vector<Rotation> elements);

  RingCtx ctx_;
  std::vector<Rotation> elements_;
};

/// p^r(1 - 1/p) for p = 1 mod 4, p^r(1 + 1/p) for p = 3 mod 4.
std::uint64_t group_order_formula(const RingCtx& ctx);

/// Closed forms p^{r-v}(1 -+ 1/p) and p^v, for 0 <= v <= r - 1.
std::uint64_t orbit_size_formula(const RingCtx& ctx, std::uint32_t v);
std::uint64_t stabilizer_size_formula(const RingCtx& ctx, std::uint32_t v);

/// The orbit V_m = {g m : g in G_r} of a nonzero m.
struct Orbit {
  Vec2 base;
  std::uint32_t v_m = 0;
  /// ||m~|| mod p, where m = p^v m~.
  std::uint32_t reduced_norm_mod_p = 0;
  /// Sorted by point index.
  std::vector<Vec2> points;
  std::uint64_t stabilizer_order = 0;

  std::uint64_t size() const { return points.size(); }
  PointSet as_point_set(const RingCtx& ctx) const;
};

/// Throws ZeroVector for m = 0. The stabilizer is counted by direct scan.
Orbit orbit(const RotationGroup& group, Vec2 m);

/// Every orbit of a nonzero point, each listed once, ordered by the smallest
/// point index it contains (which is also used as the orbit's base).
std::vector<Orbit> all_orbits(const RotationGroup& group);

/// The restriction/energy estimates split nonzero m into three cases.
enum class Branch { ThreeModFour, OneModFourUnit, OneModFourIsotropic };

Branch branch_of(const RingCtx& ctx, const Orbit& orbit);
const char* branch_name(Branch b);

/// counts[z] = #{(x, y) in V_m^2 : x - y = z}, indexed by point index.
struct Autocorrelation {
  std::vector<std::uint64_t> counts;
  std::uint64_t max_nonzero = 0;
  /// Bound shape from the orbit energy estimate: p^{r-v-1} (unit branch) or p^{r-v}
  /// (isotropic branch). For p = 3 mod 4 no bound is asserted; the unit
  /// shape is reported for comparison.
  std::uint64_t bound_shape = 1;
  double ratio = 0.0;
  Branch branch = Branch::ThreeModFour;
};

/// Throws ZeroVector for m = 0.
Autocorrelation orbit_autocorrelation(const RotationGroup& group, Vec2 m);

}  // namespace padic
