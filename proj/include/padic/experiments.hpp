#pragma once

// Experiments on |gA - B| over g in G_r: positive-proportion measurements,
// the bad rotation set, the coset sharpness constructions, and the
// balanced-density sweep.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "padic/random.hpp"
#include "padic/rational.hpp"
#include "padic/rotation.hpp"

namespace padic {

/// |{g a - b : a in A, b in B}|.
std::uint64_t g_difference_size(const Rotation& g, const PointSet& a, const PointSet& b);

/// Drops every x with v_x > 0 from A (optional preprocessing; off by default).
PointSet prune_nonprimitive(const PointSet& a);

struct GSampling {
  /// Empty for an exhaustive sweep over G_r.
  std::optional<std::uint64_t> sample;
  std::uint64_t seed = 0;
};

struct TrialReport {
  std::uint32_t p = 0;
  std::uint32_t r = 0;
  std::uint64_t size_a = 0;
  std::uint64_t size_b = 0;
  Rational threshold_c{1, 2};
  /// Rotations actually evaluated, with |gA - B| for each.
  std::vector<Rotation> rotations;
  std::vector<std::uint64_t> diff_sizes;
  std::uint64_t good = 0;
  double fraction_good = 0.0;
  /// delta_A^{1/2} delta_B >= 2/p, checked as delta_A delta_B^2 >= 4/p^2.
  bool sqrt_condition = false;
  /// delta_A delta_B >= 2/p.
  bool product_condition = false;
  /// Evaluated rotations in the bad set.
  std::uint64_t bad = 0;
  std::uint64_t min_diff = 0;
  std::uint64_t max_diff = 0;
};

bool sqrt_density_condition(const RingCtx& ctx, std::uint64_t size_a, std::uint64_t size_b);
bool product_density_condition(const RingCtx& ctx, std::uint64_t size_a, std::uint64_t size_b);

/// fraction of g with |gA - B| >= c p^{2r}. The default c = 1/2 matches the
/// bad-set threshold: g outside the bad set has |gA - B| > p^{2r}/2.
TrialReport proportion_good(const RotationGroup& group, const PointSet& a, const PointSet& b,
                            const Rational& c = Rational(1, 2), const GSampling& mode = {});

/// |bad set|: g with #{z : B and gA + z disjoint} = p^{2r} - |B - gA| >= p^{2r}/2.
std::uint64_t bad_set_measure(const RotationGroup& group, const PointSet& a, const PointSet& b);

/// Unions of m and n distinct cosets of X = {x = 0 mod p}; coset
/// representatives are drawn from the seed. Throws RangeError unless
/// 1 <= m, n <= p^2.
std::pair<PointSet, PointSet> example13_sets(const RingCtx& ctx, std::uint32_t m, std::uint32_t n,
                                             std::uint64_t seed = 0);

/// All (y1, y2) mod p with y1^2 + y2^2 = 1 mod p.
std::vector<Vec2> unit_circle_mod_p(const RingCtx& ctx);

/// A = B = X + Y for Y a set of residues (mod p) on the unit circle.
/// Throws EmptySet for empty Y and RangeError if some y is off the circle.
PointSet circle_coset_set(const RingCtx& ctx, const std::vector<Vec2>& y);

struct SharpnessReport {
  Rational gamma;
  std::uint32_t n = 0;
  /// delta_A^{1/2} delta_B.
  double density_product = 0.0;
  std::uint64_t max_diff = 0;
  /// gamma p^{2r}.
  std::uint64_t bound = 0;
  bool holds = false;
};

/// m = 1, n = gamma p^2. Throws RangeError unless gamma p^2 is an integer in [1, p^2].
SharpnessReport sharpness_probe(const RotationGroup& group, const Rational& gamma, std::uint64_t seed = 0);

struct ConjectureRow {
  Rational delta;
  std::uint64_t seed = 0;
  std::uint64_t size_a = 0;
  std::uint64_t size_b = 0;
  double fraction_good = 0.0;
};

/// Balanced random sets (delta_A = delta_B = delta) at c = 1/2. Exploratory.
std::vector<ConjectureRow> conjecture_sweep(const RotationGroup& group, const std::vector<Rational>& deltas,
                                            std::uint64_t seed, std::uint32_t trials);

}  // namespace padic
