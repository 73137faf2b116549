#pragma once

// Incidences between point pairs P = A x B and rigid motions (g, z), where
// ((g, z), (x, y)) is incident iff g y + z = x.

#include <cstdint>
#include <vector>

#include "padic/fourier.hpp"
#include "padic/random.hpp"
#include "padic/rotation.hpp"

namespace padic {

struct RigidMotion {
  Rotation g;
  Vec2 z;

  friend auto operator<=>(const RigidMotion&, const RigidMotion&) = default;
};

/// A subset of G_r x (Z/p^rZ)^2, kept sorted and duplicate-free.
class RigidMotionSet {
 public:
  explicit RigidMotionSet(const RingCtx& ctx) : ctx_(ctx) {}
  RigidMotionSet(const RingCtx& ctx, std::vector<RigidMotion> members);

  /// All of G_r x (Z/p^rZ)^2.
  static RigidMotionSet full(const RotationGroup& group);
  /// `size` motions drawn uniformly without replacement.
  static RigidMotionSet random(const RotationGroup& group, std::uint64_t size, Rng& rng);

  const RingCtx& ctx() const { return ctx_; }
  const std::vector<RigidMotion>& members() const { return members_; }
  std::uint64_t size() const { return members_.size(); }

  /// Consecutive runs of members sharing one rotation.
  struct Slice {
    Rotation g;
    std::size_t begin;
    std::size_t end;
  };
  std::vector<Slice> by_rotation() const;

 private:
  RingCtx ctx_;
  std::vector<RigidMotion> members_;
};

/// Exact count via per-rotation difference tables:
/// I = sum_g sum_{z : (g,z) in R} #{(x, y) in A x B : x - g y = z}.
std::uint64_t incidence_count(const PointSet& a, const PointSet& b, const RigidMotionSet& motions);

/// The definition read literally: every (motion, x, y) triple. Oracle for
/// incidence_count on small instances.
std::uint64_t incidence_count_definitional(const PointSet& a, const PointSet& b, const RigidMotionSet& motions);

struct IncidenceReport {
  std::uint64_t incidences = 0;
  /// |P||R| / p^{2r} as an exact fraction.
  Rational main_term;
  double deviation = 0.0;
  /// p^{(3r-1)/2} |P|^{1/2} |R|^{1/2}.
  double bound_95 = 0.0;
  /// p^{r-1/2} (p = 3 mod 4) or p^{r-1/4} (p = 1 mod 4), times |P|^{1/2} |R|^{1/2} |B|^{1/4}.
  double bound_94 = 0.0;
  double ratio_95 = 0.0;
  double ratio_94 = 0.0;
  std::uint64_t size_a = 0;
  std::uint64_t size_b = 0;
  std::uint64_t size_r = 0;
};

/// Fills the count, the main term, both bounds and both ratios.
IncidenceReport incidence_report(const PointSet& a, const PointSet& b, const RigidMotionSet& motions);

/// Only the first bound's fields are meaningful in the result.
IncidenceReport deviation_check_95(const PointSet& a, const PointSet& b, const RigidMotionSet& motions);
/// Only the second bound's fields are meaningful in the result.
IncidenceReport deviation_check_94(const PointSet& a, const PointSet& b, const RigidMotionSet& motions);

/// The non-principal Fourier term
///   II = p^{2r} sum_{m != 0} sum_{(g,z) in R} A^(-m) B^(g^{-1} m) chi(-m.z),
/// so that I = |P||R|/p^{2r} + II.
Complex fourier_deviation(const PointSet& a, const PointSet& b, const RigidMotionSet& motions);

}  // namespace padic
