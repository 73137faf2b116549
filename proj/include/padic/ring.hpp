#pragma once

// Exact arithmetic in Z/p^rZ and on the plane (Z/p^rZ)^2.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "padic/rational.hpp"

namespace padic {

/// Canonical representative in [0, p^r).
using Residue = std::uint32_t;

/// Dense index of a point, x1 * p^r + x2.
using PointIndex = std::uint32_t;

enum class ResidueClass { OneModFour, ThreeModFour };

/// Largest supported plane, in points (p^{2r} <= 2^26).
inline constexpr std::uint64_t kMaxPoints = std::uint64_t{1} << 26;

bool is_odd_prime(std::uint32_t n);

struct Vec2 {
  Residue x1 = 0;
  Residue x2 = 0;

  friend auto operator<=>(const Vec2&, const Vec2&) = default;
};

class RingCtx {
 public:
  /// Throws ConfigError unless p is an odd prime, r >= 1 and p^{2r} <= kMaxPoints.
  RingCtx(std::uint32_t p, std::uint32_t r);

  std::uint32_t p() const { return p_; }
  std::uint32_t r() const { return r_; }
  std::uint32_t modulus() const { return q_; }
  std::uint32_t num_points() const { return q_ * q_; }
  ResidueClass residue_class() const { return cls_; }
  bool one_mod_four() const { return cls_ == ResidueClass::OneModFour; }

  /// p^k for 0 <= k <= r.
  std::uint32_t pow_p(std::uint32_t k) const { return powers_.at(k); }

  Residue reduce(std::int64_t x) const {
    std::int64_t v = x % static_cast<std::int64_t>(q_);
    return static_cast<Residue>(v < 0 ? v + q_ : v);
  }
  Residue add(Residue a, Residue b) const { return (a + b) % q_; }
  Residue sub(Residue a, Residue b) const { return (a + q_ - b) % q_; }
  Residue neg(Residue a) const { return a == 0 ? 0 : q_ - a; }
  Residue mul(Residue a, Residue b) const {
    return static_cast<Residue>((static_cast<std::uint64_t>(a) * b) % q_);
  }

  /// v_p(x) in [0, r]; v_p(0) = r.
  std::uint32_t valuation(Residue x) const;

  /// Throws NonUnit when p | x.
  Residue inverse(Residue x) const;

  Vec2 vadd(Vec2 a, Vec2 b) const { return {add(a.x1, b.x1), add(a.x2, b.x2)}; }
  Vec2 vsub(Vec2 a, Vec2 b) const { return {sub(a.x1, b.x1), sub(a.x2, b.x2)}; }
  Vec2 vneg(Vec2 a) const { return {neg(a.x1), neg(a.x2)}; }
  Vec2 scale(Residue s, Vec2 a) const { return {mul(s, a.x1), mul(s, a.x2)}; }
  Residue dot(Vec2 a, Vec2 b) const {
    return static_cast<Residue>(
        (static_cast<std::uint64_t>(a.x1) * b.x1 + static_cast<std::uint64_t>(a.x2) * b.x2) % q_);
  }

  /// ||x|| = x1^2 + x2^2 mod p^r.
  Residue norm(Vec2 x) const { return dot(x, x); }

  /// min(v_p(x1), v_p(x2)); r for the zero vector.
  std::uint32_t vec_valuation(Vec2 x) const;

  PointIndex index(Vec2 x) const { return x.x1 * q_ + x.x2; }
  Vec2 point(PointIndex i) const { return {i / q_, i % q_}; }

  friend bool operator==(const RingCtx& a, const RingCtx& b) { return a.p_ == b.p_ && a.r_ == b.r_; }

  std::string describe() const;

 private:
  std::uint32_t p_;
  std::uint32_t r_;
  std::uint32_t q_;
  ResidueClass cls_;
  std::vector<std::uint32_t> powers_;
};

/// x = p^v * x_tilde with x_tilde primitive in (Z/p^{r-v}Z)^2.
struct ReducedVec {
  std::uint32_t v = 0;
  /// Empty for the zero vector (v == r); callers must branch.
  std::optional<Vec2> tilde;
  /// p^{r-v}, the modulus x_tilde lives in; 1 for the zero vector.
  std::uint32_t tilde_modulus = 1;

  bool is_zero() const { return !tilde.has_value(); }
};

ReducedVec vec_reduce(const RingCtx& ctx, Vec2 x);

/// Dense indicator set over all p^{2r} points.
class PointSet {
 public:
  explicit PointSet(const RingCtx& ctx);

  static PointSet full(const RingCtx& ctx);
  static PointSet from_indices(const RingCtx& ctx, std::span<const PointIndex> indices);

  const RingCtx& ctx() const { return ctx_; }

  bool contains(Vec2 x) const { return bits_[ctx_.index(x)] != 0; }
  bool contains_index(PointIndex i) const { return bits_[i] != 0; }
  void insert(Vec2 x) { insert_index(ctx_.index(x)); }
  void insert_index(PointIndex i);
  void erase_index(PointIndex i);

  std::uint64_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  /// |A| / p^{2r} exactly.
  Rational density() const;

  /// Sorted ascending.
  std::vector<PointIndex> indices() const;
  std::vector<Vec2> points() const;

  friend bool operator==(const PointSet& a, const PointSet& b) {
    return a.ctx_ == b.ctx_ && a.bits_ == b.bits_;
  }

 private:
  RingCtx ctx_;
  std::vector<std::uint8_t> bits_;
  std::uint64_t count_ = 0;
};

/// C_{j,r} = {x : ||x|| = j}, by exhaustive scan.
PointSet circle(const RingCtx& ctx, Residue j);

/// PointSet file format: JSON array of point indices, sorted ascending.
std::string point_set_to_json(const PointSet& set);
PointSet point_set_from_json(const RingCtx& ctx, const std::string& text);

}  // namespace padic
