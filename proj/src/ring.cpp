#include "padic/ring.hpp"

#include <json.hpp>

#include "padic/error.hpp"

namespace padic {

bool is_odd_prime(std::uint32_t n) {
  if (n < 3 || n % 2 == 0) return false;
  for (std::uint32_t d = 3; static_cast<std::uint64_t>(d) * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

RingCtx::RingCtx(std::uint32_t p, std::uint32_t r) : p_(p), r_(r), q_(1) {
  if (!is_odd_prime(p)) throw ConfigError("p must be an odd prime, got " + std::to_string(p));
  if (r == 0) throw ConfigError("r must be positive");
  std::uint64_t q = 1;
  powers_.push_back(1);
  for (std::uint32_t i = 0; i < r; ++i) {
    q *= p;
    if (q * q > kMaxPoints) {
      throw ConfigError("plane (Z/" + std::to_string(p) + "^" + std::to_string(r) +
                        "Z)^2 exceeds the 2^26 point cap");
    }
    powers_.push_back(static_cast<std::uint32_t>(q));
  }
  q_ = static_cast<std::uint32_t>(q);
  cls_ = (p % 4 == 1) ? ResidueClass::OneModFour : ResidueClass::ThreeModFour;
}

std::uint32_t RingCtx::valuation(Residue x) const {
  x %= q_;
  if (x == 0) return r_;
  std::uint32_t u = 0;
  while (x % p_ == 0) {
    x /= p_;
    ++u;
  }
  return u;
}

Residue RingCtx::inverse(Residue x) const {
  x %= q_;
  if (x % p_ == 0) throw NonUnit(std::to_string(x) + " is not a unit mod " + std::to_string(q_));
  // extended Euclid on (x, q)
  std::int64_t old_r = x, cur_r = q_;
  std::int64_t old_s = 1, cur_s = 0;
  while (cur_r != 0) {
    const std::int64_t quot = old_r / cur_r;
    std::int64_t t = old_r - quot * cur_r;
    old_r = cur_r;
    cur_r = t;
    t = old_s - quot * cur_s;
    old_s = cur_s;
    cur_s = t;
  }
  return reduce(old_s);
}

std::uint32_t RingCtx::vec_valuation(Vec2 x) const {
  return std::min(valuation(x.x1), valuation(x.x2));
}

std::string RingCtx::describe() const {
  return "Z/" + std::to_string(p_) + "^" + std::to_string(r_) + "Z";
}

ReducedVec vec_reduce(const RingCtx& ctx, Vec2 x) {
  const std::uint32_t v = ctx.vec_valuation(x);
  if (v == ctx.r()) return ReducedVec{v, std::nullopt, 1};
  const std::uint32_t pv = ctx.pow_p(v);
  const std::uint32_t small = ctx.pow_p(ctx.r() - v);
  // x_i = p^v * t_i exactly as integers in [0, p^r), so t_i < p^{r-v}
  return ReducedVec{v, Vec2{(x.x1 / pv) % small, (x.x2 / pv) % small}, small};
}

PointSet::PointSet(const RingCtx& ctx) : ctx_(ctx), bits_(ctx.num_points(), 0) {}

PointSet PointSet::full(const RingCtx& ctx) {
  PointSet s(ctx);
  std::fill(s.bits_.begin(), s.bits_.end(), std::uint8_t{1});
  s.count_ = s.bits_.size();
  return s;
}

PointSet PointSet::from_indices(const RingCtx& ctx, std::span<const PointIndex> indices) {
  PointSet s(ctx);
  for (PointIndex i : indices) {
    if (i >= ctx.num_points()) {
      throw RangeError("point index " + std::to_string(i) + " out of range for " + ctx.describe());
    }
    s.insert_index(i);
  }
  return s;
}

void PointSet::insert_index(PointIndex i) {
  if (!bits_[i]) {
    bits_[i] = 1;
    ++count_;
  }
}

void PointSet::erase_index(PointIndex i) {
  if (bits_[i]) {
    bits_[i] = 0;
    --count_;
  }
}

Rational PointSet::density() const {
  return Rational(static_cast<std::int64_t>(count_), static_cast<std::int64_t>(ctx_.num_points()));
}

std::vector<PointIndex> PointSet::indices() const {
  std::vector<PointIndex> out;
  out.reserve(count_);
  for (PointIndex i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out.push_back(i);
  }
  return out;
}

std::vector<Vec2> PointSet::points() const {
  std::vector<Vec2> out;
  out.reserve(count_);
  for (PointIndex i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out.push_back(ctx_.point(i));
  }
  return out;
}

PointSet circle(const RingCtx& ctx, Residue j) {
  PointSet s(ctx);
  j %= ctx.modulus();
  for (PointIndex i = 0; i < ctx.num_points(); ++i) {
    if (ctx.norm(ctx.point(i)) == j) s.insert_index(i);
  }
  return s;
}

std::string point_set_to_json(const PointSet& set) {
  return nlohmann::json(set.indices()).dump();
}

PointSet point_set_from_json(const RingCtx& ctx, const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed point set: ") + e.what());
  }
  if (!doc.is_array()) throw IoError("point set file must hold a JSON array");
  std::vector<PointIndex> idx;
  idx.reserve(doc.size());
  for (const auto& v : doc) {
    if (!v.is_number_unsigned()) throw IoError("point set entries must be non-negative integers");
    idx.push_back(v.get<PointIndex>());
  }
  return PointSet::from_indices(ctx, idx);
}

}  // namespace padic
