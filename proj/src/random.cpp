#include "padic/random.hpp"

#include "padic/error.hpp"

namespace padic {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  return Rng(splitmix64(splitmix64(seed) ^ (stream * 0xd1342543de82ef95ULL + 1)));
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  // rejection sampling keeps this exact and implementation-independent
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

PointSet random_point_set(const RingCtx& ctx, const Rational& density, Rng& rng) {
  if (density.num() < 0 || density > Rational(1)) throw RangeError("density must lie in [0, 1]");
  PointSet s(ctx);
  const auto num = static_cast<std::uint64_t>(density.num());
  const auto den = static_cast<std::uint64_t>(density.den());
  for (PointIndex i = 0; i < ctx.num_points(); ++i) {
    if (uniform_below(rng, den) < num) s.insert_index(i);
  }
  return s;
}

}  // namespace padic
