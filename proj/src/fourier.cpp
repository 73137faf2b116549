#include "padic/fourier.hpp"

#include <cmath>
#include <numbers>

#include "padic/parallel.hpp"

namespace padic {

ComplexGrid ComplexGrid::indicator(const PointSet& set) {
  ComplexGrid g(set.ctx());
  for (PointIndex i = 0; i < g.values.size(); ++i) {
    if (set.contains_index(i)) g.values[i] = 1.0;
  }
  return g;
}

CharacterTable::CharacterTable(const RingCtx& ctx) : roots_(ctx.modulus()) {
  const double q = ctx.modulus();
  for (std::size_t t = 0; t < roots_.size(); ++t) {
    roots_[t] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(t) / q);
  }
}

Complex character(const RingCtx& ctx, Residue t) {
  t %= ctx.modulus();
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(t) / ctx.modulus());
}

namespace {

// out[k1][k2] = sum_{x1,x2} chi(sign * (k1 x1 + k2 x2)) in[x1][x2]
std::vector<Complex> separable_transform(const RingCtx& ctx, const std::vector<Complex>& in,
                                         bool negate) {
  const std::uint32_t q = ctx.modulus();
  const CharacterTable chi(ctx);
  auto phase = [&](std::uint64_t k, std::uint64_t x) {
    const Residue t = static_cast<Residue>(k * x % q);
    return chi(negate ? ctx.neg(t) : t);
  };

  std::vector<Complex> rows(in.size());
  parallel_for(q, [&](std::size_t x1) {
    const Complex* src = &in[x1 * q];
    Complex* dst = &rows[x1 * q];
    for (std::uint32_t k2 = 0; k2 < q; ++k2) {
      Complex acc = 0.0;
      for (std::uint32_t x2 = 0; x2 < q; ++x2) acc += phase(k2, x2) * src[x2];
      dst[k2] = acc;
    }
  });

  std::vector<Complex> out(in.size());
  parallel_for(q, [&](std::size_t k1) {
    Complex* dst = &out[k1 * q];
    for (std::uint32_t x1 = 0; x1 < q; ++x1) {
      const Complex w = phase(k1, x1);
      const Complex* src = &rows[x1 * q];
      for (std::uint32_t k2 = 0; k2 < q; ++k2) dst[k2] += w * src[k2];
    }
  });
  return out;
}

}  // namespace

SpectralTable dft(const ComplexGrid& f) {
  SpectralTable out(f.ctx);
  out.values = separable_transform(f.ctx, f.values, /*negate=*/true);
  const double scale = 1.0 / static_cast<double>(f.ctx.num_points());
  for (Complex& v : out.values) v *= scale;
  return out;
}

ComplexGrid idft(const SpectralTable& F) {
  ComplexGrid out(F.ctx);
  out.values = separable_transform(F.ctx, F.values, /*negate=*/false);
  return out;
}

double plancherel_gap(const ComplexGrid& f) {
  double space = 0.0;
  for (const Complex& v : f.values) space += std::norm(v);
  space /= static_cast<double>(f.ctx.num_points());
  if (space == 0.0) return 0.0;
  const SpectralTable F = dft(f);
  double freq = 0.0;
  for (const Complex& v : F.values) freq += std::norm(v);
  return std::abs(freq - space) / space;
}

std::uint64_t orthogonality_sum_exact(const RingCtx& ctx, Vec2 beta) {
  const std::uint32_t q = ctx.modulus();
  std::vector<std::uint64_t> hits(q, 0);
  for (PointIndex i = 0; i < ctx.num_points(); ++i) ++hits[ctx.dot(beta, ctx.point(i))];
  // The sum is sum_t hits[t] chi(t). It equals p^{2r} exactly when every
  // alpha lands on t = 0; otherwise hits must be constant on a nontrivial
  // additive subgroup p^v Z/qZ and zero off it, and the subgroup's roots of
  // unity sum to zero.
  if (hits[0] == ctx.num_points()) return ctx.num_points();
  std::uint32_t step = 0;
  for (std::uint32_t t = 1; t < q; ++t) {
    if (hits[t]) {
      step = t;
      break;
    }
  }
  if (step == 0 || q % step != 0) return ~std::uint64_t{0};
  for (std::uint32_t t = 0; t < q; ++t) {
    const bool on_subgroup = t % step == 0;
    if (on_subgroup ? hits[t] != hits[0] : hits[t] != 0) return ~std::uint64_t{0};
  }
  return 0;
}

Complex orthogonality_sum_float(const RingCtx& ctx, Vec2 beta) {
  const CharacterTable chi(ctx);
  Complex acc = 0.0;
  for (PointIndex i = 0; i < ctx.num_points(); ++i) acc += chi(ctx.dot(beta, ctx.point(i)));
  return acc;
}

ComplexGrid extension(const RingCtx& ctx, const Orbit& orbit, std::span<const Complex> f) {
  ComplexGrid out(ctx);
  const CharacterTable chi(ctx);
  const double inv = 1.0 / static_cast<double>(orbit.size());
  parallel_for(ctx.num_points(), [&](std::size_t y) {
    const Vec2 yv = ctx.point(static_cast<PointIndex>(y));
    Complex acc = 0.0;
    for (std::size_t k = 0; k < orbit.points.size(); ++k) acc += f[k] * chi(ctx.dot(yv, orbit.points[k]));
    out.values[y] = acc * inv;
  });
  return out;
}

double l4_sum(const ComplexGrid& e) {
  double acc = 0.0;
  for (const Complex& v : e.values) {
    const double n = std::norm(v);
    acc += n * n;
  }
  return acc;
}

Complex energy_quadruples(const RingCtx& ctx, const Orbit& orbit, std::span<const Complex> f) {
  std::vector<Complex> table(ctx.num_points());
  for (std::size_t i = 0; i < orbit.points.size(); ++i) {
    for (std::size_t j = 0; j < orbit.points.size(); ++j) {
      table[ctx.index(ctx.vsub(orbit.points[i], orbit.points[j]))] += f[i] * std::conj(f[j]);
    }
  }
  double acc = 0.0;
  for (const Complex& t : table) acc += std::norm(t);
  return acc;
}

std::int64_t energy_quadruples_exact(const RingCtx& ctx, const Orbit& orbit,
                                     std::span<const std::int64_t> f) {
  std::vector<std::int64_t> table(ctx.num_points(), 0);
  for (std::size_t i = 0; i < orbit.points.size(); ++i) {
    if (f[i] == 0) continue;
    for (std::size_t j = 0; j < orbit.points.size(); ++j) {
      table[ctx.index(ctx.vsub(orbit.points[i], orbit.points[j]))] += f[i] * f[j];
    }
  }
  std::int64_t acc = 0;
  for (std::int64_t t : table) acc += t * t;
  return acc;
}

DifferenceTable difference_count_table(const PointSet& a, const PointSet& b) {
  const RingCtx& ctx = a.ctx();
  DifferenceTable out;
  out.counts.assign(ctx.num_points(), 0);
  const auto pa = a.points();
  const auto pb = b.points();
  for (const Vec2& x : pa) {
    for (const Vec2& y : pb) ++out.counts[ctx.index(ctx.vsub(x, y))];
  }
  out.total = static_cast<std::uint64_t>(pa.size()) * pb.size();
  for (std::uint64_t c : out.counts) out.support += c > 0;
  return out;
}

std::uint64_t difference_set_size(const PointSet& a, const PointSet& b) {
  const RingCtx& ctx = a.ctx();
  const std::uint32_t q = ctx.modulus();
  const std::uint32_t n = ctx.num_points();
  if (a.empty() || b.empty()) return 0;
  std::vector<std::uint8_t> hit(n, 0);
  std::uint64_t support = 0;
  const auto ib = b.indices();
  for (PointIndex ia : a.indices()) {
    const Vec2 x = ctx.point(ia);
    for (PointIndex jb : ib) {
      const Residue d1 = (x.x1 + q - jb / q) % q;
      const Residue d2 = (x.x2 + q - jb % q) % q;
      std::uint8_t& h = hit[d1 * q + d2];
      if (!h) {
        h = 1;
        if (++support == n) return support;
      }
    }
  }
  return support;
}

PointSet rotate_set(const PointSet& a, const Rotation& g) {
  PointSet out(a.ctx());
  for (const Vec2& x : a.points()) out.insert(apply(a.ctx(), g, x));
  return out;
}

double rotated_spectrum_check(const PointSet& a, const Rotation& g) {
  const RingCtx& ctx = a.ctx();
  const SpectralTable fa = dft(ComplexGrid::indicator(a));
  const SpectralTable fga = dft(ComplexGrid::indicator(rotate_set(a, g)));
  const Rotation ginv = invert(ctx, g);
  double worst = 0.0;
  for (PointIndex i = 0; i < ctx.num_points(); ++i) {
    const Vec2 m = ctx.point(i);
    worst = std::max(worst, std::abs(fga[i] - fa.at(apply(ctx, ginv, m))));
  }
  return worst;
}

}  // namespace padic
