#pragma once

// Normalized discrete Fourier analysis on (Z/p^rZ)^2.
//
//   f^(m)  = p^{-2r} sum_x chi(-m.x) f(x),   chi(t) = exp(2 pi i t / p^r)
//   f(x)   = sum_m f^(m) chi(m.x)
//   (f dsigma_V)^v(y) = |V|^{-1} sum_{x in V} f(x) chi(y.x)
//
// Grids are dense and indexed by RingCtx::index. Countable quantities
// (energies, difference tables) are computed in exact integers.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "padic/ring.hpp"
#include "padic/rotation.hpp"

namespace padic {

using Complex = std::complex<double>;

/// A function (Z/p^rZ)^2 -> C.
struct ComplexGrid {
  RingCtx ctx;
  std::vector<Complex> values;

  explicit ComplexGrid(const RingCtx& c) : ctx(c), values(c.num_points()) {}
  static ComplexGrid indicator(const PointSet& set);

  Complex& operator[](PointIndex i) { return values[i]; }
  const Complex& operator[](PointIndex i) const { return values[i]; }
};

/// Frequency-side table holding f^ with the p^{-2r} forward factor.
struct SpectralTable {
  RingCtx ctx;
  std::vector<Complex> values;

  explicit SpectralTable(const RingCtx& c) : ctx(c), values(c.num_points()) {}

  Complex& operator[](PointIndex i) { return values[i]; }
  const Complex& operator[](PointIndex i) const { return values[i]; }
  Complex at(Vec2 m) const { return values[ctx.index(m)]; }
};

/// chi(t) for t in [0, p^r), tabulated once per ring.
class CharacterTable {
 public:
  explicit CharacterTable(const RingCtx& ctx);
  Complex operator()(Residue t) const { return roots_[t % roots_.size()]; }

 private:
  std::vector<Complex> roots_;
};

/// exp(2 pi i t / p^r).
Complex character(const RingCtx& ctx, Residue t);

/// Row-column evaluation with naive 1-D transforms of length p^r; O(p^{3r}).
SpectralTable dft(const ComplexGrid& f);
ComplexGrid idft(const SpectralTable& F);

/// Relative gap between the two sides of Plancherel; 0 for f = 0.
double plancherel_gap(const ComplexGrid& f);

/// sum_alpha chi(beta.alpha), decided by exact counting: beta.alpha is
/// equidistributed over the ideal p^{v_beta} Z/p^r Z, whose p^{r-v_beta}
/// roots of unity cancel unless beta = 0. Returns p^{2r} or 0.
std::uint64_t orthogonality_sum_exact(const RingCtx& ctx, Vec2 beta);
/// The same sum in floating point.
Complex orthogonality_sum_float(const RingCtx& ctx, Vec2 beta);

/// Values of f on V, aligned with orbit.points.
ComplexGrid extension(const RingCtx& ctx, const Orbit& orbit, std::span<const Complex> f);

/// sum_y |E(y)|^4 in index order.
double l4_sum(const ComplexGrid& e);

/// sum over xi - eta = xi' - eta' of f(xi) f(xi') conj(f(eta) f(eta')),
/// evaluated as sum_z |sum_{xi - eta = z} f(xi) conj(f(eta))|^2.
Complex energy_quadruples(const RingCtx& ctx, const Orbit& orbit, std::span<const Complex> f);
/// Exact version for integer-valued f.
std::int64_t energy_quadruples_exact(const RingCtx& ctx, const Orbit& orbit,
                                     std::span<const std::int64_t> f);

/// counts[d] = #{(a, b) in A x B : a - b = d}.
struct DifferenceTable {
  std::vector<std::uint64_t> counts;
  std::uint64_t support = 0;  // |A - B|
  std::uint64_t total = 0;    // |A||B|
};

DifferenceTable difference_count_table(const PointSet& a, const PointSet& b);

/// |A - B| only; cheaper than the full table.
std::uint64_t difference_set_size(const PointSet& a, const PointSet& b);

PointSet rotate_set(const PointSet& a, const Rotation& g);

/// max_m |(gA)^(m) - A^(g^{-1} m)|.
double rotated_spectrum_check(const PointSet& a, const Rotation& g);

}  // namespace padic
