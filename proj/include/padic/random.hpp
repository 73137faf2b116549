#pragma once

#include <cstdint>
#include <random>

#include "padic/rational.hpp"
#include "padic/ring.hpp"

namespace padic {

using Rng = std::mt19937_64;

/// Independent stream for (seed, stream) via a SplitMix64 mix, so sweeps can
/// hand each instance its own generator regardless of evaluation order.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Bernoulli(density) membership per point; the realized size is whatever
/// comes out (no rejection to hit the density exactly).
PointSet random_point_set(const RingCtx& ctx, const Rational& density, Rng& rng);

/// Uniform in [0, n).
std::uint64_t uniform_below(Rng& rng, std::uint64_t n);

}  // namespace padic
