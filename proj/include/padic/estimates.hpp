#pragma once

// Numerical checks of the orbit restriction/extension estimates, their dual
// forms, and the weighted frequency-sum corollaries. None of these carry an
// explicit constant, so every check reports lhs / rhs with the constant
// omitted and the sweeps record empirical maxima.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "padic/fourier.hpp"
#include "padic/rotation.hpp"

namespace padic {

enum class EstimateKind { Restriction, Dual, WeightedSum };

const char* estimate_kind_name(EstimateKind k);

struct EstimateReport {
  EstimateKind kind = EstimateKind::Restriction;
  std::uint32_t p = 0;
  std::uint32_t r = 0;
  /// Orbit base; unused (zero) for weighted-sum rows.
  Vec2 m;
  std::uint32_t v_m = 0;
  /// Weighted-sum rows use ThreeModFour / OneModFourUnit to mean "by residue class".
  Branch branch = Branch::ThreeModFour;
  std::string family;
  std::uint64_t seed = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  /// Weighted-sum only: the first-power variant sum p^v |A^(m)| |B^(m')|.
  double lhs_linear = 0.0;
  double ratio_linear = 0.0;
};

/// Exponent e in rhs = p^e sum |f|^2: -(r - 3v + 1)/2, or -(r - 3v)/2 on the
/// isotropic branch.
double restriction_exponent(const RingCtx& ctx, const Orbit& orbit);

/// Exponent e in rhs = p^e |E|^{3/2}: -(5r + v + 1)/2, or -(5r + v)/2 on the
/// isotropic branch.
double dual_exponent(const RingCtx& ctx, const Orbit& orbit);

/// lhs = (sum_x |(f dsigma_V)^v(x)|^4)^{1/2}, with f aligned to orbit.points.
/// The ratio is 0 for f = 0.
EstimateReport restriction_ratio(const RingCtx& ctx, const Orbit& orbit, std::span<const Complex> f,
                                 std::string family = {});

/// lhs = sum_{x in V} |E^(x)|^2. Throws EmptySet for E = {}.
EstimateReport dual_ratio(const PointSet& e, const Orbit& orbit, std::string family = {});
/// Same, with the transform of E supplied by the caller.
EstimateReport dual_ratio(const SpectralTable& e_hat, std::uint64_t e_size, const Orbit& orbit,
                          std::string family = {});

/// Point index -> position in the orbit list.
std::vector<std::uint32_t> orbit_lookup(const RingCtx& ctx, const std::vector<Orbit>& orbits);

/// lhs = sum_{m != 0} sum_{m' in V_m} p^{v_m} |A^(m)|^2 |B^(m')|^2, against
/// p^{-4r-1}|A||B|^{3/2} (p = 3 mod 4) or p^{-4r-1/2}|A||B|^{3/2} (p = 1 mod 4).
/// Throws EmptySet if either set is empty.
EstimateReport weighted_frequency_sum(const PointSet& a, const PointSet& b,
                                      const std::vector<Orbit>& orbits, std::string family = {});

struct EstimateSweepConfig {
  std::uint32_t p = 3;
  std::uint32_t r = 1;
  std::uint64_t seed = 1;
  std::uint32_t seeds = 20;
};

struct EstimateSweepResult {
  std::vector<EstimateReport> rows;
  std::map<EstimateKind, double> max_ratio;
  std::map<std::pair<EstimateKind, Branch>, double> max_ratio_by_branch;
};

/// All orbits, f in {ones, singleton, random indicators, random signs};
/// E in {singleton, plane, random densities}; (A, B) likewise.
EstimateSweepResult estimate_sweep(const EstimateSweepConfig& cfg);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> xs, std::span<const double> ys);

}  // namespace padic
