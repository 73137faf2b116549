#include "padic/estimates.hpp"

#include <cmath>

#include "padic/error.hpp"
#include "padic/random.hpp"

namespace padic {

const char* estimate_kind_name(EstimateKind k) {
  switch (k) {
    case EstimateKind::Restriction: return "restriction";
    case EstimateKind::Dual: return "dual";
    case EstimateKind::WeightedSum: return "weighted_sum";
  }
  return "?";
}

double restriction_exponent(const RingCtx& ctx, const Orbit& orbit) {
  const double r = ctx.r(), v = orbit.v_m;
  if (branch_of(ctx, orbit) == Branch::OneModFourIsotropic) return -(r - 3 * v) / 2;
  return -(r - 3 * v + 1) / 2;
}

double dual_exponent(const RingCtx& ctx, const Orbit& orbit) {
  const double r = ctx.r(), v = orbit.v_m;
  if (branch_of(ctx, orbit) == Branch::OneModFourIsotropic) return -(5 * r + v) / 2;
  return -(5 * r + v + 1) / 2;
}

namespace {

EstimateReport base_report(EstimateKind kind, const RingCtx& ctx, const Orbit& orbit, std::string family) {
  EstimateReport rep;
  rep.kind = kind;
  rep.p = ctx.p();
  rep.r = ctx.r();
  rep.m = orbit.base;
  rep.v_m = orbit.v_m;
  rep.branch = branch_of(ctx, orbit);
  rep.family = std::move(family);
  return rep;
}

}  // namespace

EstimateReport restriction_ratio(const RingCtx& ctx, const Orbit& orbit, std::span<const Complex> f,
                                 std::string family) {
  EstimateReport rep = base_report(EstimateKind::Restriction, ctx, orbit, std::move(family));
  double mass = 0.0;
  for (const Complex& v : f) mass += std::norm(v);
  rep.rhs = std::pow(static_cast<double>(ctx.p()), restriction_exponent(ctx, orbit)) * mass;
  if (mass == 0.0) return rep;
  rep.lhs = std::sqrt(l4_sum(extension(ctx, orbit, f)));
  rep.ratio = rep.lhs / rep.rhs;
  return rep;
}

EstimateReport dual_ratio(const SpectralTable& e_hat, std::uint64_t e_size, const Orbit& orbit,
                          std::string family) {
  if (e_size == 0) throw EmptySet("dual estimate needs a nonempty set");
  const RingCtx& ctx = e_hat.ctx;
  EstimateReport rep = base_report(EstimateKind::Dual, ctx, orbit, std::move(family));
  for (const Vec2& x : orbit.points) rep.lhs += std::norm(e_hat.at(x));
  rep.rhs = std::pow(static_cast<double>(ctx.p()), dual_exponent(ctx, orbit)) *
            std::pow(static_cast<double>(e_size), 1.5);
  rep.ratio = rep.lhs / rep.rhs;
  return rep;
}

EstimateReport dual_ratio(const PointSet& e, const Orbit& orbit, std::string family) {
  if (e.empty()) throw EmptySet("dual estimate needs a nonempty set");
  return dual_ratio(dft(ComplexGrid::indicator(e)), e.size(), orbit, std::move(family));
}

std::vector<std::uint32_t> orbit_lookup(const RingCtx& ctx, const std::vector<Orbit>& orbits) {
  std::vector<std::uint32_t> lookup(ctx.num_points(), ~std::uint32_t{0});
  for (std::uint32_t k = 0; k < orbits.size(); ++k) {
    for (const Vec2& x : orbits[k].points) lookup[ctx.index(x)] = k;
  }
  return lookup;
}

EstimateReport weighted_frequency_sum(const PointSet& a, const PointSet& b,
                                      const std::vector<Orbit>& orbits, std::string family) {
  if (a.empty() || b.empty()) throw EmptySet("weighted frequency sum needs nonempty A and B");
  const RingCtx& ctx = a.ctx();
  const SpectralTable fa = dft(ComplexGrid::indicator(a));
  const SpectralTable fb = dft(ComplexGrid::indicator(b));
  const auto lookup = orbit_lookup(ctx, orbits);

  std::vector<double> b_mass_sq(orbits.size(), 0.0), b_mass_abs(orbits.size(), 0.0);
  for (std::size_t k = 0; k < orbits.size(); ++k) {
    for (const Vec2& x : orbits[k].points) {
      b_mass_sq[k] += std::norm(fb.at(x));
      b_mass_abs[k] += std::abs(fb.at(x));
    }
  }

  EstimateReport rep;
  rep.kind = EstimateKind::WeightedSum;
  rep.p = ctx.p();
  rep.r = ctx.r();
  rep.branch = ctx.one_mod_four() ? Branch::OneModFourUnit : Branch::ThreeModFour;
  rep.family = std::move(family);
  for (PointIndex i = 1; i < ctx.num_points(); ++i) {
    const std::uint32_t k = lookup[i];
    const double weight = ctx.pow_p(orbits[k].v_m);
    rep.lhs += weight * std::norm(fa[i]) * b_mass_sq[k];
    rep.lhs_linear += weight * std::abs(fa[i]) * b_mass_abs[k];
  }
  const double p = ctx.p(), r = ctx.r();
  const double exponent = ctx.one_mod_four() ? -4 * r - 0.5 : -4 * r - 1;
  rep.rhs = std::pow(p, exponent) * static_cast<double>(a.size()) * std::pow(static_cast<double>(b.size()), 1.5);
  rep.ratio = rep.lhs / rep.rhs;
  rep.ratio_linear = rep.lhs_linear / rep.rhs;
  return rep;
}

namespace {

void record(EstimateSweepResult& out, EstimateReport rep) {
  auto& kind_max = out.max_ratio[rep.kind];
  kind_max = std::max(kind_max, rep.ratio);
  auto& branch_max = out.max_ratio_by_branch[{rep.kind, rep.branch}];
  branch_max = std::max(branch_max, rep.ratio);
  out.rows.push_back(std::move(rep));
}

// Streams keep every random family independent of loop order.
enum Stream : std::uint64_t { kIndicator = 1, kSigns, kDual, kWeightedSum };

}  // namespace

EstimateSweepResult estimate_sweep(const EstimateSweepConfig& cfg) {
  const RingCtx ctx(cfg.p, cfg.r);
  const RotationGroup group = RotationGroup::hensel_enumerate(ctx);
  const std::vector<Orbit> orbits = all_orbits(group);
  EstimateSweepResult out;

  for (std::size_t k = 0; k < orbits.size(); ++k) {
    const Orbit& o = orbits[k];
    const std::size_t n = o.size();
    std::vector<Complex> f(n, 1.0);
    record(out, restriction_ratio(ctx, o, f, "ones"));
    std::fill(f.begin(), f.end(), 0.0);
    f[0] = 1.0;
    record(out, restriction_ratio(ctx, o, f, "singleton"));
    for (std::uint32_t s = 0; s < cfg.seeds; ++s) {
      const std::uint64_t seed = cfg.seed + s;
      Rng rng = make_rng(seed, kIndicator * 1000003 + k);
      for (auto& v : f) v = static_cast<double>(uniform_below(rng, 2));
      EstimateReport rep = restriction_ratio(ctx, o, f, "indicator");
      rep.seed = seed;
      record(out, std::move(rep));

      Rng sign_rng = make_rng(seed, kSigns * 1000003 + k);
      for (auto& v : f) v = uniform_below(sign_rng, 2) ? 1.0 : -1.0;
      rep = restriction_ratio(ctx, o, f, "signs");
      rep.seed = seed;
      record(out, std::move(rep));
    }
  }

  auto dual_family = [&](const PointSet& e, const std::string& family, std::uint64_t seed) {
    if (e.empty()) return;
    const SpectralTable e_hat = dft(ComplexGrid::indicator(e));
    for (const Orbit& o : orbits) {
      EstimateReport rep = dual_ratio(e_hat, e.size(), o, family);
      rep.seed = seed;
      record(out, std::move(rep));
    }
  };
  {
    PointSet single(ctx);
    single.insert_index(0);
    dual_family(single, "singleton", 0);
    dual_family(PointSet::full(ctx), "plane", 0);
    for (std::uint32_t s = 0; s < cfg.seeds; ++s) {
      const std::uint64_t seed = cfg.seed + s;
      Rng rng = make_rng(seed, kDual);
      dual_family(random_point_set(ctx, Rational(1, 4), rng), "random_1/4", seed);
      dual_family(random_point_set(ctx, Rational(1, 2), rng), "random_1/2", seed);
    }
  }

  {
    PointSet single(ctx);
    single.insert_index(0);
    record(out, weighted_frequency_sum(single, single, orbits, "singletons"));
    record(out, weighted_frequency_sum(PointSet::full(ctx), PointSet::full(ctx), orbits, "planes"));
    const std::pair<Rational, Rational> densities[] = {
        {Rational(1, 4), Rational(1, 4)}, {Rational(1, 2), Rational(1, 2)}, {Rational(1, 4), Rational(3, 4)}};
    for (std::uint32_t s = 0; s < cfg.seeds; ++s) {
      const std::uint64_t seed = cfg.seed + s;
      Rng rng = make_rng(seed, kWeightedSum);
      for (const auto& [da, db] : densities) {
        PointSet a = random_point_set(ctx, da, rng);
        PointSet b = random_point_set(ctx, db, rng);
        if (a.empty() || b.empty()) continue;
        EstimateReport rep =
            weighted_frequency_sum(a, b, orbits, "random_" + da.to_string() + "_" + db.to_string());
        rep.seed = seed;
        record(out, std::move(rep));
      }
    }
  }
  return out;
}

double log_log_slope(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(xs[i]);
    my += std::log(ys[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(xs[i]) - mx;
    sxy += dx * (std::log(ys[i]) - my);
    sxx += dx * dx;
  }
  return sxx == 0 ? 0.0 : sxy / sxx;
}

}  // namespace padic
