#include "padic/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "padic/error.hpp"
#include "padic/estimates.hpp"
#include "padic/experiments.hpp"
#include "padic/fourier.hpp"
#include "padic/incidence.hpp"
#include "padic/parallel.hpp"
#include "padic/random.hpp"
#include "padic/ring.hpp"
#include "padic/rotation.hpp"

namespace padic::cli {

namespace {

std::string u64(std::uint64_t v) { return std::to_string(v); }

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i];
  }
  return out;
}

Report base_report(const std::string& name, const Options& o) {
  Report rep;
  rep.subcommand = name;
  rep.seed = o.seed;
  rep.config = {{"p", u64(o.p)}, {"r", u64(o.r)}, {"seed", u64(o.seed)}, {"ceiling", format_double(o.ceiling)}};
  return rep;
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Complex random_complex(Rng& rng) { return {2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0}; }

}  // namespace

// ----------------------------------------------------------------- group

Report run_group(const Options& o) {
  const RingCtx ctx(o.p, o.r);
  Report rep = base_report("group", o);
  const RotationGroup group = RotationGroup::hensel_enumerate(ctx);
  const std::uint64_t formula = group_order_formula(ctx);
  const std::uint64_t n = ctx.num_points();

  // brute force is a scan over q^2 pairs, fine up to the plane cap
  const RotationGroup brute = RotationGroup::brute_enumerate(ctx);
  const bool same = brute.elements() == group.elements();

  rep.check("order_formula", group.order() == formula,
            "order " + u64(group.order()) + ", formula " + u64(formula));
  rep.check("hensel_equals_brute", same,
            "hensel " + u64(group.order()) + ", brute " + u64(brute.order()));
  rep.check("contains_identity", group.contains(Rotation{}));

  const auto& els = group.elements();
  std::vector<std::uint8_t> closed(els.size(), 1), inverse_ok(els.size(), 1), norm_ok(els.size(), 1);
  const bool full_norm_scan = static_cast<double>(els.size()) * static_cast<double>(n) <= 2e7;
  std::vector<Vec2> probe;
  if (!full_norm_scan) {
    Rng rng = make_rng(o.seed, 0x6e);
    for (int k = 0; k < 256; ++k) probe.push_back(ctx.point(static_cast<PointIndex>(uniform_below(rng, n))));
  }
  parallel_for(els.size(), [&](std::size_t i) {
    const Rotation g = els[i];
    for (const Rotation& h : els) {
      if (!group.contains(compose(ctx, g, h))) {
        closed[i] = 0;
        break;
      }
    }
    inverse_ok[i] = group.contains(invert(ctx, g)) && compose(ctx, g, invert(ctx, g)) == Rotation{};
    auto norm_preserved = [&](Vec2 x) { return ctx.norm(apply(ctx, g, x)) == ctx.norm(x); };
    if (full_norm_scan) {
      for (PointIndex k = 0; k < n && norm_ok[i]; ++k) norm_ok[i] = norm_preserved(ctx.point(k));
    } else {
      for (const Vec2& x : probe) norm_ok[i] = norm_ok[i] && norm_preserved(x);
    }
  });
  auto all = [](const std::vector<std::uint8_t>& v) { return std::all_of(v.begin(), v.end(), [](auto b) { return b; }); };
  rep.check("closure", all(closed));
  rep.check("inverses", all(inverse_ok));
  rep.check("norm_invariance", all(norm_ok), full_norm_scan ? "all points" : "256 sampled points");

  rep.rows.push_back(Row()
                         .add("row_type", "summary")
                         .add("p", ctx.p())
                         .add("r", ctx.r())
                         .add("residue_class", ctx.one_mod_four() ? "1 mod 4" : "3 mod 4")
                         .add("order", Cell{group.order()})
                         .add("order_formula", Cell{formula})
                         .add("brute_order", Cell{brute.order()})
                         .add("hensel_equals_brute", Cell{same}));
  for (const Rotation& g : els) {
    rep.rows.push_back(Row().add("row_type", "element").add("a", g.a).add("b", g.b));
  }
  return rep;
}

// ----------------------------------------------------------------- orbit

namespace {

// p^v C_{||m~||, r-v} for p = 3 mod 4, p^v orb_{r-v}(m~) for p = 1 mod 4.
std::vector<PointIndex> predicted_orbit(const RingCtx& ctx, Vec2 m) {
  const ReducedVec red = vec_reduce(ctx, m);
  const std::uint32_t s = ctx.r() - red.v;
  const RingCtx small(ctx.p(), s);
  const std::uint32_t pv = ctx.pow_p(red.v);
  std::vector<Vec2> base;
  if (!ctx.one_mod_four()) {
    base = circle(small, small.norm(*red.tilde)).points();
  } else {
    base = orbit(RotationGroup::hensel_enumerate(small), *red.tilde).points;
  }
  std::vector<PointIndex> out;
  for (const Vec2& c : base) out.push_back(ctx.index({pv * c.x1, pv * c.x2}));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Report run_orbit(const Options& o) {
  const RingCtx ctx(o.p, o.r);
  Report rep = base_report("orbit", o);
  rep.config.emplace_back("autocorr_ceiling", format_double(o.autocorr_ceiling));
  const RotationGroup group = RotationGroup::hensel_enumerate(ctx);
  const auto orbits = all_orbits(group);

  const bool scan_stabilizers = static_cast<double>(group.order()) * ctx.num_points() <= 2e7;
  bool size_ok = true, stab_ok = true, os_ok = true, struct_ok = true, point_stab_ok = true;
  bool autocorr_total_ok = true, autocorr_zero_ok = true, autocorr_bound_ok = true;
  double worst_autocorr = 0.0;
  std::vector<std::uint8_t> covered(ctx.num_points(), 0);
  bool disjoint = true;

  for (const Orbit& orb : orbits) {
    const std::uint64_t size_f = orbit_size_formula(ctx, orb.v_m);
    const std::uint64_t stab_f = stabilizer_size_formula(ctx, orb.v_m);
    size_ok = size_ok && orb.size() == size_f;
    stab_ok = stab_ok && orb.stabilizer_order == stab_f;
    os_ok = os_ok && orb.size() * orb.stabilizer_order == group.order();

    std::vector<PointIndex> got;
    for (const Vec2& x : orb.points) got.push_back(ctx.index(x));
    const bool matches = got == predicted_orbit(ctx, orb.base);
    struct_ok = struct_ok && matches;

    for (PointIndex i : got) {
      if (covered[i]) disjoint = false;
      covered[i] = 1;
    }

    if (scan_stabilizers) {
      // every point of the orbit has a conjugate stabilizer of the same order
      for (const Vec2& x : orb.points) {
        std::uint64_t fixes = 0;
        for (const Rotation& g : group.elements()) fixes += apply(ctx, g, x) == x;
        point_stab_ok = point_stab_ok && fixes == orb.stabilizer_order;
      }
    }

    const Autocorrelation ac = orbit_autocorrelation(group, orb.base);
    const std::uint64_t total = std::accumulate(ac.counts.begin(), ac.counts.end(), std::uint64_t{0});
    autocorr_total_ok = autocorr_total_ok && total == orb.size() * orb.size();
    autocorr_zero_ok = autocorr_zero_ok && ac.counts[0] == orb.size();
    if (ctx.one_mod_four()) {
      autocorr_bound_ok = autocorr_bound_ok && ac.ratio <= o.autocorr_ceiling;
      worst_autocorr = std::max(worst_autocorr, ac.ratio);
    }

    rep.rows.push_back(Row()
                           .add("m1", orb.base.x1)
                           .add("m2", orb.base.x2)
                           .add("v_m", orb.v_m)
                           .add("branch", branch_name(branch_of(ctx, orb)))
                           .add("reduced_norm_mod_p", orb.reduced_norm_mod_p)
                           .add("orbit_size", Cell{orb.size()})
                           .add("orbit_size_formula", Cell{size_f})
                           .add("stabilizer_order", Cell{orb.stabilizer_order})
                           .add("stabilizer_formula", Cell{stab_f})
                           .add("structure_match", Cell{matches})
                           .add("autocorr_max_nonzero", Cell{ac.max_nonzero})
                           .add("autocorr_bound_shape", Cell{ac.bound_shape})
                           .add("autocorr_ratio", Cell{ac.ratio}));
  }

  const bool covers = std::count(covered.begin(), covered.end(), 1) == static_cast<std::ptrdiff_t>(ctx.num_points() - 1) &&
                      covered[0] == 0;
  rep.check("orbit_size_formula", size_ok);
  rep.check("stabilizer_formula", stab_ok);
  rep.check("orbit_stabilizer_product", os_ok);
  rep.check(ctx.one_mod_four() ? "orbit_equals_scaled_smaller_orbit" : "orbit_equals_scaled_circle", struct_ok);
  rep.check("orbits_partition_nonzero_points", disjoint && covers);
  if (scan_stabilizers) rep.check("pointwise_stabilizers", point_stab_ok);
  rep.check("autocorrelation_total", autocorr_total_ok);
  rep.check("autocorrelation_diagonal", autocorr_zero_ok);
  if (ctx.one_mod_four()) {
    rep.check("autocorrelation_bound", autocorr_bound_ok, "max ratio " + format_double(worst_autocorr));
  }
  return rep;
}

// ----------------------------------------------------------------- fourier

Report run_fourier(const Options& o) {
  const RingCtx ctx(o.p, o.r);
  Report rep = base_report("fourier", o);
  rep.config.emplace_back("trials", u64(o.trials));
  const std::uint64_t n = ctx.num_points();

  // orthogonality: integer side for every beta, float side for every beta
  // unless the plane is large, then on a seeded sample
  std::vector<PointIndex> betas;
  const bool exhaustive = static_cast<double>(n) * static_cast<double>(n) <= 5e7;
  if (exhaustive) {
    betas.resize(n);
    std::iota(betas.begin(), betas.end(), PointIndex{0});
  } else {
    Rng rng = make_rng(o.seed, 0x0f);
    betas.push_back(0);
    for (int k = 0; k < 2000; ++k) betas.push_back(static_cast<PointIndex>(uniform_below(rng, n)));
  }
  std::vector<std::uint8_t> exact_ok(betas.size(), 0);
  std::vector<double> float_err(betas.size(), 0.0);
  parallel_for(betas.size(), [&](std::size_t k) {
    const Vec2 beta = ctx.point(betas[k]);
    const std::uint64_t expected = betas[k] == 0 ? n : 0;
    const std::uint64_t exact = orthogonality_sum_exact(ctx, beta);
    exact_ok[k] = exact == expected;
    float_err[k] = std::abs(orthogonality_sum_float(ctx, beta) - Complex(static_cast<double>(expected), 0.0));
  });
  const double worst_orth = *std::max_element(float_err.begin(), float_err.end());
  rep.check("orthogonality_exact", std::all_of(exact_ok.begin(), exact_ok.end(), [](auto b) { return b; }),
            u64(betas.size()) + " frequencies");
  rep.check("orthogonality_float", worst_orth <= 1e-9, "max error " + format_double(worst_orth));
  rep.rows.push_back(Row()
                         .add("row_type", "orthogonality")
                         .add("frequencies", Cell{std::uint64_t{betas.size()}})
                         .add("exhaustive", Cell{exhaustive})
                         .add("max_float_error", Cell{worst_orth}));

  // Plancherel and inversion on random complex grids
  double worst_planch = 0.0, worst_inv = 0.0;
  for (std::uint32_t t = 0; t < o.trials; ++t) {
    Rng rng = make_rng(o.seed + t, 0x9a);
    ComplexGrid f(ctx);
    for (auto& v : f.values) v = random_complex(rng);
    const double gap = plancherel_gap(f);
    const ComplexGrid back = idft(dft(f));
    double inv = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      inv = std::max(inv, std::abs(back.values[i] - f.values[i]));
      scale = std::max(scale, std::abs(f.values[i]));
    }
    inv /= std::max(scale, 1e-300);
    worst_planch = std::max(worst_planch, gap);
    worst_inv = std::max(worst_inv, inv);
    rep.rows.push_back(Row()
                           .add("row_type", "plancherel")
                           .add("seed", Cell{o.seed + t})
                           .add("plancherel_gap", Cell{gap})
                           .add("inversion_gap", Cell{inv}));
  }
  rep.check("plancherel", worst_planch <= 1e-9, "max gap " + format_double(worst_planch));
  rep.check("inversion", worst_inv <= 1e-9, "max gap " + format_double(worst_inv));

  // energy identity on every orbit
  const RotationGroup group = RotationGroup::hensel_enumerate(ctx);
  const auto orbits = all_orbits(group);
  double worst_energy = 0.0;
  bool exact_energy_ok = true;
  for (std::size_t k = 0; k < orbits.size(); ++k) {
    const Orbit& orb = orbits[k];
    Rng rng = make_rng(o.seed, 0xe0000 + k);
    std::vector<std::pair<std::string, std::vector<std::int64_t>>> families;
    families.emplace_back("ones", std::vector<std::int64_t>(orb.size(), 1));
    std::vector<std::int64_t> ind(orb.size()), sgn(orb.size());
    for (auto& v : ind) v = static_cast<std::int64_t>(uniform_below(rng, 2));
    if (std::all_of(ind.begin(), ind.end(), [](auto v) { return v == 0; })) ind[0] = 1;
    for (auto& v : sgn) v = uniform_below(rng, 2) ? 1 : -1;
    families.emplace_back("indicator", std::move(ind));
    families.emplace_back("signs", std::move(sgn));
    for (const auto& [family, fi] : families) {
      std::vector<Complex> fc(fi.begin(), fi.end());
      const double lhs = l4_sum(extension(ctx, orb, fc));
      const Complex energy = energy_quadruples(ctx, orb, fc);
      const std::int64_t energy_exact = energy_quadruples_exact(ctx, orb, fi);
      const double v4 = std::pow(static_cast<double>(orb.size()), 4);
      const double rhs = static_cast<double>(n) / v4 * energy.real();
      const double rel = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
      const bool exact_match = std::abs(energy - Complex(static_cast<double>(energy_exact), 0.0)) <=
                               1e-9 * std::max(1.0, static_cast<double>(energy_exact));
      exact_energy_ok = exact_energy_ok && exact_match;
      worst_energy = std::max(worst_energy, rel);
      rep.rows.push_back(Row()
                             .add("row_type", "energy")
                             .add("m1", orb.base.x1)
                             .add("m2", orb.base.x2)
                             .add("v_m", orb.v_m)
                             .add("family", family)
                             .add("l4_sum", Cell{lhs})
                             .add("energy", Cell{energy_exact})
                             .add("scaled_energy", Cell{rhs})
                             .add("relative_gap", Cell{rel}));
    }
  }
  rep.check("energy_identity", worst_energy <= 1e-6, "max relative gap " + format_double(worst_energy));
  rep.check("energy_exact_agrees", exact_energy_ok);

  // rotating a set rotates its spectrum
  double worst_rot = 0.0;
  {
    Rng rng = make_rng(o.seed, 0x70);
    const PointSet a = random_point_set(ctx, Rational(1, 2), rng);
    const auto& els = group.elements();
    const std::size_t step = std::max<std::size_t>(1, els.size() / 8);
    for (std::size_t k = 0; k < els.size(); k += step) {
      worst_rot = std::max(worst_rot, rotated_spectrum_check(a, els[k]));
    }
  }
  rep.check("rotated_spectrum", worst_rot <= 1e-9, "max error " + format_double(worst_rot));
  return rep;
}

// ----------------------------------------------------------------- restriction

namespace {

Row estimate_row(const EstimateReport& e) {
  Row row;
  row.add("row_type", "instance")
      .add("kind", estimate_kind_name(e.kind))
      .add("p", e.p)
      .add("r", e.r)
      .add("m1", e.m.x1)
      .add("m2", e.m.x2)
      .add("v_m", e.v_m)
      .add("branch", e.kind == EstimateKind::WeightedSum ? (e.branch == Branch::ThreeModFour ? "p3" : "p1")
                                                       : branch_name(e.branch))
      .add("family", e.family)
      .add("seed", Cell{e.seed})
      .add("lhs", Cell{e.lhs})
      .add("rhs", Cell{e.rhs})
      .add("ratio", Cell{e.ratio});
  if (e.kind == EstimateKind::WeightedSum) {
    row.add("lhs_linear", Cell{e.lhs_linear}).add("ratio_linear", Cell{e.ratio_linear});
  }
  return row;
}

}  // namespace

Report run_restriction(const Options& o) {
  const RingCtx ctx(o.p, o.r);
  Report rep = base_report("restriction", o);
  rep.config.emplace_back("trials", u64(o.trials));
  std::vector<std::string> tp;
  for (auto q : o.trend_primes) tp.push_back(u64(q));
  rep.config.emplace_back("trend_primes", join(tp));

  const EstimateSweepResult sweep = estimate_sweep({ctx.p(), ctx.r(), o.seed, o.trials});
  for (const EstimateReport& e : sweep.rows) rep.rows.push_back(estimate_row(e));
  for (const auto& [kind, mx] : sweep.max_ratio) {
    rep.rows.push_back(Row()
                           .add("row_type", "max_by_kind")
                           .add("kind", estimate_kind_name(kind))
                           .add("p", ctx.p())
                           .add("r", ctx.r())
                           .add("ratio", Cell{mx}));
    rep.check(std::string("max_ratio_") + estimate_kind_name(kind), mx <= o.ceiling,
              "max " + format_double(mx) + ", ceiling " + format_double(o.ceiling));
  }
  for (const auto& [key, mx] : sweep.max_ratio_by_branch) {
    rep.rows.push_back(Row()
                           .add("row_type", "max_by_branch")
                           .add("kind", estimate_kind_name(key.first))
                           .add("p", ctx.p())
                           .add("r", ctx.r())
                           .add("branch", key.first == EstimateKind::WeightedSum
                                              ? (key.second == Branch::ThreeModFour ? "p3" : "p1")
                                              : branch_name(key.second))
                           .add("ratio", Cell{mx}));
  }

  if (!o.trend_primes.empty()) {
    std::map<EstimateKind, std::vector<double>> ys;
    std::vector<double> xs;
    for (std::uint32_t q : o.trend_primes) {
      const EstimateSweepResult s = estimate_sweep({q, 1, o.seed, o.trials});
      xs.push_back(static_cast<double>(q));
      for (const auto& [kind, mx] : s.max_ratio) {
        ys[kind].push_back(mx);
        rep.rows.push_back(Row()
                               .add("row_type", "trend_point")
                               .add("kind", estimate_kind_name(kind))
                               .add("p", q)
                               .add("r", 1)
                               .add("ratio", Cell{mx}));
      }
    }
    if (xs.size() >= 2) {
      for (const auto& [kind, y] : ys) {
        const double slope = log_log_slope(xs, y);
        rep.rows.push_back(
            Row().add("row_type", "trend_slope").add("kind", estimate_kind_name(kind)).add("slope", Cell{slope}));
        rep.check(std::string("slope_") + estimate_kind_name(kind), slope <= 0.2,
                  "slope " + format_double(slope) + ", limit 0.2");
      }
    }
  }
  return rep;
}

// ----------------------------------------------------------------- incidence

namespace {

PointSet random_subset_of_size(const RingCtx& ctx, std::uint64_t size, Rng& rng) {
  const std::uint64_t n = ctx.num_points();
  std::set<std::uint64_t> chosen;
  for (std::uint64_t j = n - size; j < n; ++j) {
    const std::uint64_t t = uniform_below(rng, j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  PointSet out(ctx);
  for (std::uint64_t i : chosen) out.insert_index(static_cast<PointIndex>(i));
  return out;
}

}  // namespace

Report run_incidence(const Options& o) {
  const RingCtx ctx(o.p, o.r);
  Report rep = base_report("incidence", o);
  rep.config.emplace_back("delta_a", o.delta_a.to_string());
  rep.config.emplace_back("delta_b", o.delta_b.to_string());
  rep.config.emplace_back("trials", u64(o.trials));
  rep.config.emplace_back("r_size", o.r_size ? u64(*o.r_size) : "auto");

  const RotationGroup group = RotationGroup::hensel_enumerate(ctx);
  const std::uint64_t n = ctx.num_points();
  const std::uint64_t motions_total = group.order() * n;
  const std::uint64_t r_size = std::min(motions_total, o.r_size ? *o.r_size : std::max<std::uint64_t>(1, motions_total / 8));
  const bool full_identity = motions_total <= 4000000;
  const RigidMotionSet full = full_identity ? RigidMotionSet::full(group) : RigidMotionSet(ctx);

  bool identity_ok = true, oracle_ok = true, fourier_ok = true, b95_ok = true, b94_ok = true;
  bool improvement_ok = true, crossover_ok = true;
  double worst_fourier = 0.0, worst95 = 0.0, worst94 = 0.0;
  std::uint64_t oracle_runs = 0, fourier_runs = 0;

  // random densities, a few small-B instances with |B| = p, one with B the
  // whole plane and for p = 1 mod 4 one at the crossover |B| = p^{2r-1}
  struct Instance {
    std::string family;
    std::uint64_t seed;
  };
  std::vector<Instance> plan;
  for (std::uint32_t t = 0; t < o.trials; ++t) plan.push_back({"random", o.seed + t});
  for (std::uint32_t t = 0; t < std::max<std::uint32_t>(1, o.trials / 4); ++t) plan.push_back({"small_b", o.seed + t});
  plan.push_back({"full_b", o.seed});
  if (ctx.one_mod_four()) plan.push_back({"crossover_b", o.seed});

  for (const Instance& inst : plan) {
    const std::uint64_t stream = inst.family == "random"    ? 0x1c0
                                 : inst.family == "small_b" ? 0x1c1
                                 : inst.family == "full_b"  ? 0x1c2
                                                            : 0x1c3;
    Rng rng = make_rng(inst.seed, stream);
    PointSet a = random_point_set(ctx, o.delta_a, rng);
    if (a.empty()) a.insert_index(static_cast<PointIndex>(uniform_below(rng, n)));
    PointSet b(ctx);
    if (inst.family == "random") {
      b = random_point_set(ctx, o.delta_b, rng);
      if (b.empty()) b.insert_index(static_cast<PointIndex>(uniform_below(rng, n)));
    } else if (inst.family == "small_b") {
      b = random_subset_of_size(ctx, ctx.p(), rng);
    } else if (inst.family == "crossover_b") {
      b = random_subset_of_size(ctx, n / ctx.p(), rng);
    } else {
      b = PointSet::full(ctx);
    }
    const RigidMotionSet motions = RigidMotionSet::random(group, r_size, rng);
    const IncidenceReport ir = incidence_report(a, b, motions);

    Row row;
    row.add("family", inst.family)
        .add("seed", Cell{inst.seed})
        .add("size_a", Cell{ir.size_a})
        .add("size_b", Cell{ir.size_b})
        .add("size_r", Cell{ir.size_r})
        .add("incidences", Cell{ir.incidences})
        .add("main_term", Cell{ir.main_term.to_double()})
        .add("deviation", Cell{ir.deviation});

    if (full_identity) {
      const std::uint64_t i_full = incidence_count(a, b, full);
      const bool ok = i_full == ir.size_a * ir.size_b * group.order();
      identity_ok = identity_ok && ok;
      row.add("full_r_identity", Cell{ok});
    }
    if (static_cast<double>(ir.size_r) * ir.size_a * ir.size_b <= 2e7) {
      const bool ok = incidence_count_definitional(a, b, motions) == ir.incidences;
      oracle_ok = oracle_ok && ok;
      ++oracle_runs;
      row.add("definitional_match", Cell{ok});
    }
    if (static_cast<double>(n) * ir.size_r <= 5e7) {
      const Complex ii = fourier_deviation(a, b, motions);
      const double reconstructed = ir.main_term.to_double() + ii.real();
      const double gap = std::abs(reconstructed - static_cast<double>(ir.incidences)) + std::abs(ii.imag());
      const double rel = gap / std::max(1.0, static_cast<double>(ir.incidences));
      worst_fourier = std::max(worst_fourier, rel);
      fourier_ok = fourier_ok && rel <= 1e-6;
      ++fourier_runs;
      row.add("fourier_term", Cell{ii.real()}).add("fourier_gap", Cell{rel});
    }

    b95_ok = b95_ok && ir.ratio_95 <= o.ceiling;
    b94_ok = b94_ok && ir.ratio_94 <= o.ceiling;
    worst95 = std::max(worst95, ir.ratio_95);
    worst94 = std::max(worst94, ir.ratio_94);
    // the refined bound wins below |B| = p^{2r} (p = 3 mod 4) or p^{2r-1}
    const std::uint64_t b_crossover = ctx.one_mod_four() ? n / ctx.p() : n;
    if (ir.size_b < b_crossover) {
      improvement_ok = improvement_ok && ir.bound_94 < ir.bound_95;
    } else if (ir.size_b == b_crossover) {
      crossover_ok = crossover_ok && std::abs(ir.bound_94 - ir.bound_95) <= 1e-9 * ir.bound_95;
    }
    row.add("bound_95", Cell{ir.bound_95})
        .add("bound_94", Cell{ir.bound_94})
        .add("ratio_95", Cell{ir.ratio_95})
        .add("ratio_94", Cell{ir.ratio_94});
    rep.rows.push_back(std::move(row));
  }

  if (full_identity) rep.check("full_motion_set_identity", identity_ok);
  if (oracle_runs) rep.check("definitional_oracle", oracle_ok, u64(oracle_runs) + " instances");
  if (fourier_runs) {
    rep.check("fourier_decomposition", fourier_ok,
              u64(fourier_runs) + " instances, max relative gap " + format_double(worst_fourier));
  }
  rep.check("deviation_bound_general", b95_ok, "max ratio " + format_double(worst95));
  rep.check("deviation_bound_refined", b94_ok, "max ratio " + format_double(worst94));
  rep.check("refined_bound_improves_below_crossover", improvement_ok);
  rep.check("bounds_meet_at_crossover", crossover_ok);
  return rep;
}

// ----------------------------------------------------------------- mattila

Report run_mattila(const Options& o) {
  const RingCtx ctx(o.p, o.r);
  Report rep = base_report("mattila", o);
  rep.config.emplace_back("delta_a", o.delta_a.to_string());
  rep.config.emplace_back("delta_b", o.delta_b.to_string());
  rep.config.emplace_back("trials", u64(o.trials));
  rep.config.emplace_back("g_sample", o.g_sample ? u64(*o.g_sample) : "all");
  rep.config.emplace_back("c", o.c.to_string());
  rep.config.emplace_back("prune", o.prune ? "true" : "false");

  const RotationGroup group = RotationGroup::hensel_enumerate(ctx);
  const std::uint64_t n = ctx.num_points();
  const bool p1 = ctx.one_mod_four();
  bool proportion_ok = true, bad_ok = true, consistency_ok = true, density_fact_ok = true;
  bool card_ok = true, symmetry_ok = true;
  std::uint32_t qualifying = 0;
  double worst_fraction = 1.0;

  for (std::uint32_t t = 0; t < o.trials; ++t) {
    const std::uint64_t s = o.seed + t;
    Rng rng = make_rng(s, 0x4d);
    PointSet a = random_point_set(ctx, o.delta_a, rng);
    const PointSet b = random_point_set(ctx, o.delta_b, rng);
    if (o.prune) a = prune_nonprimitive(a);
    if (a.empty() || b.empty()) {
      rep.rows.push_back(Row().add("seed", Cell{s}).add("size_a", Cell{a.size()}).add("size_b", Cell{b.size()}).add("skipped", "empty set"));
      continue;
    }
    const TrialReport tr = proportion_good(group, a, b, o.c, GSampling{o.g_sample, s});
    const bool condition = p1 ? tr.product_condition : tr.sqrt_condition;

    if (condition) {
      ++qualifying;
      proportion_ok = proportion_ok && tr.fraction_good >= 0.5;
      worst_fraction = std::min(worst_fraction, tr.fraction_good);
    }
    if (tr.sqrt_condition) density_fact_ok = density_fact_ok && tr.size_a * ctx.p() * ctx.p() >= 4 * n;

    // outside the bad set |gA - B| > p^{2r}/2
    for (std::size_t k = 0; k < tr.rotations.size(); ++k) {
      const bool is_bad = 2 * (n - tr.diff_sizes[k]) >= n;
      if (!is_bad) consistency_ok = consistency_ok && 2 * tr.diff_sizes[k] > n;
    }
    std::uint64_t bad_total = 0;
    if (!o.g_sample) {
      bad_total = bad_set_measure(group, a, b);
      bad_ok = bad_ok && bad_total == tr.bad;
    }

    const std::size_t probes = std::min<std::size_t>(tr.rotations.size(), 4);
    for (std::size_t k = 0; k < probes; ++k) {
      const PointSet ga = rotate_set(a, tr.rotations[k]);
      card_ok = card_ok && ga.size() == a.size();
      symmetry_ok = symmetry_ok && difference_set_size(ga, b) == difference_set_size(b, ga);
    }

    rep.rows.push_back(Row()
                           .add("seed", Cell{s})
                           .add("size_a", Cell{tr.size_a})
                           .add("size_b", Cell{tr.size_b})
                           .add("delta_a", Cell{a.density().to_double()})
                           .add("delta_b", Cell{b.density().to_double()})
                           .add("sqrt_condition", Cell{tr.sqrt_condition})
                           .add("product_condition", Cell{tr.product_condition})
                           .add("rotations", Cell{std::uint64_t{tr.rotations.size()}})
                           .add("good", Cell{tr.good})
                           .add("fraction_good", Cell{tr.fraction_good})
                           .add("bad", Cell{tr.bad})
                           .add("min_diff", Cell{tr.min_diff})
                           .add("max_diff", Cell{tr.max_diff}));
  }

  rep.check("positive_proportion", proportion_ok,
            u64(qualifying) + " qualifying trials, min fraction " + format_double(qualifying ? worst_fraction : 0.0));
  rep.check("bad_set_consistency", consistency_ok);
  if (!o.g_sample) rep.check("bad_set_measure", bad_ok);
  rep.check("density_fact", density_fact_ok);
  rep.check("rotation_cardinality", card_ok);
  rep.check("difference_symmetry", symmetry_ok);
  return rep;
}

// ----------------------------------------------------------------- sharpness

Report run_sharpness(const Options& o) {
  const RingCtx ctx(o.p, o.r);
  Report rep = base_report("sharpness", o);
  const RotationGroup group = RotationGroup::hensel_enumerate(ctx);
  const std::uint32_t p = ctx.p();
  const std::uint64_t layer = ctx.num_points() / (static_cast<std::uint64_t>(p) * p);

  std::vector<std::uint32_t> ms{1, 2, p, p * p}, ns = ms;
  if (o.m) ms = {*o.m};
  if (o.n) ns = {*o.n};
  rep.config.emplace_back("m", o.m ? u64(*o.m) : "grid");
  rep.config.emplace_back("n", o.n ? u64(*o.n) : "grid");
  rep.config.emplace_back("gamma", o.gamma ? o.gamma->to_string() : "1/p,2/p");

  bool sizes_ok = true, card_ok = true, bound_ok = true;
  for (std::uint32_t m : ms) {
    for (std::uint32_t nn : ns) {
      const auto [a, b] = example13_sets(ctx, m, nn, o.seed);
      sizes_ok = sizes_ok && a.size() == m * layer && b.size() == nn * layer;
      std::vector<std::uint64_t> d(group.order()), ga(group.order());
      parallel_for(group.order(), [&](std::size_t k) {
        const PointSet rotated = rotate_set(a, group.elements()[k]);
        ga[k] = rotated.size();
        d[k] = difference_set_size(rotated, b);
      });
      const std::uint64_t cap = static_cast<std::uint64_t>(m) * nn * layer;
      const std::uint64_t mx = *std::max_element(d.begin(), d.end());
      card_ok = card_ok && std::all_of(ga.begin(), ga.end(), [&](auto s) { return s == a.size(); });
      bound_ok = bound_ok && mx <= cap;
      rep.rows.push_back(Row()
                             .add("row_type", "coset")
                             .add("m", m)
                             .add("n", nn)
                             .add("size_a", Cell{a.size()})
                             .add("size_b", Cell{b.size()})
                             .add("max_diff", Cell{mx})
                             .add("bound", Cell{cap}));
    }
  }
  rep.check("coset_sizes", sizes_ok);
  rep.check("rotation_cardinality", card_ok);
  rep.check("coset_difference_bound", bound_ok);

  std::vector<Rational> gammas;
  if (o.gamma) {
    gammas = {*o.gamma};
  } else {
    gammas = {Rational(1, p), Rational(2, p)};
  }
  bool gamma_ok = true;
  for (const Rational& g : gammas) {
    const SharpnessReport sr = sharpness_probe(group, g, o.seed);
    gamma_ok = gamma_ok && sr.holds;
    rep.rows.push_back(Row()
                           .add("row_type", "gamma_probe")
                           .add("gamma", g.to_string())
                           .add("n", sr.n)
                           .add("density_product", Cell{sr.density_product})
                           .add("max_diff", Cell{sr.max_diff})
                           .add("max_diff_fraction", Cell{static_cast<double>(sr.max_diff) / ctx.num_points()})
                           .add("bound", Cell{sr.bound}));
  }
  rep.check("gamma_probe", gamma_ok);

  const auto circle_mod_p = unit_circle_mod_p(ctx);
  std::vector<std::pair<std::string, std::vector<Vec2>>> ys;
  ys.emplace_back("single", std::vector<Vec2>{circle_mod_p.front()});
  ys.emplace_back("half", std::vector<Vec2>(circle_mod_p.begin(), circle_mod_p.begin() + (circle_mod_p.size() + 1) / 2));
  ys.emplace_back("full", circle_mod_p);
  bool circle_c_ok = true, circle_id_ok = true, circle_size_ok = true;
  double worst_c = 0.0;
  for (const auto& [label, y] : ys) {
    const PointSet a = circle_coset_set(ctx, y);
    const std::uint64_t cap = y.size() * y.size() * layer;
    std::vector<std::uint64_t> d(group.order());
    parallel_for(group.order(), [&](std::size_t k) { d[k] = g_difference_size(group.elements()[k], a, a); });
    const std::uint64_t mx = *std::max_element(d.begin(), d.end());
    const std::uint64_t self = difference_set_size(a, a);
    const double constant = static_cast<double>(mx) / static_cast<double>(cap);
    worst_c = std::max(worst_c, constant);
    circle_c_ok = circle_c_ok && constant <= o.ceiling;
    circle_id_ok = circle_id_ok && self <= cap;
    circle_size_ok = circle_size_ok && a.size() == y.size() * layer;
    rep.rows.push_back(Row()
                           .add("row_type", "circle_coset")
                           .add("y", label)
                           .add("y_size", Cell{std::uint64_t{y.size()}})
                           .add("size_a", Cell{a.size()})
                           .add("identity_diff", Cell{self})
                           .add("max_diff", Cell{mx})
                           .add("cap", Cell{cap})
                           .add("constant", Cell{constant}));
  }
  rep.check("circle_coset_size", circle_size_ok);
  rep.check("circle_coset_identity", circle_id_ok);
  rep.check("circle_coset_constant", circle_c_ok, "max C " + format_double(worst_c));
  return rep;
}

// ----------------------------------------------------------------- conjecture

Report run_conjecture(const Options& o) {
  const RingCtx ctx(o.p, o.r);
  Report rep = base_report("conjecture", o);
  std::vector<Rational> deltas = o.deltas;
  if (deltas.empty()) {
    for (const Rational& d : {Rational(2, o.p), Rational(4, o.p), Rational(1, 2), Rational(1)}) {
      if (d <= Rational(1) && std::find(deltas.begin(), deltas.end(), d) == deltas.end()) deltas.push_back(d);
    }
  }
  std::vector<std::string> ds;
  for (const Rational& d : deltas) ds.push_back(d.to_string());
  rep.config.emplace_back("deltas", join(ds));
  rep.config.emplace_back("trials", u64(o.trials));

  const RotationGroup group = RotationGroup::hensel_enumerate(ctx);
  const auto rows = conjecture_sweep(group, deltas, o.seed, o.trials);
  bool range_ok = true, full_ok = true;
  for (const ConjectureRow& row : rows) {
    range_ok = range_ok && row.fraction_good >= 0.0 && row.fraction_good <= 1.0;
    if (row.delta == Rational(1)) full_ok = full_ok && row.fraction_good == 1.0;
    rep.rows.push_back(Row()
                           .add("row_type", "balanced")
                           .add("delta", row.delta.to_string())
                           .add("seed", Cell{row.seed})
                           .add("size_a", Cell{row.size_a})
                           .add("size_b", Cell{row.size_b})
                           .add("fraction_good", Cell{row.fraction_good}));
  }

  // the balanced circle instance, delta = |Y| / p^2
  const auto y = unit_circle_mod_p(ctx);
  const PointSet a = circle_coset_set(ctx, y);
  const TrialReport tr = proportion_good(group, a, a);
  range_ok = range_ok && tr.fraction_good >= 0.0 && tr.fraction_good <= 1.0;
  const std::uint64_t cap = y.size() * y.size() * (ctx.num_points() / (static_cast<std::uint64_t>(o.p) * o.p));
  rep.rows.push_back(Row()
                         .add("row_type", "circle")
                         .add("delta", a.density().to_string())
                         .add("seed", Cell{o.seed})
                         .add("size_a", Cell{a.size()})
                         .add("size_b", Cell{a.size()})
                         .add("fraction_good", Cell{tr.fraction_good})
                         .add("max_diff", Cell{tr.max_diff})
                         .add("cap", Cell{cap}));

  rep.check("fraction_in_unit_interval", range_ok);
  rep.check("full_density_all_good", full_ok);
  return rep;
}

// ----------------------------------------------------------------- driver

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct RawFlags {
  std::string gamma, delta_a, delta_b, c, g_sample, deltas, trend_primes;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--p", o.p, "odd prime")->capture_default_str();
  sub->add_option("--r", o.r, "exponent r >= 1")->capture_default_str();
  sub->add_option("--seed", o.seed, "base seed")->capture_default_str();
  sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  sub->add_option("--out", o.out, "report path (stdout if absent)");
  sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--ceiling", o.ceiling, "ceiling for inequality ratios")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  RawFlags raw;
  CLI::App app{"Finite p-adic plane verification suites and experiments", "padic-verify"};
  app.require_subcommand(1);

  auto* group = app.add_subcommand("group", "rotation group order and enumeration checks");
  auto* orbit = app.add_subcommand("orbit", "orbits, stabilizers and autocorrelations");
  auto* fourier = app.add_subcommand("fourier", "orthogonality, Plancherel, inversion, energy identity");
  auto* restriction = app.add_subcommand("restriction", "restriction, dual and weighted-sum sweeps");
  auto* incidence = app.add_subcommand("incidence", "incidence counts, deviation bounds, Fourier decomposition");
  auto* mattila = app.add_subcommand("mattila", "proportion of rotations with a large |gA - B|");
  auto* sharpness = app.add_subcommand("sharpness", "coset constructions and the gamma probe");
  auto* conjecture = app.add_subcommand("conjecture", "balanced-density exploratory sweep");
  for (auto* s : {group, orbit, fourier, restriction, incidence, mattila, sharpness, conjecture}) add_common(s, o);

  orbit->add_option("--autocorr-ceiling", o.autocorr_ceiling, "ceiling for autocorrelation ratios")->capture_default_str();
  fourier->add_option("--trials", o.trials, "random grids for Plancherel and inversion")->capture_default_str();
  restriction->add_option("--trials", o.trials, "random seeds per family")->capture_default_str();
  restriction->add_option("--trend-primes", raw.trend_primes, "comma-separated primes for the r = 1 slope");
  incidence->add_option("--delta-a", raw.delta_a, "density of A (a/b or decimal)");
  incidence->add_option("--delta-b", raw.delta_b, "density of B");
  incidence->add_option("--trials", o.trials, "random instances")->capture_default_str();
  incidence->add_option("--r-size", o.r_size, "size of the motion set R");
  mattila->add_option("--delta-a", raw.delta_a, "density of A");
  mattila->add_option("--delta-b", raw.delta_b, "density of B");
  mattila->add_option("--trials", o.trials, "seeded instances")->capture_default_str();
  mattila->add_option("--g-sample", raw.g_sample, "rotations to sample, or all");
  mattila->add_option("--c", raw.c, "threshold c in |gA - B| >= c p^{2r}");
  mattila->add_flag("--prune", o.prune, "drop points of positive valuation from A");
  sharpness->add_option("--m", o.m, "cosets in A");
  sharpness->add_option("--n", o.n, "cosets in B");
  sharpness->add_option("--gamma", raw.gamma, "gamma with gamma p^2 integral");
  conjecture->add_option("--deltas", raw.deltas, "comma-separated densities");
  conjecture->add_option("--trials", o.trials, "seeds per density")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (!raw.delta_a.empty()) o.delta_a = Rational::parse(raw.delta_a);
    if (!raw.delta_b.empty()) o.delta_b = Rational::parse(raw.delta_b);
    if (!raw.c.empty()) o.c = Rational::parse(raw.c);
    if (!raw.gamma.empty()) o.gamma = Rational::parse(raw.gamma);
    if (!raw.g_sample.empty() && raw.g_sample != "all") {
      std::size_t pos = 0;
      const unsigned long long k = std::stoull(raw.g_sample, &pos);
      if (pos != raw.g_sample.size() || k == 0) throw ConfigError("--g-sample takes a positive integer or all");
      o.g_sample = k;
    }
    for (const std::string& d : split_list(raw.deltas)) o.deltas.push_back(Rational::parse(d));
    for (const std::string& q : split_list(raw.trend_primes)) {
      std::size_t pos = 0;
      const unsigned long v = std::stoul(q, &pos);
      if (pos != q.size() || !is_odd_prime(static_cast<std::uint32_t>(v))) {
        throw ConfigError("--trend-primes entries must be odd primes; got " + q);
      }
      o.trend_primes.push_back(static_cast<std::uint32_t>(v));
    }
    for (const Rational* d : {&o.delta_a, &o.delta_b}) {
      if (*d < Rational(0) || *d > Rational(1)) throw RangeError("densities must lie in [0, 1]");
    }
    for (const Rational& d : o.deltas) {
      if (d < Rational(0) || d > Rational(1)) throw RangeError("densities must lie in [0, 1]");
    }

    set_thread_count(o.threads);
    const auto start = std::chrono::steady_clock::now();
    Report rep;
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "group") rep = run_group(o);
    else if (name == "orbit") rep = run_orbit(o);
    else if (name == "fourier") rep = run_fourier(o);
    else if (name == "restriction") rep = run_restriction(o);
    else if (name == "incidence") rep = run_incidence(o);
    else if (name == "mattila") rep = run_mattila(o);
    else if (name == "sharpness") rep = run_sharpness(o);
    else rep = run_conjecture(o);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::string body = o.format == "json" ? report_to_json(rep) : report_to_csv(rep);
    if (o.out.empty()) {
      out << body;
    } else {
      write_file_atomic(o.out, body);
      RunMetadata meta{o.threads, seconds, {o.out, o.out + ".manifest.json"}};
      write_file_atomic(o.out + ".manifest.json", manifest_to_json(rep, meta));
    }
    for (const Check& c : rep.checks) {
      if (!c.passed) err << "FAIL " << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
    }
    return rep.all_passed() ? kAllPassed : kCheckFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: malformed number: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::out_of_range& e) {
    err << "error: number out of range: " << e.what() << "\n";
    return kUsageError;
  }
}

}  // namespace padic::cli
