// Acceptance run: one PASS/FAIL line per criterion. With an argument N only
// criterion N runs; the exit status is nonzero if any criterion printed FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "padic/cli.hpp"
#include "padic/estimates.hpp"
#include "padic/experiments.hpp"
#include "padic/fourier.hpp"
#include "padic/incidence.hpp"
#include "padic/parallel.hpp"
#include "padic/random.hpp"
#include "padic/rotation.hpp"

using namespace padic;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
  std::vector<std::string> notes;
};

std::uint64_t ipow(std::uint64_t b, std::uint32_t e) {
  std::uint64_t out = 1;
  while (e--) out *= b;
  return out;
}

// p^{r-1}(p + 1) or p^{r-1}(p - 1), written out so it does not lean on the
// library's own formula.
std::uint64_t expected_order(std::uint32_t p, std::uint32_t r) {
  return ipow(p, r - 1) * (p % 4 == 3 ? p + 1 : p - 1);
}

std::uint32_t valuation_of(std::uint32_t p, std::uint32_t r, Vec2 x) {
  std::uint32_t v = 0;
  std::uint64_t pk = p;
  while (v < r && x.x1 % pk == 0 && x.x2 % pk == 0) {
    ++v;
    pk *= p;
  }
  return v;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

Outcome criterion1() {
  Outcome out;
  std::uint64_t compared = 0, checked = 0;
  auto run = [&](std::uint32_t p, std::uint32_t r) {
    const RingCtx ctx(p, r);
    const auto h = RotationGroup::hensel_enumerate(ctx);
    ++checked;
    if (h.order() != expected_order(p, r)) {
      out.passed = false;
      out.notes.push_back("order mismatch at p=" + std::to_string(p) + " r=" + std::to_string(r));
    }
    if (ctx.num_points() <= 13u * 13 * 13 * 13) {
      ++compared;
      if (RotationGroup::brute_enumerate(ctx).elements() != h.elements()) {
        out.passed = false;
        out.notes.push_back("Hensel and brute force differ at p=" + std::to_string(p) + " r=" + std::to_string(r));
      }
    }
  };
  for (std::uint32_t p : {3u, 7u, 11u}) {
    for (std::uint32_t r = 1; r <= 3; ++r) run(p, r);
  }
  for (std::uint32_t p : {5u, 13u}) {
    for (std::uint32_t r = 1; r <= 2; ++r) run(p, r);
  }
  out.detail = std::to_string(checked) + " rings, " + std::to_string(compared) + " compared element-for-element";
  return out;
}

Outcome criterion2() {
  Outcome out;
  std::uint64_t points = 0;
  for (std::uint32_t p : {3u, 5u, 7u}) {
    for (std::uint32_t r = 1; r <= 2; ++r) {
      const RingCtx ctx(p, r);
      const std::uint64_t q = ctx.modulus();
      const auto g = RotationGroup::hensel_enumerate(ctx);
      for (PointIndex i = 1; i < ctx.num_points(); ++i) {
        const Vec2 m = ctx.point(i);
        const Orbit o = orbit(g, m);
        const std::uint32_t v = valuation_of(p, r, m);
        ++points;
        bool ok = o.stabilizer_order == ipow(p, v) && o.size() == expected_order(p, r - v) &&
                  o.size() * o.stabilizer_order == g.order();
        if (p % 4 == 3) {
          // p^v C_{||m~||, r-v}: scale back the reduced circle by brute force
          const std::uint64_t pv = ipow(p, v), qs = q / pv;
          const std::uint64_t t1 = m.x1 / pv, t2 = m.x2 / pv;
          const std::uint64_t j = (t1 * t1 + t2 * t2) % qs;
          std::set<PointIndex> circ;
          for (std::uint64_t a = 0; a < qs; ++a) {
            for (std::uint64_t b = 0; b < qs; ++b) {
              if ((a * a + b * b) % qs == j) circ.insert(static_cast<PointIndex>(pv * a * q + pv * b));
            }
          }
          std::set<PointIndex> got;
          for (const Vec2& x : o.points) got.insert(ctx.index(x));
          ok = ok && got == circ;
        }
        if (!ok) {
          out.passed = false;
          if (out.notes.size() < 5) {
            out.notes.push_back("mismatch at p=" + std::to_string(p) + " r=" + std::to_string(r) + " m=(" +
                                std::to_string(m.x1) + "," + std::to_string(m.x2) + ")");
          }
        }
      }
    }
  }
  out.detail = std::to_string(points) + " nonzero m";
  return out;
}

Outcome criterion3() {
  Outcome out;
  double worst_orth = 0.0, worst_planch = 0.0, worst_inv = 0.0;
  bool exact_ok = true;
  for (std::uint32_t p : {3u, 5u, 7u}) {
    for (std::uint32_t r = 1; r <= 2; ++r) {
      const RingCtx ctx(p, r);
      const std::uint64_t n = ctx.num_points();
      std::vector<double> err(n, 0.0);
      std::vector<std::uint8_t> ok(n, 0);
      parallel_for(n, [&](std::size_t i) {
        const Vec2 beta = ctx.point(static_cast<PointIndex>(i));
        const std::uint64_t expected = i == 0 ? n : 0;
        ok[i] = orthogonality_sum_exact(ctx, beta) == expected;
        err[i] = std::abs(orthogonality_sum_float(ctx, beta) - Complex(static_cast<double>(expected), 0.0));
      });
      exact_ok = exact_ok && std::all_of(ok.begin(), ok.end(), [](auto b) { return b; });
      worst_orth = std::max(worst_orth, *std::max_element(err.begin(), err.end()));
      for (std::uint64_t t = 0; t < 100; ++t) {
        Rng rng = make_rng(1000 + t, p * 10 + r);
        ComplexGrid f(ctx);
        for (auto& v : f.values) {
          v = {static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5, static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5};
        }
        worst_planch = std::max(worst_planch, plancherel_gap(f));
        const ComplexGrid back = idft(dft(f));
        for (std::size_t i = 0; i < n; ++i) worst_inv = std::max(worst_inv, std::abs(back.values[i] - f.values[i]));
      }
    }
  }
  out.passed = exact_ok && worst_orth <= 1e-9 && worst_planch <= 1e-9 && worst_inv <= 1e-9;
  out.detail = std::string("exact ") + (exact_ok ? "ok" : "broken") + ", float orthogonality " + fmt(worst_orth) +
               ", Plancherel " + fmt(worst_planch) + ", inversion " + fmt(worst_inv);
  return out;
}

Outcome criterion4() {
  Outcome out;
  double worst = 0.0;
  std::uint64_t cases = 0;
  for (auto [p, r] : {std::pair{3u, 1u}, {3u, 2u}, {5u, 1u}, {7u, 1u}}) {
    const RingCtx ctx(p, r);
    const auto g = RotationGroup::hensel_enumerate(ctx);
    const auto orbits = all_orbits(g);
    for (std::size_t k = 0; k < orbits.size(); ++k) {
      const Orbit& o = orbits[k];
      for (int family = 0; family < 2; ++family) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
          Rng rng = make_rng(seed, (static_cast<std::uint64_t>(p) << 32) + k * 2 + family);
          std::vector<Complex> f(o.size());
          for (auto& v : f) {
            const bool bit = uniform_below(rng, 2) == 1;
            v = family == 0 ? (bit ? 1.0 : 0.0) : (bit ? 1.0 : -1.0);
          }
          if (family == 0 && std::all_of(f.begin(), f.end(), [](Complex v) { return v == 0.0; })) f[0] = 1.0;
          const double lhs = l4_sum(extension(ctx, o, f));
          const double rhs = static_cast<double>(ctx.num_points()) / std::pow(static_cast<double>(o.size()), 4) *
                             energy_quadruples(ctx, o, f).real();
          worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
          ++cases;
        }
      }
    }
  }
  out.passed = worst <= 1e-6;
  out.detail = std::to_string(cases) + " (orbit, f) pairs, max relative gap " + fmt(worst);
  return out;
}

Outcome criterion5() {
  Outcome out;
  std::map<EstimateKind, double> worst;
  std::map<std::pair<EstimateKind, std::string>, double> by_branch;
  const std::vector<std::pair<std::uint32_t, std::uint32_t>> grid{{3, 1}, {3, 2}, {5, 1}, {5, 2}, {7, 1},
                                                                  {7, 2}, {11, 1}, {13, 1}};
  std::map<std::uint32_t, std::map<EstimateKind, double>> at_r1;
  for (auto [p, r] : grid) {
    const EstimateSweepResult s = estimate_sweep({p, r, 1, 20});
    for (const auto& [kind, mx] : s.max_ratio) {
      worst[kind] = std::max(worst[kind], mx);
      if (r == 1) at_r1[p][kind] = mx;
    }
    for (const auto& [key, mx] : s.max_ratio_by_branch) {
      const std::string label = key.first == EstimateKind::WeightedSum
                                    ? (key.second == Branch::ThreeModFour ? "p3" : "p1")
                                    : branch_name(key.second);
      auto& slot = by_branch[{key.first, label}];
      slot = std::max(slot, mx);
    }
  }
  std::string detail = "max ratio";
  for (const auto& [kind, mx] : worst) {
    detail += std::string(" ") + estimate_kind_name(kind) + "=" + fmt(mx);
    if (mx > 10.0) out.passed = false;
  }
  detail += "; slope over p in {3,7,11}";
  const std::vector<double> xs{3, 7, 11};
  for (const auto& [kind, mx] : worst) {
    const std::vector<double> ys{at_r1[3][kind], at_r1[7][kind], at_r1[11][kind]};
    const double slope = log_log_slope(xs, ys);
    detail += std::string(" ") + estimate_kind_name(kind) + "=" + fmt(slope);
    if (slope > 0.2) out.passed = false;
  }
  for (const auto& [key, mx] : by_branch) {
    out.notes.push_back(std::string("branch max ") + estimate_kind_name(key.first) + "/" + key.second + " = " + fmt(mx));
  }
  out.detail = detail;
  return out;
}

Outcome criterion6() {
  Outcome out;
  bool identity_ok = true, improvement_ok = true;
  double worst_decomp = 0.0, worst95 = 0.0, worst94 = 0.0;
  std::uint64_t decomp_runs = 0;
  for (auto [p, r] : {std::pair{3u, 1u}, {3u, 2u}, {5u, 1u}, {7u, 1u}}) {
    const RingCtx ctx(p, r);
    const auto g = RotationGroup::hensel_enumerate(ctx);
    const RigidMotionSet full = RigidMotionSet::full(g);
    const std::uint64_t n = ctx.num_points();
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      Rng rng = make_rng(seed, 0xacc6 + p * 10 + r);
      const PointSet a = random_point_set(ctx, Rational(1, 2), rng);
      const PointSet b = random_point_set(ctx, Rational(1, 3), rng);
      if (incidence_count(a, b, full) != a.size() * b.size() * g.order()) identity_ok = false;

      // sweep over |B| from a single point to the whole plane
      const std::vector<Rational> b_densities{Rational(1, static_cast<std::int64_t>(n)), Rational(1, 10), Rational(1, 2),
                                              Rational(1)};
      for (const Rational& db : b_densities) {
        PointSet bb = random_point_set(ctx, db, rng);
        if (bb.empty()) bb.insert_index(0);
        const RigidMotionSet motions = RigidMotionSet::random(g, std::max<std::uint64_t>(1, g.order() * n / 4), rng);
        const IncidenceReport rep = incidence_report(a, bb, motions);
        worst95 = std::max(worst95, rep.ratio_95);
        worst94 = std::max(worst94, rep.ratio_94);
        if (p % 4 == 3 && bb.size() < n && !(rep.bound_94 < rep.bound_95)) improvement_ok = false;
        // five instances per ring for the Fourier decomposition, 20 in all
        if (db == Rational(1, 2) && seed <= 5) {
          const Complex ii = fourier_deviation(a, bb, motions);
          const double gap = std::abs(rep.main_term.to_double() + ii.real() - static_cast<double>(rep.incidences)) +
                             std::abs(ii.imag());
          worst_decomp = std::max(worst_decomp, gap / std::max(1.0, static_cast<double>(rep.incidences)));
          ++decomp_runs;
        }
      }
    }
  }
  out.passed = identity_ok && worst_decomp <= 1e-6 && worst95 <= 10.0 && worst94 <= 10.0 && improvement_ok;
  out.detail = std::string("full-R identity ") + (identity_ok ? "exact" : "broken") + ", decomposition gap " +
               fmt(worst_decomp) + " over " + std::to_string(decomp_runs) + " instances, ratios " + fmt(worst95) +
               " / " + fmt(worst94) + ", refined bound " + (improvement_ok ? "better below p^{2r}" : "not better");
  return out;
}

Outcome criterion7() {
  Outcome out;
  struct Setting {
    std::uint32_t p, r;
    Rational da, db;
  };
  // densities a modest factor above the thresholds
  const std::vector<Setting> settings{{7, 1, Rational(7, 10), Rational(9, 20)},
                                      {3, 2, Rational(4, 5), Rational(4, 5)},
                                      {5, 1, Rational(7, 10), Rational(7, 10)},
                                      {13, 1, Rational(9, 20), Rational(9, 20)}};
  std::string detail;
  for (const Setting& s : settings) {
    const RingCtx ctx(s.p, s.r);
    const auto g = RotationGroup::hensel_enumerate(ctx);
    std::uint32_t found = 0, drawn = 0;
    double worst = 1.0;
    for (std::uint64_t seed = 1; found < 20 && drawn < 2000; ++seed, ++drawn) {
      Rng rng = make_rng(seed, 0x4d);
      const PointSet a = random_point_set(ctx, s.da, rng);
      const PointSet b = random_point_set(ctx, s.db, rng);
      const bool cond = ctx.one_mod_four() ? product_density_condition(ctx, a.size(), b.size())
                                           : sqrt_density_condition(ctx, a.size(), b.size());
      if (!cond) continue;
      ++found;
      const TrialReport t = proportion_good(g, a, b);
      worst = std::min(worst, t.fraction_good);
      if (t.fraction_good < 0.5) out.passed = false;
    }
    if (found < 20) out.passed = false;
    if (!detail.empty()) detail += ", ";
    detail += "(" + std::to_string(s.p) + "," + std::to_string(s.r) + ") " + std::to_string(found) + "/" +
              std::to_string(drawn) + " min " + fmt(worst);
  }
  out.detail = detail;
  return out;
}

Outcome criterion8() {
  Outcome out;
  bool coset_ok = true, gamma_ok = true;
  double worst_c = 0.0;
  for (auto [p, r] : {std::pair{3u, 2u}, {5u, 2u}}) {
    const RingCtx ctx(p, r);
    const auto g = RotationGroup::hensel_enumerate(ctx);
    const std::uint64_t layer = ipow(p, 2 * r - 2);
    for (std::uint32_t m : {1u, 2u, p, p * p}) {
      for (std::uint32_t n : {1u, 2u, p, p * p}) {
        const auto [a, b] = example13_sets(ctx, m, n, 1);
        if (a.size() != m * layer || b.size() != n * layer) coset_ok = false;
        for (const Rotation& x : g.elements()) {
          const PointSet ga = rotate_set(a, x);
          if (ga.size() != m * layer || difference_set_size(ga, b) > m * n * layer) coset_ok = false;
        }
      }
    }
    for (const Rational& gamma : {Rational(1, p), Rational(2, p)}) {
      const SharpnessReport s = sharpness_probe(g, gamma, 1);
      const std::uint64_t cap = static_cast<std::uint64_t>(gamma.num()) * ctx.num_points() / gamma.den();
      if (s.max_diff > cap) gamma_ok = false;
    }
    const auto circle = unit_circle_mod_p(ctx);
    for (std::size_t ysize : {std::size_t{1}, (circle.size() + 1) / 2, circle.size()}) {
      const std::vector<Vec2> y(circle.begin(), circle.begin() + static_cast<std::ptrdiff_t>(ysize));
      const PointSet a = circle_coset_set(ctx, y);
      std::uint64_t mx = 0;
      for (const Rotation& x : g.elements()) mx = std::max(mx, g_difference_size(x, a, a));
      const double c = static_cast<double>(mx) / static_cast<double>(ysize * ysize * layer);
      worst_c = std::max(worst_c, c);
      out.notes.push_back("circle coset p=" + std::to_string(p) + " r=" + std::to_string(r) +
                          " |Y|=" + std::to_string(ysize) + ": C=" + fmt(c));
    }
  }
  out.passed = coset_ok && gamma_ok && worst_c <= 10.0;
  out.detail = std::string("coset bounds ") + (coset_ok ? "hold" : "broken") + ", gamma probe " +
               (gamma_ok ? "holds" : "broken") + ", recorded C max " + fmt(worst_c);
  return out;
}

std::string run_cli(std::vector<std::string> args, int* code) {
  args.insert(args.begin(), "padic-verify");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  *code = cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
  return o.str();
}

Outcome criterion9() {
  Outcome out;
  const std::vector<std::vector<std::string>> commands{
      {"group", "--p", "7", "--r", "2"},
      {"orbit", "--p", "5", "--r", "2"},
      {"fourier", "--p", "5", "--r", "2", "--trials", "10"},
      {"restriction", "--p", "5", "--r", "2", "--trials", "5"},
      {"incidence", "--p", "5", "--r", "2", "--trials", "5"},
      {"mattila", "--p", "7", "--r", "1", "--delta-a", "0.7", "--delta-b", "0.45", "--trials", "20"},
      {"sharpness", "--p", "5", "--r", "2"},
      {"conjecture", "--p", "7", "--r", "1", "--trials", "5"},
  };
  std::uint32_t same = 0;
  for (const auto& cmd : commands) {
    for (const char* format : {"json", "csv"}) {
      auto with = [&](const char* threads) {
        auto a = cmd;
        a.insert(a.end(), {"--seed", "3", "--format", format, "--threads", threads});
        return a;
      };
      int c1 = 0, c2 = 0, c3 = 0;
      const std::string one = run_cli(with("1"), &c1);
      const std::string four = run_cli(with("4"), &c2);
      const std::string again = run_cli(with("1"), &c3);
      if (one == four && one == again && !one.empty() && c1 == c2 && c1 == c3) {
        ++same;
      } else {
        out.passed = false;
        out.notes.push_back(cmd.front() + " (" + format + ") differs across runs");
      }
    }
  }
  set_thread_count(1);
  out.detail = std::to_string(same) + "/" + std::to_string(commands.size() * 2) +
               " subcommand/format pairs byte-identical at 1 and 4 threads";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9};
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "usage: %s [criterion 1-9]\n", argv[0]);
    return 2;
  }
  set_thread_count(4);
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i + 1) != only) continue;
    const auto start = std::chrono::steady_clock::now();
    const Outcome o = criteria[i]();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const std::string& note : o.notes) std::printf("    %s\n", note.c_str());
    std::printf("criterion %zu: %s  %s (%.2f s)\n", i + 1, o.passed ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && o.passed;
  }
  return all ? 0 : 1;
}
