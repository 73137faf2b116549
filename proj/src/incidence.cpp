#include "padic/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "padic/parallel.hpp"

namespace padic {

RigidMotionSet::RigidMotionSet(const RingCtx& ctx, std::vector<RigidMotion> members)
    : ctx_(ctx), members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

RigidMotionSet RigidMotionSet::full(const RotationGroup& group) {
  const RingCtx& ctx = group.ctx();
  std::vector<RigidMotion> all;
  all.reserve(group.order() * ctx.num_points());
  for (const Rotation& g : group.elements()) {
    for (PointIndex i = 0; i < ctx.num_points(); ++i) all.push_back({g, ctx.point(i)});
  }
  return RigidMotionSet(ctx, std::move(all));
}

RigidMotionSet RigidMotionSet::random(const RotationGroup& group, std::uint64_t size, Rng& rng) {
  const RingCtx& ctx = group.ctx();
  const std::uint64_t total = group.order() * ctx.num_points();
  size = std::min(size, total);
  // Floyd's sampling: exactly `size` distinct codes.
  std::set<std::uint64_t> chosen;
  for (std::uint64_t j = total - size; j < total; ++j) {
    const std::uint64_t t = uniform_below(rng, j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<RigidMotion> members;
  members.reserve(size);
  for (std::uint64_t code : chosen) {
    members.push_back({group.elements()[code / ctx.num_points()],
                       ctx.point(static_cast<PointIndex>(code % ctx.num_points()))});
  }
  return RigidMotionSet(ctx, std::move(members));
}

std::vector<RigidMotionSet::Slice> RigidMotionSet::by_rotation() const {
  std::vector<Slice> out;
  for (std::size_t i = 0; i < members_.size();) {
    std::size_t j = i;
    while (j < members_.size() && members_[j].g == members_[i].g) ++j;
    out.push_back({members_[i].g, i, j});
    i = j;
  }
  return out;
}

std::uint64_t incidence_count(const PointSet& a, const PointSet& b, const RigidMotionSet& motions) {
  const RingCtx& ctx = a.ctx();
  const auto slices = motions.by_rotation();
  std::vector<std::uint64_t> partial(slices.size(), 0);
  parallel_for(slices.size(), [&](std::size_t k) {
    const auto& s = slices[k];
    const DifferenceTable table = difference_count_table(a, rotate_set(b, s.g));
    std::uint64_t acc = 0;
    for (std::size_t i = s.begin; i < s.end; ++i) acc += table.counts[ctx.index(motions.members()[i].z)];
    partial[k] = acc;
  });
  std::uint64_t total = 0;
  for (std::uint64_t v : partial) total += v;
  return total;
}

std::uint64_t incidence_count_definitional(const PointSet& a, const PointSet& b,
                                           const RigidMotionSet& motions) {
  const RingCtx& ctx = a.ctx();
  const auto xs = a.points();
  const auto ys = b.points();
  std::uint64_t count = 0;
  for (const RigidMotion& mo : motions.members()) {
    for (const Vec2& x : xs) {
      for (const Vec2& y : ys) count += ctx.vadd(apply(ctx, mo.g, y), mo.z) == x;
    }
  }
  return count;
}

IncidenceReport incidence_report(const PointSet& a, const PointSet& b, const RigidMotionSet& motions) {
  const RingCtx& ctx = a.ctx();
  IncidenceReport rep;
  rep.size_a = a.size();
  rep.size_b = b.size();
  rep.size_r = motions.size();
  rep.incidences = incidence_count(a, b, motions);
  rep.main_term = Rational(static_cast<std::int64_t>(rep.size_a * rep.size_b), 1) *
                  Rational(static_cast<std::int64_t>(rep.size_r), ctx.num_points());
  rep.deviation = std::abs(static_cast<double>(rep.incidences) - rep.main_term.to_double());

  const double p = ctx.p(), r = ctx.r();
  const double sqrt_pr = std::sqrt(static_cast<double>(rep.size_a) * static_cast<double>(rep.size_b) *
                                   static_cast<double>(rep.size_r));
  rep.bound_95 = std::pow(p, (3 * r - 1) / 2) * sqrt_pr;
  const double shift = ctx.one_mod_four() ? 0.25 : 0.5;
  rep.bound_94 = std::pow(p, r - shift) * sqrt_pr * std::pow(static_cast<double>(rep.size_b), 0.25);
  rep.ratio_95 = rep.bound_95 > 0 ? rep.deviation / rep.bound_95 : 0.0;
  rep.ratio_94 = rep.bound_94 > 0 ? rep.deviation / rep.bound_94 : 0.0;
  return rep;
}

IncidenceReport deviation_check_95(const PointSet& a, const PointSet& b, const RigidMotionSet& motions) {
  IncidenceReport rep = incidence_report(a, b, motions);
  rep.bound_94 = 0.0;
  rep.ratio_94 = 0.0;
  return rep;
}

IncidenceReport deviation_check_94(const PointSet& a, const PointSet& b, const RigidMotionSet& motions) {
  IncidenceReport rep = incidence_report(a, b, motions);
  rep.bound_95 = 0.0;
  rep.ratio_95 = 0.0;
  return rep;
}

Complex fourier_deviation(const PointSet& a, const PointSet& b, const RigidMotionSet& motions) {
  const RingCtx& ctx = a.ctx();
  const SpectralTable fa = dft(ComplexGrid::indicator(a));
  const SpectralTable fb = dft(ComplexGrid::indicator(b));
  const CharacterTable chi(ctx);
  const auto slices = motions.by_rotation();

  std::vector<Complex> per_m(ctx.num_points());
  parallel_for(ctx.num_points(), [&](std::size_t i) {
    if (i == 0) return;
    const Vec2 m = ctx.point(static_cast<PointIndex>(i));
    const Complex a_part = fa.at(ctx.vneg(m));
    Complex acc = 0.0;
    for (const auto& s : slices) {
      Complex phase_sum = 0.0;
      for (std::size_t k = s.begin; k < s.end; ++k) phase_sum += chi(ctx.neg(ctx.dot(m, motions.members()[k].z)));
      acc += fb.at(apply(ctx, invert(ctx, s.g), m)) * phase_sum;
    }
    per_m[i] = a_part * acc;
  });
  Complex total = 0.0;
  for (const Complex& v : per_m) total += v;
  return total * static_cast<double>(ctx.num_points());
}

}  // namespace padic
