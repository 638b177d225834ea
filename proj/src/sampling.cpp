#include "superint/sampling.hpp"

#include <cmath>
#include <random>

namespace superint {

namespace {

struct Box {
  std::vector<double> lo, hi;
};

// Per-coordinate sampling boxes bounded away from each chart's singular loci.
Box chart_box(const Chart& chart, const SampleGuards& g) {
  Box box;
  const int d = chart.dim();
  box.lo.assign(d, -2.0);
  box.hi.assign(d, 2.0);
  const std::string& name = chart.name();
  auto starts_with = [&name](const char* prefix) {
    return name.rfind(prefix, 0) == 0;
  };
  if (starts_with("cylindrical3") || starts_with("polar") ||
      starts_with("plane23")) {
    box.lo[0] = g.r_min;
    box.hi[0] = g.r_max;
    box.lo[1] = -M_PI + 1e-3;
    box.hi[1] = M_PI - 1e-3;
    for (int i = 2; i < d; ++i) {
      box.lo[i] = -1.0;
      box.hi[i] = 1.0;
    }
  } else if (starts_with("spherical4")) {
    box.lo[0] = g.r_min;
    box.hi[0] = g.r_max;
    box.lo[1] = -M_PI + 1e-3;
    box.hi[1] = M_PI - 1e-3;
    box.lo[2] = 0.2;
    box.hi[2] = M_PI - 0.2;
    box.lo[3] = -1.0;
    box.hi[3] = 1.0;
  } else if (starts_with("hyperspherical")) {
    box.lo[0] = g.r_min;
    box.hi[0] = g.r_max;
    for (int i = 1; i < d - 2; ++i) {
      box.lo[i] = 0.2;
      box.hi[i] = M_PI - 0.2;
    }
    box.lo[d - 2] = -M_PI + 1e-3;
    box.hi[d - 2] = M_PI - 1e-3;
    box.lo[d - 1] = -1.0;
    box.hi[d - 1] = 1.0;
  }
  return box;
}

}  // namespace

std::vector<PhasePoint> sample_chart_points(
    const ChartPtr& chart, int count, std::uint64_t seed,
    const SampleGuards& guards, const std::function<bool(const PhasePoint&)>& ok) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Box box = chart_box(*chart, guards);
  const int d = chart->dim();

  std::vector<PhasePoint> points;
  points.reserve(count);
  long long attempts = 0;
  const long long max_attempts = 1000LL * count + 1000;
  while (static_cast<int>(points.size()) < count) {
    if (++attempts > max_attempts)
      throw SamplerExhausted("sampler exhausted for chart " + chart->name());
    PhasePoint pt;
    pt.chart = chart->name();
    pt.q.resize(d);
    pt.p.resize(d);
    for (int i = 0; i < d; ++i) {
      pt.q[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * unit(rng);
      pt.p[i] = -guards.p_range + 2.0 * guards.p_range * unit(rng);
    }
    if (!chart->in_chart_domain(pt.q)) continue;
    if (ok && !ok(pt)) continue;
    points.push_back(std::move(pt));
  }
  return points;
}

std::vector<PhasePoint> sample_system_points(const PotentialSpec& spec,
                                             int count, std::uint64_t seed,
                                             const SampleGuards& guards) {
  ChartPtr chart = natural_chart(spec);
  PotentialSpec s = spec;
  ProfilePtr profile =
      (spec.family == Family::Evans) ? nullptr : angular_profile(spec);

  auto ok = [s, profile, guards](const PhasePoint& pt) {
    if (s.family == Family::Evans) {
      // keep clear of every denominator any variant uses
      double s1 = std::sin(pt.q[1]), c1 = std::cos(pt.q[1]);
      double s2 = std::sin(pt.q[2]), c2 = std::cos(pt.q[2]);
      double margin = std::min(std::abs(s2), std::abs(c2));
      if (s.variant == EvansVariant::V4)
        margin = std::min(margin, std::min(std::abs(s1), std::abs(c1)));
      if (s.profile && s.profile->domain_margin)
        margin = std::min(margin, s.profile->domain_margin(pt.q[1]));
      if (margin < guards.min_margin) return false;
    } else if (profile && profile->domain_margin) {
      if (profile->domain_margin(pt.q[1]) < guards.min_margin) return false;
    }
    try {
      double v = eval_angular_form(s, pt);
      if (!std::isfinite(v)) return false;
    } catch (const SingularityError&) {
      return false;
    } catch (const ChartDomainError&) {
      return false;
    }
    return true;
  };
  return sample_chart_points(chart, count, seed, guards, ok);
}

}  // namespace superint
