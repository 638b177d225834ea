#include "superint/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace superint {

namespace {

constexpr int kMaxDim = 16;

// Smallest potential denominator at x; the integrator aborts when this
// shrinks below the guard radius.
double min_denominator(const PotentialSpec& spec, std::span<const double> x) {
  switch (spec.family) {
    case Family::Calogero: {
      double d1 = x[0] - x[1], d2 = x[1] - x[2], d3 = x[2] - x[0];
      return std::min({std::abs(d1), std::abs(d2), std::abs(d3)});
    }
    case Family::Wolfes: {
      double x1 = x[0] - x[1], x2 = x[1] - x[2], x3 = x[2] - x[0];
      return std::min({std::abs(x1 - x2), std::abs(x2 - x3), std::abs(x3 - x1)});
    }
    case Family::Ttw:
    case Family::Angular3: {
      // r |sin((2n+1) psi)| in the Jacobi cylindrical chart
      ChartPtr chart = make_cylindrical3_chart(true);
      std::array<double, 3> q{}, pq{}, p{};
      try {
        chart->forward(x, std::span<const double>(p.data(), 3),
                       std::span<double>(q.data(), 3),
                       std::span<double>(pq.data(), 3));
      } catch (const ChartDomainError&) {
        return 0.0;
      }
      if (spec.family == Family::Ttw) {
        int m = 2 * spec.ttw_n + 1;
        return std::abs(q[0] * std::sin(m * q[1]));
      }
      double margin = spec.profile && spec.profile->domain_margin
                          ? spec.profile->domain_margin(q[1])
                          : 1.0;
      return std::min(q[0], std::max(margin, 0.0));
    }
    case Family::Plane23: {
      double x1 = x[0] + x[2] - 2 * x[4];
      double x2 = x[1] + x[3] - 2 * x[5];
      if (spec.profile2) return std::min(std::abs(x1), std::abs(x2));
      return std::hypot(x1, x2) / std::sqrt(6.0);
    }
    case Family::Evans: {
      double rho = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
      double rxy = std::hypot(x[0], x[1]);
      double m = std::min(rho, rxy);
      if (spec.variant == EvansVariant::V2 || spec.variant == EvansVariant::V4)
        m = std::min(m, std::abs(x[2]));  // rho cos(psi2) = z
      return m;
    }
  }
  return 0.0;
}

void eval_force(const PotentialSpec& spec, std::span<const double> x,
                std::span<double> f) {
  const size_t d = x.size();
  std::array<Dual, kMaxDim> xd;
  for (size_t i = 0; i < d; ++i) xd[i] = Dual(x[i]);
  for (size_t a = 0; a < d; ++a) {
    xd[a].d = 1.0;
    f[a] = -eval_difference_form(spec, std::span<const Dual>(xd.data(), d)).d;
    xd[a].d = 0.0;
  }
}

// kick-drift-kick
void leapfrog(const PotentialSpec& spec, double dt, std::span<double> x,
              std::span<double> p, std::span<double> f) {
  const size_t d = x.size();
  eval_force(spec, x, f);
  for (size_t i = 0; i < d; ++i) p[i] += 0.5 * dt * f[i];
  for (size_t i = 0; i < d; ++i) x[i] += dt * p[i];
  eval_force(spec, x, f);
  for (size_t i = 0; i < d; ++i) p[i] += 0.5 * dt * f[i];
}

void step_once(const PotentialSpec& spec, IntegratorMethod method, double dt,
               std::span<double> x, std::span<double> p, std::span<double> f) {
  if (method == IntegratorMethod::Leapfrog2) {
    leapfrog(spec, dt, x, p, f);
    return;
  }
  // Yoshida's fourth-order triple composition
  static const double cbrt2 = std::cbrt(2.0);
  static const double w1 = 1.0 / (2.0 - cbrt2);
  static const double w0 = -cbrt2 * w1;
  leapfrog(spec, w1 * dt, x, p, f);
  leapfrog(spec, w0 * dt, x, p, f);
  leapfrog(spec, w1 * dt, x, p, f);
}

}  // namespace

std::vector<double> force(const PotentialSpec& spec, std::span<const double> x) {
  std::vector<double> f(x.size());
  eval_force(spec, x, f);
  return f;
}

void integrator_step(const PotentialSpec& spec, IntegratorMethod method,
                     double dt, std::span<double> x, std::span<double> p) {
  std::array<double, kMaxDim> f;
  step_once(spec, method, dt, x, p, std::span<double>(f.data(), x.size()));
}

Trajectory integrate(const PotentialSpec& spec, std::span<const double> x0,
                     std::span<const double> p0, const IntegratorConfig& cfg) {
  const int d = cart_dim(spec);
  if (static_cast<int>(x0.size()) != d || static_cast<int>(p0.size()) != d)
    throw std::invalid_argument("integrate: state dimension mismatch");
  if (min_denominator(spec, x0) < cfg.guard_radius)
    throw SingularityError("initial state near collision",
                           min_denominator(spec, x0));

  Trajectory traj;
  traj.dt = cfg.dt;
  traj.dim = d;
  traj.times.reserve(cfg.steps + 1);
  traj.states.reserve(static_cast<size_t>(cfg.steps + 1) * 2 * d);

  std::vector<double> x(x0.begin(), x0.end()), p(p0.begin(), p0.end()), f(d);
  auto record = [&](long step) {
    traj.times.push_back(step * cfg.dt);
    traj.states.insert(traj.states.end(), x.begin(), x.end());
    traj.states.insert(traj.states.end(), p.begin(), p.end());
  };
  record(0);
  for (long s = 1; s <= cfg.steps; ++s) {
    try {
      step_once(spec, cfg.method, cfg.dt, x, p, f);
    } catch (const SingularityError&) {
      traj.status = TrajectoryStatus::AbortedNearCollision;
      return traj;
    }
    double fmax = 0.0;
    for (double fi : f) fmax = std::max(fmax, std::abs(fi));
    if (min_denominator(spec, x) < cfg.guard_radius || fmax > cfg.max_force ||
        !std::all_of(x.begin(), x.end(),
                     [](double v) { return std::isfinite(v); })) {
      traj.status = TrajectoryStatus::AbortedNearCollision;
      return traj;
    }
    record(s);
  }
  return traj;
}

DriftEntry observable_drift(const Trajectory& traj, const Observable& obs,
                            const ChartPtr& chart) {
  DriftEntry entry;
  entry.name = obs.name;
  const size_t steps = traj.size();
  if (steps == 0) return entry;
  PhasePoint pt = chart->lift(traj.x(0), traj.p(0));
  entry.initial = obs.value(pt);
  const double norm = std::max(std::abs(entry.initial), 1.0);

  double sum_t = 0, sum_d = 0, sum_tt = 0, sum_td = 0;
  for (size_t s = 0; s < steps; ++s) {
    pt = chart->lift(traj.x(s), traj.p(s));
    double drift = (obs.value(pt) - entry.initial) / norm;
    entry.max_drift = std::max(entry.max_drift, std::abs(drift));
    double t = traj.times[s];
    sum_t += t;
    sum_d += drift;
    sum_tt += t * t;
    sum_td += t * drift;
  }
  double denom = steps * sum_tt - sum_t * sum_t;
  entry.secular_slope = denom != 0.0 ? (steps * sum_td - sum_t * sum_d) / denom : 0.0;
  return entry;
}

DriftReport drift_report(const Trajectory& traj, const IntegralSet& set) {
  if (traj.status != TrajectoryStatus::Completed)
    throw std::invalid_argument("drift_report: trajectory did not complete");
  ChartPtr chart = chart_by_name(set.hamiltonian.chart);
  DriftReport report;
  report.entries.push_back(observable_drift(traj, set.hamiltonian, chart));
  for (const auto& m : set.members)
    report.entries.push_back(observable_drift(traj, m, chart));
  return report;
}

}  // namespace superint
