#pragma once

#include <span>
#include <string>
#include <vector>

#include "superint/observables.hpp"
#include "superint/potentials.hpp"

namespace superint {

enum class IntegratorMethod { Leapfrog2, Yoshida4 };

struct IntegratorConfig {
  double dt = 1e-3;
  long steps = 100000;
  IntegratorMethod method = IntegratorMethod::Leapfrog2;
  double guard_radius = 1e-6;  // abort when a potential denominator shrinks below
  double max_force = 1e8;      // abort when the force magnitude exceeds this
};

enum class TrajectoryStatus { Completed, AbortedNearCollision };

// Cartesian states sampled at every step; integrals are evaluated by mapping
// states through the charts afterwards.
struct Trajectory {
  double dt = 0.0;
  int dim = 0;
  std::vector<double> times;
  std::vector<double> states;  // row-major (x..., p...) per step
  TrajectoryStatus status = TrajectoryStatus::Completed;

  size_t size() const { return times.size(); }
  std::span<const double> x(size_t step) const {
    return {states.data() + step * 2 * dim, static_cast<size_t>(dim)};
  }
  std::span<const double> p(size_t step) const {
    return {states.data() + step * 2 * dim + dim, static_cast<size_t>(dim)};
  }
};

// Exact -grad V of the difference form (dual evaluation).
std::vector<double> force(const PotentialSpec& spec, std::span<const double> x);

Trajectory integrate(const PotentialSpec& spec, std::span<const double> x0,
                     std::span<const double> p0, const IntegratorConfig& cfg);

// One integrator step in place (exposed for the symplecticity check).
void integrator_step(const PotentialSpec& spec, IntegratorMethod method,
                     double dt, std::span<double> x, std::span<double> p);

struct DriftEntry {
  std::string name;
  double initial = 0.0;
  double max_drift = 0.0;      // max_t |I(t) - I(0)| / max(|I(0)|, 1)
  double secular_slope = 0.0;  // linear fit of the drift series
};

struct DriftReport {
  std::vector<DriftEntry> entries;
};

// Conservation drift of the set's Hamiltonian and members along a trajectory.
DriftReport drift_report(const Trajectory& traj, const IntegralSet& set);

// Single observable version (used for negative controls).
DriftEntry observable_drift(const Trajectory& traj, const Observable& obs,
                            const ChartPtr& chart);

}  // namespace superint
