#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "superint/geometry.hpp"
#include "superint/potentials.hpp"

namespace superint {

// Rejection-sampling boxes bounded away from the singular sets: radii in
// [r_min, r_max], momenta uniform in [-p_range, p_range], angular profile
// margin at least min_margin.
struct SampleGuards {
  double r_min = 0.5;
  double r_max = 2.0;
  double min_margin = 0.1;
  double p_range = 1.0;
};

// Seeded, deterministic nonsingular points in the chart's own coordinates.
// `ok` may impose extra constraints (e.g. potential evaluability); pass
// nullptr for none. Throws SamplerExhausted after too many rejections.
std::vector<PhasePoint> sample_chart_points(
    const ChartPtr& chart, int count, std::uint64_t seed,
    const SampleGuards& guards = {},
    const std::function<bool(const PhasePoint&)>& ok = nullptr);

// Points in the family's natural chart at which V and its profile margin
// are within guards.
std::vector<PhasePoint> sample_system_points(const PotentialSpec& spec,
                                             int count, std::uint64_t seed,
                                             const SampleGuards& guards = {});

}  // namespace superint
