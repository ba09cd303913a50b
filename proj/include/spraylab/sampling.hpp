#pragma once

// Deterministic phase-point sampling and the fixed test-vector battery used
// for all form-residual norms.

#include <array>
#include <vector>

#include "spraylab/catalog.hpp"
#include "spraylab/rng.hpp"

namespace spraylab {

/// x uniform in the spec's sampling box (rejecting outside a ball domain),
/// y uniform on the unit sphere scaled by uniform(0.5, 2). Deterministic in
/// `seed`; every returned point has y != 0.
std::vector<PhasePointd> sample_points(const MetricSpec& spec, int count, std::uint64_t seed);

/// Pseudo-random unit tangent-vector pairs; `size` tuples, seeded. Forms of
/// degree one use the first vector of each pair.
std::vector<std::array<VecXd, 2>> tangent_battery(int dim, int size, std::uint64_t seed);

}  // namespace spraylab
