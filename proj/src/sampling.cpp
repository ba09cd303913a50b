#include "spraylab/sampling.hpp"

namespace spraylab {

std::vector<PhasePointd> sample_points(const MetricSpec& spec, int count, std::uint64_t seed) {
    if (count < 1) throw ConfigError("sample_points: count must be >= 1");
    const int n = spec.dim;
    Rng rng(seed);
    std::vector<PhasePointd> out;
    out.reserve(count);
    while (static_cast<int>(out.size()) < count) {
        VecXd x(n);
        for (int i = 0; i < n; ++i)
            x[i] = rng.uniform(-spec.domain.half_width, spec.domain.half_width);
        if (spec.domain.ball_radius && x.norm() >= *spec.domain.ball_radius) continue;
        VecXd y = rng.unit_vector(n) * rng.uniform(0.5, 2.0);
        out.push_back({std::move(x), std::move(y)});
    }
    return out;
}

std::vector<std::array<VecXd, 2>> tangent_battery(int dim, int size, std::uint64_t seed) {
    Rng rng(seed ^ 0xb5297a4d3f84d5b5ull);
    std::vector<std::array<VecXd, 2>> out;
    out.reserve(size);
    for (int i = 0; i < size; ++i)
        out.push_back({rng.unit_vector(2 * dim), rng.unit_vector(2 * dim)});
    return out;
}

}  // namespace spraylab
