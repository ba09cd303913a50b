#pragma once

// Seeded generator with fully pinned-down transforms, so sampled points and
// generated catalog coefficients are bit-identical across platforms and runs.

#include <cmath>
#include <cstdint>

#include "spraylab/types.hpp"

namespace spraylab {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next_u64() {
        // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller (first branch only; deterministic).
    double gauss() {
        double u = uniform01();
        while (u <= 0.0) u = uniform01();
        const double v = uniform01();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
    }

    VecXd unit_vector(int dim) {
        VecXd v(dim);
        double norm2 = 0.0;
        do {
            for (int i = 0; i < dim; ++i) v[i] = gauss();
            norm2 = v.squaredNorm();
        } while (norm2 < 1e-12);
        return v / std::sqrt(norm2);
    }

  private:
    std::uint64_t state_;
};

}  // namespace spraylab
