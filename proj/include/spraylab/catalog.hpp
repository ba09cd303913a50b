#pragma once

// Built-in metrics and projective factors, all expressed through the DSL so
// they flow through the same evaluation path as user-supplied files.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spraylab/expr.hpp"

namespace spraylab {

/// Sampling region for base points: x uniform in [-half_width, half_width]^n,
/// optionally restricted to the ball |x| < ball_radius.
struct Domain {
    double half_width = 1.0;
    std::optional<double> ball_radius;
};

struct MetricSpec {
    std::string name;
    int dim = 0;
    Expr expr;
    Domain domain;
    /// Flag curvature when the metric is a known constant-curvature model.
    std::optional<double> expected_curvature;
    /// For Riemannian catalog entries: the metric tensor g(x), used by
    /// independent test oracles. Empty for genuinely Finslerian metrics.
    std::function<MatNd(const VecXd&)> riemannian_g;
    std::string note;

    template <typename T>
    T operator()(const PhasePoint<T>& p) const {
        return eval(expr, p);
    }
};

struct FactorSpec {
    std::string name;
    int dim = 0;
    Expr expr;
    std::string note;

    template <typename T>
    T operator()(const PhasePoint<T>& p) const {
        return eval(expr, p);
    }
};

/// Names accepted by `metric_catalog`.
std::vector<std::string> metric_catalog_names();

/// Names accepted by `factor_catalog`.
std::vector<std::string> factor_catalog_names();

/// Build a catalog metric. `seed` only matters for rand_riemann.
/// Throws ConfigError for unknown names or unsupported dimensions.
MetricSpec metric_catalog(const std::string& name, int dim, std::uint64_t seed = 0);

/// Build a catalog projective factor. `seed` only matters for rand_homog.
FactorSpec factor_catalog(const std::string& name, int dim, std::uint64_t seed = 0);

/// Wrap a parsed expression file as a metric (box domain, no oracle data).
MetricSpec metric_from_file(const std::string& path);

FactorSpec factor_from_file(const std::string& path);

}  // namespace spraylab
