#include "spraylab/catalog.hpp"

#include <charconv>
#include <cmath>

#include "spraylab/rng.hpp"

namespace spraylab {

namespace {

std::string num(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string joined(int n, const std::function<std::string(int)>& term, const std::string& sep = "+") {
    std::string out;
    for (int i = 1; i <= n; ++i) {
        if (i > 1) out += sep;
        out += term(i);
    }
    return out;
}

std::string y_norm2(int n) {
    return joined(n, [](int i) { return "y" + std::to_string(i) + "^2"; });
}

std::string x_norm2(int n) {
    return joined(n, [](int i) { return "x" + std::to_string(i) + "^2"; });
}

std::string xy_dot(int n) {
    return joined(n, [](int i) { return "x" + std::to_string(i) + "*y" + std::to_string(i); });
}

void require_dim(const std::string& name, int dim) {
    if (dim < 2 || dim > kMaxDim)
        throw ConfigError("metric '" + name + "' supports dimensions 2.." + std::to_string(kMaxDim) +
                          ", got " + std::to_string(dim));
}

/// Random conformal factor phi(x): cubic polynomial with seeded coefficients,
/// bounded so that exp(phi) stays well-conditioned on the sampling box.
struct ConformalFactor {
    VecXd lin;    // a_i x_i
    MatNd quad;   // b_ij x_i x_j (symmetric)
    VecXd cubic;  // c_i x_i^3
    MatNd cross;  // d_ij x_i^2 x_j (zero diagonal)

    static ConformalFactor generate(int n, std::uint64_t seed) {
        Rng rng(seed * 0x51ed2701u + 17u);
        ConformalFactor f;
        f.lin = VecXd::Zero(n);
        f.quad = MatNd::Zero(n, n);
        f.cubic = VecXd::Zero(n);
        f.cross = MatNd::Zero(n, n);
        for (int i = 0; i < n; ++i) f.lin[i] = rng.uniform(-0.2, 0.2);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) f.quad(i, j) = f.quad(j, i) = rng.uniform(-0.15, 0.15);
        for (int i = 0; i < n; ++i) f.cubic[i] = rng.uniform(-0.12, 0.12);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) f.cross(i, j) = rng.uniform(-0.12, 0.12);
        return f;
    }

    double value(const VecXd& x) const {
        const int n = static_cast<int>(x.size());
        double phi = lin.dot(x) + x.dot(quad * x);
        for (int i = 0; i < n; ++i) {
            phi += cubic[i] * x[i] * x[i] * x[i];
            for (int j = 0; j < n; ++j)
                if (i != j) phi += cross(i, j) * x[i] * x[i] * x[j];
        }
        return phi;
    }

    std::string to_dsl(int n) const {
        std::string out;
        auto add_term = [&out](double c, const std::string& monomial) {
            if (c == 0.0) return;
            if (!out.empty()) out += "+";
            out += num(c) + "*" + monomial;
        };
        for (int i = 0; i < n; ++i) add_term(lin[i], "x" + std::to_string(i + 1));
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                const double c = i == j ? quad(i, i) : 2.0 * quad(i, j);
                add_term(c, "x" + std::to_string(i + 1) + "*x" + std::to_string(j + 1));
            }
        for (int i = 0; i < n; ++i) add_term(cubic[i], "x" + std::to_string(i + 1) + "^3");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j)
                    add_term(cross(i, j),
                             "x" + std::to_string(i + 1) + "^2*x" + std::to_string(j + 1));
        if (out.empty()) out = "0";
        return out;
    }
};

}  // namespace

std::vector<std::string> metric_catalog_names() {
    return {"euclidean", "sphere_projective", "poincare_ball", "funk_disk", "rand_riemann"};
}

std::vector<std::string> factor_catalog_names() {
    return {"zero", "funk_half", "x1y1", "rand_homog"};
}

MetricSpec metric_catalog(const std::string& name, int dim, std::uint64_t seed) {
    require_dim(name, dim);
    const int n = dim;
    MetricSpec spec;
    spec.name = name;
    spec.dim = n;

    if (name == "euclidean") {
        spec.expr = parse("sqrt(" + y_norm2(n) + ")", n);
        spec.domain = {1.0, std::nullopt};
        spec.expected_curvature = 0.0;
        spec.riemannian_g = [n](const VecXd&) { return MatNd::Identity(n, n).eval(); };
        spec.note = "flat Euclidean norm";
        return spec;
    }
    if (name == "sphere_projective") {
        // Round sphere of curvature +1 in central-projection coordinates;
        // geodesics are straight lines.
        const std::string q = "(" + x_norm2(n) + ")";
        const std::string text = "sqrt((1+" + q + ")*(" + y_norm2(n) + ")-(" + xy_dot(n) + ")^2)/(1+" + q + ")";
        spec.expr = parse(text, n);
        spec.domain = {1.0, std::nullopt};
        spec.expected_curvature = 1.0;
        spec.riemannian_g = [n](const VecXd& x) {
            const double w = 1.0 + x.squaredNorm();
            MatNd g = (MatNd::Identity(n, n) * w - x * x.transpose()) / (w * w);
            return g;
        };
        spec.note = "round sphere, gnomonic chart";
        return spec;
    }
    if (name == "poincare_ball") {
        const std::string text = "2*sqrt(" + y_norm2(n) + ")/(1-(" + x_norm2(n) + "))";
        spec.expr = parse(text, n);
        spec.domain = {0.8, 0.8};
        spec.expected_curvature = -1.0;
        spec.riemannian_g = [n](const VecXd& x) {
            const double c = 2.0 / (1.0 - x.squaredNorm());
            return (MatNd::Identity(n, n) * (c * c)).eval();
        };
        spec.note = "hyperbolic space, conformal ball model";
        return spec;
    }
    if (name == "funk_disk") {
        // Positive root of |y + F x|^2 = F^2, entered in solved form.
        const std::string d = "(" + xy_dot(n) + ")";
        const std::string text =
            "(" + d + "+sqrt(" + d + "^2+(" + y_norm2(n) + ")*(1-(" + x_norm2(n) + "))))/(1-(" +
            x_norm2(n) + "))";
        spec.expr = parse(text, n);
        spec.domain = {0.8, 0.8};
        spec.expected_curvature = -0.25;
        spec.note = "Funk metric of the unit ball";
        return spec;
    }
    if (name == "rand_riemann") {
        // Conformal perturbation of the flat metric: F = exp(phi(x)) |y| with a
        // random cubic phi. Positive-definite everywhere; curvature is
        // generically non-constant on the box.
        const ConformalFactor phi = ConformalFactor::generate(n, seed);
        spec.expr = parse("exp(" + phi.to_dsl(n) + ")*sqrt(" + y_norm2(n) + ")", n);
        spec.domain = {0.8, std::nullopt};
        spec.riemannian_g = [n, phi](const VecXd& x) {
            const double c = std::exp(2.0 * phi.value(x));
            return (MatNd::Identity(n, n) * c).eval();
        };
        spec.note = "random conformal perturbation of the flat metric, seed " + std::to_string(seed);
        return spec;
    }
    throw ConfigError("unknown catalog metric '" + name + "'");
}

FactorSpec factor_catalog(const std::string& name, int dim, std::uint64_t seed) {
    require_dim(name, dim);
    const int n = dim;
    FactorSpec spec;
    spec.name = name;
    spec.dim = n;

    if (name == "zero") {
        spec.expr = parse("0", n);
        spec.note = "trivial deformation";
        return spec;
    }
    if (name == "funk_half") {
        const MetricSpec funk = metric_catalog("funk_disk", n);
        spec.expr = parse("0.5*(" + print(funk.expr) + ")", n);
        spec.note = "half the Funk metric; Hamel with respect to the flat spray";
        return spec;
    }
    if (name == "x1y1") {
        // x^1 (y^1)^2 / |y|: positively 1-homogeneous, explicitly x-dependent,
        // and its flat-spray Hamel residual is y1^2 y2^2 / |y|^3-sized.
        spec.expr = parse("x1*y1^2/sqrt(" + y_norm2(n) + ")", n);
        spec.note = "x^1 (y^1)^2 / |y|; not a Hamel function of the flat spray";
        return spec;
    }
    if (name == "rand_homog") {
        // P = sum_i a_i(x) y^i + c |y| with affine a_i: smooth and positively
        // 1-homogeneous on the slit bundle, generically not Hamel.
        Rng rng(seed * 0x9d2c5681u + 5u);
        std::string out;
        for (int i = 1; i <= n; ++i) {
            std::string coeff = num(rng.uniform(-0.3, 0.3));
            for (int k = 1; k <= n; ++k)
                coeff += "+" + num(rng.uniform(-0.3, 0.3)) + "*x" + std::to_string(k);
            if (i > 1) out += "+";
            out += "(" + coeff + ")*y" + std::to_string(i);
        }
        out += "+" + num(rng.uniform(0.05, 0.3)) + "*sqrt(" + y_norm2(n) + ")";
        spec.expr = parse(out, n);
        spec.note = "random 1-homogeneous factor, seed " + std::to_string(seed);
        return spec;
    }
    throw ConfigError("unknown catalog factor '" + name + "'");
}

MetricSpec metric_from_file(const std::string& path) {
    MetricSpec spec;
    spec.expr = load_expr_file(path);
    spec.dim = spec.expr.dim;
    spec.name = path;
    spec.domain = {0.8, std::nullopt};
    spec.note = "user metric file";
    return spec;
}

FactorSpec factor_from_file(const std::string& path) {
    FactorSpec spec;
    spec.expr = load_expr_file(path);
    spec.dim = spec.expr.dim;
    spec.name = path;
    spec.note = "user factor file";
    return spec;
}

}  // namespace spraylab
