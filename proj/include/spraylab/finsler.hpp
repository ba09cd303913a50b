#pragma once

// From a Finsler metric F: the fundamental tensor g, the geodesic spray, and
// pointwise validation of the Finsler axioms. Everything is generic over the
// scalar type so spray data can be differentiated further downstream.

#include <string>

#include "spraylab/fn_calculus.hpp"

namespace spraylab {

/// Fundamental tensor g_ij = (1/2) d^2 F^2 / dy^i dy^j at a point, any scalar.
template <typename FF, typename T>
MatN<T> fundamental_tensor(const FF& metric, const PhasePoint<T>& p) {
    const int n = p.dim();
    auto f_squared = [&metric](const auto& q) {
        const auto value = metric(q);
        return value * value;
    };
    MatN<T> g(n, n);
    for (int j = 0; j < n; ++j) {
        const auto pj = lift(p, basis_tangent<T>(n, n + j));
        for (int i = 0; i <= j; ++i) {
            const auto pij = lift(pj, basis_tangent<Jet<T>>(n, n + i));
            g(i, j) = derivative(derivative(f_squared(pij))) * T(0.5);
            if (i != j) g(j, i) = g(i, j);
        }
    }
    return g;
}

namespace detail {

template <typename T>
void check_invertible(const MatN<T>& g, const T& det) {
    double scale = 1.0;
    for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j) scale = std::max(scale, std::abs(primal_value(g(i, j))));
    const double floor = 1e-13 * std::pow(scale, static_cast<double>(g.rows()));
    if (std::abs(primal_value(det)) <= floor)
        throw EvalError("not a Finsler metric at this point: singular fundamental tensor");
}

}  // namespace detail

/// Fundamental tensor with its inverse and condition number (plain reals).
/// Throws EvalError when g is singular or indefinite.
struct MetricTensor {
    MatNd g;
    MatNd g_inv;
    double condition;
};

template <typename FF>
MetricTensor metric_tensor(const FF& metric, const PhasePointd& p) {
    MetricTensor out;
    out.g = fundamental_tensor(metric, p);
    Eigen::SelfAdjointEigenSolver<MatNd> eig(out.g);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (lo <= 0.0)
        throw EvalError("not a Finsler metric at this point: fundamental tensor not positive-definite");
    out.condition = hi / lo;
    const auto lu = out.g.partialPivLu();
    detail::check_invertible(out.g, lu.determinant());
    out.g_inv = lu.inverse();
    return out;
}

/// Spray data: coefficient map G (2-homogeneous n-vector) plus provenance.
/// The spray vector field is S = y^i d/dx^i - 2 G^i d/dy^i.
template <typename GF>
struct Spray {
    int dim = 0;
    GF coeffs;  // PhasePoint<T> -> VecX<T> (n components)
    std::string source;

    template <typename T>
    VecX<T> operator()(const PhasePoint<T>& p) const {
        const int n = p.dim();
        VecX<T> out(2 * n);
        out.head(n) = p.y;
        out.tail(n) = -2.0 * coeffs(p);
        return out;
    }
};

template <typename GF>
Spray<GF> make_spray(int dim, GF coeffs, std::string source) {
    return {dim, std::move(coeffs), std::move(source)};
}

/// The spray as a plain vector field.
template <typename GF>
auto spray_field(const Spray<GF>& s) {
    return vector_field([s](const auto& p) { return s(p); });
}

/// Geodesic spray of F: G^i = (1/4) g^{il} ( d_{y^l} A - 2 d_{x^l} F^2 ),
/// where A = y^k d_{x^k} F^2. Singular g propagates as EvalError.
template <typename FF>
auto geodesic_spray(const FF& metric, int dim, std::string source = "geodesic") {
    auto coeffs = [metric](const auto& p) {
        using T = std::decay_t<decltype(p.x[0])>;
        const int n = p.dim();
        auto f_squared = [&metric](const auto& q) {
            const auto value = metric(q);
            return value * value;
        };
        // A(q) = y . d_x F^2, evaluated via a lift along (y, 0)
        auto radial_x_derivative = [&f_squared](const auto& q) {
            using U = std::decay_t<decltype(q.x[0])>;
            const int m = q.dim();
            VecX<U> dir = VecX<U>::Zero(2 * m);
            dir.head(m) = q.y;
            return derivative(f_squared(lift(q, dir)));
        };
        const MatN<T> g = fundamental_tensor(metric, p);
        VecX<T> rhs(n);
        for (int l = 0; l < n; ++l) {
            const auto along_yl = lift(p, basis_tangent<T>(n, n + l));
            const auto along_xl = lift(p, basis_tangent<T>(n, l));
            rhs[l] = derivative(radial_x_derivative(along_yl)) -
                     T(2.0) * derivative(f_squared(along_xl));
        }
        const auto lu = g.partialPivLu();
        detail::check_invertible(g, lu.determinant());
        VecX<T> coeffs_out = lu.solve(rhs);
        coeffs_out *= T(0.25);
        return coeffs_out;
    };
    return make_spray(dim, std::move(coeffs), std::move(source));
}

/// Projective deformation S~ = S - 2 P C, i.e. G~^i = G^i + P y^i.
/// P must be positively 1-homogeneous; callers verify via `euler_defect`.
template <typename GF, typename PF>
auto deform_spray(const Spray<GF>& s, const PF& factor) {
    auto coeffs = [base = s.coeffs, factor](const auto& p) {
        return (base(p) + factor(p) * p.y).eval();
    };
    return make_spray(s.dim, std::move(coeffs), s.source + " deformed");
}

/// |C(f) - k f| at p, the Euler defect of positive k-homogeneity in y.
template <typename FF>
double euler_defect(const FF& f, const PhasePointd& p, double k = 1.0) {
    const int n = p.dim();
    VecXd dir = VecXd::Zero(2 * n);
    dir.tail(n) = p.y;
    return std::abs(ddir(f, p, dir) - k * f(p));
}

/// Per-point Finsler axiom diagnostics; failures are entries, not errors.
struct AxiomRecord {
    PhasePointd point;
    bool positive = false;
    double homogeneity_defect = 0.0;  // max_l |F(x,ly) - l F(x,y)| / (l F)
    bool g_positive_definite = false;
    double condition = 0.0;
    std::string error;  // non-empty when g could not be formed
};

template <typename FF>
AxiomRecord finsler_axioms_at(const FF& metric, const PhasePointd& p) {
    AxiomRecord rec;
    rec.point = p;
    const double value = metric(p);
    rec.positive = value > 0.0;
    for (const double lambda : {0.5, 2.0, 3.73205080756887729}) {
        PhasePointd q{p.x, (p.y * lambda).eval()};
        rec.homogeneity_defect = std::max(
            rec.homogeneity_defect,
            std::abs(metric(q) - lambda * value) / std::max(1e-300, lambda * std::abs(value)));
    }
    try {
        const MetricTensor mt = metric_tensor(metric, p);
        rec.g_positive_definite = true;
        rec.condition = mt.condition;
    } catch (const EvalError& e) {
        rec.error = e.what();
    }
    return rec;
}

}  // namespace spraylab
