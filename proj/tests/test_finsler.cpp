#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "spraylab/catalog.hpp"
#include "spraylab/curvature.hpp"
#include "spraylab/sampling.hpp"

using namespace spraylab;

TEST_CASE("fundamental tensor of the Euclidean metric is the identity") {
    const auto spec = metric_catalog("euclidean", 2);
    const auto points = sample_points(spec, 5, 2);
    for (const auto& p : points) {
        const MetricTensor mt = metric_tensor(spec, p);
        CHECK((mt.g - MatNd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(mt.condition == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("poincare ball tensor at the center is four times the identity") {
    const auto spec = metric_catalog("poincare_ball", 2);
    PhasePointd center{VecXd::Zero(2), VecXd::Zero(2)};
    center.y << 1.0, 0.0;
    const MetricTensor mt = metric_tensor(spec, center);
    CHECK((mt.g - 4.0 * MatNd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Euler identity y^i y^j g_ij = F^2 holds for the Funk metric") {
    const auto spec = metric_catalog("funk_disk", 2);
    const auto points = sample_points(spec, 10, 4);
    for (const auto& p : points) {
        const MetricTensor mt = metric_tensor(spec, p);
        const double f = spec(p);
        CHECK(p.y.dot(mt.g * p.y) == doctest::Approx(f * f).epsilon(1e-10));
        Eigen::SelfAdjointEigenSolver<MatNd> eig(mt.g);
        CHECK(eig.eigenvalues().minCoeff() > 0.0);
    }
    PhasePointd center{VecXd::Zero(2), VecXd::Zero(2)};
    center.y << 1.0, 0.0;
    const MetricTensor mt = metric_tensor(spec, center);
    CHECK(center.y.dot(mt.g * center.y) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a fiberwise-linear function is flagged as degenerate") {
    MetricSpec degenerate;
    degenerate.name = "linear";
    degenerate.dim = 2;
    degenerate.expr = parse("y1", 2);
    degenerate.domain = {0.5, std::nullopt};
    const auto points = sample_points(degenerate, 5, 6);
    for (const auto& p : points) {
        CHECK_THROWS_AS(metric_tensor(degenerate, p), EvalError);
        const AxiomRecord rec = finsler_axioms_at(degenerate, p);
        CHECK_FALSE(rec.g_positive_definite);
        CHECK_FALSE(rec.error.empty());
    }
}

TEST_CASE("Euclidean geodesics are straight lines") {
    const auto spec = metric_catalog("euclidean", 3);
    const auto spray = geodesic_spray(spec, 3, "euclid");
    const auto points = sample_points(spec, 5, 7);
    for (const auto& p : points) CHECK(spray.coeffs(p).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("Funk spray satisfies the proportionality G = F y / 2") {
    const auto spec = metric_catalog("funk_disk", 2);
    const auto spray = geodesic_spray(spec, 2, "funk");
    const auto points = sample_points(spec, 20, 8);
    for (const auto& p : points) {
        const VecXd lhs = spray.coeffs(p);
        const VecXd rhs = (0.5 * spec(p) * p.y).eval();
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() / std::max(1.0, rhs.cwiseAbs().maxCoeff()) < 1e-8);
    }
}

TEST_CASE("Riemannian sprays match the Christoffel oracle") {
    for (const char* name : {"poincare_ball", "sphere_projective", "rand_riemann"}) {
        const auto spec = metric_catalog(name, 2, 3);
        const auto spray = geodesic_spray(spec, 2, name);
        oracles::RiemannOracle oracle{2, spec.riemannian_g};
        const auto points = sample_points(spec, 8, 9);
        for (const auto& p : points) {
            const VecXd mine = spray.coeffs(p);
            const VecXd theirs = oracle.spray_coeffs(p);
            CAPTURE(name);
            CHECK((mine - theirs).cwiseAbs().maxCoeff() < 1e-8);
        }
    }
}

TEST_CASE("sprays agree with the all-finite-difference route") {
    for (const char* name : {"funk_disk", "sphere_projective"}) {
        const auto spec = metric_catalog(name, 2);
        const auto spray = geodesic_spray(spec, 2, name);
        const auto points = sample_points(spec, 5, 10);
        for (const auto& p : points) {
            const VecXd mine = spray.coeffs(p);
            const VecXd fd = oracles::fd_spray_coeffs(spec, p);
            CAPTURE(name);
            CHECK((mine - fd).cwiseAbs().maxCoeff() < 1e-5);
        }
    }
}

TEST_CASE("spray axiom residuals and homogeneity") {
    for (const auto& name : metric_catalog_names()) {
        const auto spec = metric_catalog(name, 2, 5);
        const auto spray = geodesic_spray(spec, 2, name);
        auto S = spray_field(spray);
        auto C = liouville();
        auto J = vertical_endo();
        auto CS = lie_bracket(C, S);
        const auto points = sample_points(spec, 10, 11);
        for (const auto& p : points) {
            CAPTURE(name);
            // JS = C and [C, S] = S
            CHECK((J(p, S(p)) - C(p)).cwiseAbs().maxCoeff() < 1e-9);
            const double s_scale = std::max(1.0, S(p).cwiseAbs().maxCoeff());
            CHECK((CS(p) - S(p)).cwiseAbs().maxCoeff() < 1e-9 * s_scale);
            // G(x, l y) = l^2 G(x, y)
            const double lambda = 1.7;
            const PhasePointd scaled{p.x, (lambda * p.y).eval()};
            const VecXd g_scaled = spray.coeffs(scaled);
            const VecXd g_base = spray.coeffs(p);
            CHECK((g_scaled - lambda * lambda * g_base).cwiseAbs().maxCoeff() <
                  1e-8 * std::max(1.0, g_scaled.cwiseAbs().maxCoeff()));
            // C(F) = F
            CHECK(euler_defect(spec, p) < 1e-9 * std::max(1.0, spec(p)));
        }
    }
}

TEST_CASE("axiom sweep passes on the random Riemannian metric") {
    const auto spec = metric_catalog("rand_riemann", 2, 1);
    const auto points = sample_points(spec, 100, 12);
    for (const auto& p : points) {
        const AxiomRecord rec = finsler_axioms_at(spec, p);
        CHECK(rec.positive);
        CHECK(rec.g_positive_definite);
        CHECK(rec.homogeneity_defect < 1e-10);
    }
}

TEST_CASE("projective deformation and factor recovery") {
    const auto eu = metric_catalog("euclidean", 2);
    const auto base = geodesic_spray(eu, 2, "euclid");
    const auto funk = metric_catalog("funk_disk", 2);
    const auto funk_spray = geodesic_spray(funk, 2, "funk");
    const FactorSpec half = factor_catalog("funk_half", 2);
    auto P = scalar_field([half](const auto& p) { return half(p); });

    // P = 0 leaves the spray unchanged
    auto zero = scalar_field([](const auto& p) {
        using T = std::decay_t<decltype(p.x[0])>;
        (void)p;
        return T(0.0);
    });
    const auto trivial = deform_spray(base, zero);
    const auto deformed = deform_spray(base, P);
    const auto points = sample_points(funk, 10, 13);
    for (const auto& p : points) {
        CHECK((trivial.coeffs(p) - base.coeffs(p)).cwiseAbs().maxCoeff() == 0.0);
        // the deformed flat spray is the Funk geodesic spray
        CHECK((deformed.coeffs(p) - funk_spray.coeffs(p)).cwiseAbs().maxCoeff() < 1e-8);
        // recovering the factor: (G~ - G) = P y componentwise
        const VecXd diff = deformed.coeffs(p) - base.coeffs(p);
        const double p_recovered = diff.dot(p.y) / p.y.squaredNorm();
        CHECK((diff - p_recovered * p.y).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(p_recovered == doctest::Approx(half(p)).epsilon(1e-10));
    }
}

TEST_CASE("high condition numbers are surfaced") {
    const auto spec = metric_catalog("funk_disk", 2);
    PhasePointd p{VecXd::Zero(2), VecXd::Zero(2)};
    p.x << 0.75, 0.0;
    p.y << 1.0, 0.2;
    const MetricTensor mt = metric_tensor(spec, p);
    CHECK(mt.condition >= 1.0);
    CHECK((mt.g * mt.g_inv - MatNd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
}
