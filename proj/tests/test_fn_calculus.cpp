#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "spraylab/catalog.hpp"
#include "spraylab/curvature.hpp"
#include "spraylab/sampling.hpp"

using namespace spraylab;

namespace {

PhasePointd point2(double x1, double x2, double y1, double y2) {
    PhasePointd p;
    p.x = VecXd(2);
    p.x << x1, x2;
    p.y = VecXd(2);
    p.y << y1, y2;
    return p;
}

const PhasePointd kP = point2(0.3, -0.2, 1.1, 0.7);

}  // namespace

TEST_CASE("vertical endomorphism squares to zero and sends sprays to the dilation field") {
    auto J = vertical_endo();
    auto C = liouville();
    const auto spec = metric_catalog("funk_disk", 2);
    const auto spray = geodesic_spray(spec, 2, "funk");
    auto S = spray_field(spray);
    VecXd v(4);
    v << 0.5, -1.0, 2.0, 3.0;
    CHECK(J(kP, J(kP, v)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((J(kP, S(kP)) - C(kP)).cwiseAbs().maxCoeff() < 1e-14);

    PhasePointd q = point2(0.1, 0.4, 2.0, 0.0);
    const VecXd c = C(q);
    CHECK(c[0] == 0.0);
    CHECK(c[1] == 0.0);
    CHECK(c[2] == 2.0);
    CHECK(c[3] == 0.0);
}

TEST_CASE("Lie bracket basics") {
    // [C, S] = S for the Euclidean geodesic spray
    const auto spec = metric_catalog("euclidean", 2);
    const auto spray = geodesic_spray(spec, 2, "euclid");
    auto S = spray_field(spray);
    auto C = liouville();
    auto CS = lie_bracket(C, S);
    CHECK((CS(kP) - S(kP)).cwiseAbs().maxCoeff() < 1e-10);

    // [X, X] = 0
    auto X = vector_field([](const auto& p) {
        using T = std::decay_t<decltype(p.x[0])>;
        VecX<T> out(4);
        out << p.x[0] * p.y[1], p.y[0], p.x[1], p.y[1] * p.y[0];
        return out;
    });
    CHECK(lie_bracket(X, X)(kP).cwiseAbs().maxCoeff() < 1e-12);

    // [d/dx1, x1 d/dx2] = d/dx2
    auto e1 = vector_field([](const auto& p) {
        using T = std::decay_t<decltype(p.x[0])>;
        (void)p;
        return basis_tangent<T>(2, 0);
    });
    auto x1e2 = vector_field([](const auto& p) {
        using T = std::decay_t<decltype(p.x[0])>;
        VecX<T> out = VecX<T>::Zero(4);
        out[1] = p.x[0];
        return out;
    });
    const VecXd br = lie_bracket(e1, x1e2)(kP);
    CHECK(br[0] == 0.0);
    CHECK(br[1] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(br[2] == 0.0);
    CHECK(br[3] == 0.0);
}

TEST_CASE("FN bracket of J with itself vanishes") {
    auto J = vertical_endo();
    auto JJ = fn_bracket(J, J);
    const auto battery = tangent_battery(2, 8, 3);
    for (const auto& [u, w] : battery)
        CHECK(JJ(kP, u, w).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("flat spray has flat connection, curvature and Jacobi endomorphism") {
    const auto spec = metric_catalog("euclidean", 2);
    const auto spray = geodesic_spray(spec, 2, "euclid");
    auto S = spray_field(spray);
    auto J = vertical_endo();
    auto h = 0.5 * (identity_endo() - fn_bracket(S, J));
    VecXd v(4);
    v << 0.5, -1.0, 2.0, 3.0;
    const VecXd hv = h(kP, v);
    CHECK(hv[0] == 0.5);
    CHECK(hv[1] == -1.0);
    CHECK(std::abs(hv[2]) < 1e-14);
    CHECK(std::abs(hv[3]) < 1e-14);

    auto R = 0.5 * fn_bracket(h, h);
    auto v_proj = vertical_projector(spray);
    auto Phi_fn = compose_endo(v_proj, fn_bracket(S, h));
    const auto battery = tangent_battery(2, 4, 3);
    for (const auto& [u, w] : battery) {
        CHECK(R(kP, u, w).cwiseAbs().maxCoeff() < 1e-13);
        CHECK(Phi_fn(kP, u).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("bracket route matches the coordinate connection on a curved metric") {
    const auto spec = metric_catalog("sphere_projective", 2);
    const auto spray = geodesic_spray(spec, 2, "sphere");
    auto S = spray_field(spray);
    auto J = vertical_endo();
    auto h_fast = horizontal_projector(spray);
    auto h_fn = 0.5 * (identity_endo() - fn_bracket(S, J));
    auto Phi = jacobi_endomorphism(spray);
    auto R = curvature_tensor(spray);
    auto JPhi = fn_bracket(J, Phi);
    auto iSR = insert_field(S, R);
    const auto points = sample_points(spec, 5, 17);
    const auto battery = tangent_battery(2, 8, 3);
    for (const auto& p : points)
        for (const auto& [u, w] : battery) {
            CHECK((h_fast(p, u) - h_fn(p, u)).cwiseAbs().maxCoeff() < 1e-8);
            CHECK((JPhi(p, u, w) - 3.0 * R(p, u, w)).cwiseAbs().maxCoeff() < 1e-7);
            CHECK((iSR(p, u) - Phi(p, u)).cwiseAbs().maxCoeff() < 1e-7);
        }
}

TEST_CASE("exterior derivative basics") {
    auto constant = scalar_field([](const auto& p) {
        using T = std::decay_t<decltype(p.x[0])>;
        (void)p;
        return T(4.5);
    });
    auto F = scalar_field([](const auto& p) { return sqrt(p.y.squaredNorm()); });
    auto dconst = exterior_d(constant);
    auto dF = exterior_d(F);
    auto ddF = exterior_d(dF);
    const PhasePointd p34 = point2(0.0, 0.0, 3.0, 4.0);
    const auto battery = tangent_battery(2, 8, 5);
    for (const auto& [u, w] : battery) {
        CHECK(std::abs(dconst(kP, u)) == 0.0);
        CHECK(std::abs(ddF(kP, u, w)) < 1e-9);
    }
    CHECK(dF(p34, basis_tangent<double>(2, 2)) == doctest::Approx(0.6).epsilon(1e-14));
}

TEST_CASE("i_K and d_K behave as the derivation laws dictate") {
    auto J = vertical_endo();
    auto F = scalar_field([](const auto& p) { return sqrt(p.y.squaredNorm()); });
    auto dJF = fn_derive(J, F);
    const PhasePointd p34 = point2(0.0, 0.0, 3.0, 4.0);
    CHECK(dJF(p34, basis_tangent<double>(2, 0)) == doctest::Approx(0.6).epsilon(1e-14));

    // d_h F = 0 for every catalog metric with its own geodesic spray
    for (const auto& name : metric_catalog_names()) {
        const auto spec = metric_catalog(name, 2, 5);
        const auto spray = geodesic_spray(spec, 2, name);
        auto metric = scalar_field([spec](const auto& q) { return spec(q); });
        auto dhF = fn_derive(horizontal_projector(spray), metric);
        const auto points = sample_points(spec, 5, 6);
        for (const auto& p : points) {
            double worst = 0.0;
            for (const auto& [u, w] : tangent_battery(2, 4, 3))
                worst = std::max(worst, std::abs(dhF(p, u)));
            CAPTURE(name);
            CHECK(worst < 1e-8 * std::max(1.0, metric(p)));
        }
    }
}

TEST_CASE("semi-basic trace rules") {
    auto J = vertical_endo();
    auto C = liouville();
    CHECK(semi_basic_trace(J)(kP) == doctest::Approx(2.0).epsilon(1e-15));

    // Tr(d_J F (x) C) = C(F) = F by Euler homogeneity
    auto F = scalar_field([](const auto& p) { return sqrt(p.y.squaredNorm()); });
    auto K = tensor(fn_derive(J, F), C);
    CHECK(semi_basic_trace(K)(kP) == doctest::Approx(F(kP)).epsilon(1e-12));

    // Tr(Phi) vanishes for the flat spray
    const auto spray = geodesic_spray(metric_catalog("euclidean", 2), 2, "euclid");
    CHECK(std::abs(semi_basic_trace(jacobi_endomorphism(spray))(kP)) < 1e-14);

    // the identity endomorphism is not semi-basic
    CHECK_THROWS_AS(semi_basic_trace(identity_endo())(kP), PreconditionError);
}

TEST_CASE("projector algebra and semi-basicity over 100 points per metric") {
    for (const auto& name : {"euclidean", "sphere_projective", "funk_disk"}) {
        const auto spec = metric_catalog(name, 2, 1);
        const auto spray = geodesic_spray(spec, 2, name);
        auto h = horizontal_projector(spray);
        auto v = vertical_projector(spray);
        auto Phi = jacobi_endomorphism(spray);
        auto R = curvature_tensor(spray);
        auto xi = curvature_one_form(spray);
        auto dJxi = fn_derive(vertical_endo(), xi);
        const auto points = sample_points(spec, 100, 23);
        const auto battery = tangent_battery(2, 2, 3);
        double algebra = 0.0, semib = 0.0, alt = 0.0;
        for (const auto& p : points)
            for (const auto& [u, w] : battery) {
                algebra = std::max(algebra, (h(p, u) + v(p, u) - u).cwiseAbs().maxCoeff());
                algebra = std::max(algebra, (h(p, h(p, u)) - h(p, u)).cwiseAbs().maxCoeff());
                algebra = std::max(algebra, (v(p, v(p, u)) - v(p, u)).cwiseAbs().maxCoeff());
                algebra = std::max(algebra, h(p, v(p, u)).cwiseAbs().maxCoeff());
                VecXd vert = VecXd::Zero(4);
                vert.tail(2) = u.head(2);
                semib = std::max(semib, Phi(p, vert).cwiseAbs().maxCoeff());
                semib = std::max(semib, R(p, vert, w).cwiseAbs().maxCoeff());
                semib = std::max(semib, std::abs(xi(p, vert)));
                semib = std::max(semib, std::abs(dJxi(p, vert, w)));
                alt = std::max(alt, (R(p, u, w) + R(p, w, u)).cwiseAbs().maxCoeff());
                alt = std::max(alt, std::abs(dJxi(p, u, w) + dJxi(p, w, u)));
            }
        CAPTURE(name);
        CHECK(algebra < 1e-9);
        CHECK(semib < 1e-9);
        CHECK(alt < 1e-10);
    }
}

TEST_CASE("i_S d_h xi vanishes for isotropic sprays in dimension three") {
    const auto spec = metric_catalog("sphere_projective", 3);
    const auto spray = geodesic_spray(spec, 3, "sphere3");
    auto xi = curvature_one_form(spray);
    auto dhxi = fn_derive(horizontal_projector(spray), xi);
    auto contracted = insert_field(spray_field(spray), dhxi);
    const auto points = sample_points(spec, 3, 31);
    const auto battery = tangent_battery(3, 4, 3);
    for (const auto& p : points)
        for (const auto& [u, w] : battery) CHECK(std::abs(contracted(p, u)) < 1e-9);
}

TEST_CASE("constant extension is immaterial: brackets against genuine fields") {
    // Evaluate [K, L] pointwise with linearly extended arguments through the
    // full bracket formula (including the (LK + KL)[X, Y] correction) and
    // compare with the constant-extension evaluation.
    const auto spec = metric_catalog("funk_disk", 2);
    const auto spray = geodesic_spray(spec, 2, "funk");
    auto J = vertical_endo();
    auto h = horizontal_projector(spray);

    Rng rng(8);
    Eigen::Matrix<double, 4, 4> A, B;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            A(i, j) = rng.uniform(-0.4, 0.4);
            B(i, j) = rng.uniform(-0.4, 0.4);
        }
    const VecXd x0 = tangent_battery(2, 2, 41)[0][0];
    const VecXd y0 = tangent_battery(2, 2, 41)[1][0];
    const PhasePointd p0 = kP;

    auto linear_field = [&](const VecXd& base, const Eigen::Matrix<double, 4, 4>& slope) {
        return vector_field([base, slope, p0](const auto& p) {
            using T = std::decay_t<decltype(p.x[0])>;
            VecX<T> delta(4);
            for (int i = 0; i < 2; ++i) {
                delta[i] = p.x[i] - p0.x[i];
                delta[2 + i] = p.y[i] - p0.y[i];
            }
            VecX<T> out(4);
            for (int i = 0; i < 4; ++i) {
                T acc(base[i]);
                for (int j = 0; j < 4; ++j) acc += slope(i, j) * delta[j];
                out[i] = acc;
            }
            return out;
        });
    };
    auto X = linear_field(x0, A);
    auto Y = linear_field(y0, B);

    auto full_bracket = [&](const auto& K, const auto& L) {
        auto KX = apply_endo(K, X);
        auto KY = apply_endo(K, Y);
        auto LX = apply_endo(L, X);
        auto LY = apply_endo(L, Y);
        auto XY = lie_bracket(X, Y);
        const VecXd k_part = (lie_bracket(KX, Y)(p0) - lie_bracket(KY, X)(p0)).eval();
        const VecXd l_part = (lie_bracket(LX, Y)(p0) - lie_bracket(LY, X)(p0)).eval();
        const VecXd term = lie_bracket(KX, LY)(p0) - lie_bracket(KY, LX)(p0) - L(p0, k_part) -
                           K(p0, l_part) + L(p0, K(p0, XY(p0))) + K(p0, L(p0, XY(p0)));
        return term;
    };

    auto JH = fn_bracket(J, h);
    CHECK((full_bracket(J, h) - JH(p0, x0, y0)).cwiseAbs().maxCoeff() < 1e-9);
    auto HH = fn_bracket(h, h);
    CHECK((full_bracket(h, h) - HH(p0, x0, y0)).cwiseAbs().maxCoeff() < 1e-9);

    // same story for the exterior derivative of a 1-form
    auto xi = curvature_one_form(spray);
    auto omega_Y = scalar_field([xi, Y](const auto& p) { return xi(p, Y(p)); });
    auto omega_X = scalar_field([xi, X](const auto& p) { return xi(p, X(p)); });
    const double full_d = ddir(omega_Y, p0, X(p0)) - ddir(omega_X, p0, Y(p0)) -
                          xi(p0, lie_bracket(X, Y)(p0));
    auto dxi = exterior_d(xi);
    CHECK(std::abs(full_d - dxi(p0, x0, y0)) < 1e-9);
}
