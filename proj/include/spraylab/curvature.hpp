#pragma once

// Curvature apparatus of a spray: nonlinear connection, Jacobi endomorphism,
// curvature tensor, isotropy decomposition and the curvature 1-form.
//
// These are the coordinate fast paths (jet-exact, no finite differences); the
// bracket-based operator definitions live in fn_calculus.hpp and serve as an
// independent route that tests and the invariants checker compare against.

#include "spraylab/finsler.hpp"

namespace spraylab {

/// Connection coefficients N^i_j = dG^i/dy^j as a matrix-valued functor.
template <typename GF>
auto connection_matrix(const Spray<GF>& s) {
    return [coeffs = s.coeffs](const auto& p) {
        using T = std::decay_t<decltype(p.x[0])>;
        const int n = p.dim();
        MatN<T> nm(n, n);
        for (int j = 0; j < n; ++j)
            nm.col(j) = derivative_part(coeffs(lift(p, basis_tangent<T>(n, n + j))));
        return nm;
    };
}

/// Horizontal projector: (a, b) -> (a, -N a).
template <typename GF>
auto horizontal_projector(const Spray<GF>& s) {
    return vector_form<1>([nmat = connection_matrix(s)](const auto& p, const auto& args) {
        using T = std::decay_t<decltype(p.x[0])>;
        const int n = p.dim();
        VecX<T> out(2 * n);
        out.head(n) = args[0].head(n);
        out.tail(n) = -(nmat(p) * args[0].head(n));
        return out;
    });
}

/// Vertical projector: (a, b) -> (0, b + N a).
template <typename GF>
auto vertical_projector(const Spray<GF>& s) {
    return vector_form<1>([nmat = connection_matrix(s)](const auto& p, const auto& args) {
        using T = std::decay_t<decltype(p.x[0])>;
        const int n = p.dim();
        VecX<T> out = VecX<T>::Zero(2 * n);
        out.tail(n) = args[0].tail(n) + nmat(p) * args[0].head(n);
        return out;
    });
}

/// Jacobi endomorphism components:
/// Phi^i_j = 2 dG^i/dx^j - S(N^i_j) - N^i_k N^k_j.
template <typename GF>
auto jacobi_matrix(const Spray<GF>& s) {
    return [s, nmat = connection_matrix(s)](const auto& p) {
        using T = std::decay_t<decltype(p.x[0])>;
        const int n = p.dim();
        MatN<T> two_gx(n, n);
        for (int j = 0; j < n; ++j)
            two_gx.col(j) = derivative_part(s.coeffs(lift(p, basis_tangent<T>(n, j)))) * T(2.0);
        // S(N) via one lift along the spray direction
        const auto lifted = nmat(lift(p, s(p)));
        MatN<T> sn(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) sn(i, j) = derivative(lifted(i, j));
        const MatN<T> nm = nmat(p);
        return (two_gx - sn - nm * nm).eval();
    };
}

/// The Jacobi endomorphism as a semi-basic vector-valued 1-form.
template <typename GF>
auto jacobi_endomorphism(const Spray<GF>& s) {
    return vector_form<1>([phi = jacobi_matrix(s)](const auto& p, const auto& args) {
        using T = std::decay_t<decltype(p.x[0])>;
        const int n = p.dim();
        VecX<T> out = VecX<T>::Zero(2 * n);
        out.tail(n) = phi(p) * args[0].head(n);
        return out;
    });
}

/// Curvature components R^i_{jk} = delta N^i_j / delta x^k - delta N^i_k / delta x^j
/// with delta/delta x^k = d/dx^k - N^l_k d/dy^l. Returns the n matrices
/// D[k](i,j) = delta N^i_j / delta x^k.
template <typename NM, typename T>
std::array<MatN<T>, kMaxDim> horizontal_connection_derivatives(const NM& nmat,
                                                               const PhasePoint<T>& p) {
    const int n = p.dim();
    const MatN<T> nm = nmat(p);
    std::array<MatN<T>, kMaxDim> d;
    for (int k = 0; k < n; ++k) {
        VecX<T> dir = VecX<T>::Zero(2 * n);
        dir[k] = T(1.0);
        dir.tail(n) = -nm.col(k);
        const auto lifted = nmat(lift(p, dir));
        d[k].resize(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) d[k](i, j) = derivative(lifted(i, j));
    }
    return d;
}

/// Curvature of the nonlinear connection as a semi-basic vector-valued 2-form:
/// R(u, w)^i = R^i_{jk} u^j w^k on horizontal components.
template <typename GF>
auto curvature_tensor(const Spray<GF>& s) {
    return vector_form<2>([nmat = connection_matrix(s)](const auto& p, const auto& args) {
        using T = std::decay_t<decltype(p.x[0])>;
        const int n = p.dim();
        const auto d = horizontal_connection_derivatives(nmat, p);
        VecX<T> out = VecX<T>::Zero(2 * n);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                // R^i_{jk} = D[k](., j) - D[j](., k)
                out.tail(n) += (d[k].col(j) - d[j].col(k)) * (args[0][j] * args[1][k]);
            }
        return out;
    });
}

/// Ricci scalar: (1/(n-1)) tr Phi.
template <typename GF>
auto ricci_scalar(const Spray<GF>& s) {
    return scalar_field([phi = jacobi_matrix(s), n = s.dim](const auto& p) {
        return phi(p).trace() / static_cast<double>(n - 1);
    });
}

/// alpha_j recovered from Phi^i_j = rho delta^i_j - alpha_j y^i by least
/// squares over i per column (exact when the spray is isotropic).
template <typename T>
VecX<T> alpha_components(const MatN<T>& phi, const T& rho, const VecX<T>& y) {
    const int n = static_cast<int>(y.size());
    const T y2 = y.squaredNorm();
    VecX<T> alpha(n);
    for (int j = 0; j < n; ++j) {
        T acc(0.0);
        for (int i = 0; i < n; ++i) {
            T rhs = -phi(i, j);
            if (i == j) rhs += rho;
            acc += y[i] * rhs;
        }
        alpha[j] = acc / y2;
    }
    return alpha;
}

/// Pointwise isotropy data: rho, alpha and the normalized defect of
/// Phi = rho J - alpha (x) C.
struct IsotropyDecomposition {
    double rho = 0.0;
    VecXd alpha;
    double residual = 0.0;
};

template <typename PM>
IsotropyDecomposition isotropy_decompose_at(const PM& phi_matrix, const PhasePointd& p) {
    const int n = p.dim();
    const MatNd phi = phi_matrix(p);
    IsotropyDecomposition out;
    out.rho = phi.trace() / static_cast<double>(n - 1);
    out.alpha = alpha_components(phi, out.rho, p.y);
    const MatNd model =
        MatNd::Identity(n, n) * out.rho - p.y * out.alpha.transpose();
    const double scale = std::max(1.0, phi.cwiseAbs().maxCoeff());
    out.residual = (phi - model).cwiseAbs().maxCoeff() / scale;
    return out;
}

/// The semi-basic 1-form alpha of the isotropy decomposition.
template <typename GF>
auto alpha_form(const Spray<GF>& s) {
    return scalar_form<1>([phi = jacobi_matrix(s), n = s.dim](const auto& p, const auto& args) {
        using T = std::decay_t<decltype(p.x[0])>;
        const MatN<T> pm = phi(p);
        const T rho = pm.trace() / static_cast<double>(n - 1);
        const VecX<T> alpha = alpha_components(pm, rho, p.y);
        return alpha.dot(args[0].head(n));
    });
}

/// Curvature 1-form xi = (alpha + d_J rho) / 3. When isotropy fails at the
/// evaluation points, callers flag the result as formal.
template <typename GF>
auto curvature_one_form(const Spray<GF>& s) {
    return scalar_form<1>(
        [alpha = alpha_form(s), rho = ricci_scalar(s)](const auto& p, const auto& args) {
            using T = std::decay_t<decltype(p.x[0])>;
            const int n = p.dim();
            VecX<T> vertical_arg = VecX<T>::Zero(2 * n);
            vertical_arg.tail(n) = args[0].head(n);
            return (alpha(p, args) + ddir(rho, p, vertical_arg)) / 3.0;
        });
}

/// Flag curvature observable kappa = rho / F^2.
template <typename GF, typename FF>
auto flag_curvature_field(const Spray<GF>& s, const FF& metric) {
    return scalar_field([rho = ricci_scalar(s), metric](const auto& p) {
        const auto value = metric(p);
        return rho(p) / (value * value);
    });
}

/// Aggregate of the curvature apparatus of one spray.
template <typename H, typename V, typename PHI, typename RT, typename RHO, typename AL, typename XI>
struct CurvaturePack {
    int dim;
    H h;
    V v;
    PHI jacobi;
    RT curvature;
    RHO rho;
    AL alpha;
    XI xi;
};

template <typename GF>
auto make_curvature_pack(const Spray<GF>& s) {
    auto h = horizontal_projector(s);
    auto v = vertical_projector(s);
    auto phi = jacobi_endomorphism(s);
    auto r = curvature_tensor(s);
    auto rho = ricci_scalar(s);
    auto alpha = alpha_form(s);
    auto xi = curvature_one_form(s);
    return CurvaturePack<decltype(h), decltype(v), decltype(phi), decltype(r), decltype(rho),
                         decltype(alpha), decltype(xi)>{s.dim, std::move(h), std::move(v),
                                                        std::move(phi), std::move(r),
                                                        std::move(rho), std::move(alpha),
                                                        std::move(xi)};
}

}  // namespace spraylab
