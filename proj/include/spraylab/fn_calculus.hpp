#pragma once

// Numerical Frolicher-Nijenhuis calculus: Lie brackets, brackets of a vector
// field or endomorphism with vector-valued 1-forms, the exterior derivative,
// the derivations i_K and d_K, and the semi-basic trace.
//
// Argument vectors are constant-extended for pointwise evaluation; every
// object produced is tensorial, so the extension does not matter (this is
// covered by tests against generic extensions).

#include "spraylab/fields.hpp"

namespace spraylab {

/// Derivative of a scalar functor at p along the tangent direction `dir`.
template <typename G, typename T>
T ddir(const G& g, const PhasePoint<T>& p, const VecX<T>& dir) {
    return derivative(g(lift(p, dir)));
}

/// Derivative of a vector functor at p along `dir`.
template <typename G, typename T>
VecX<T> ddir_vec(const G& g, const PhasePoint<T>& p, const VecX<T>& dir) {
    return derivative_part(g(lift(p, dir)));
}

/// Lie bracket of vector fields: [X, Y] = D_X Y - D_Y X.
template <typename XF, typename YF>
auto lie_bracket(VectorField<XF> X, VectorField<YF> Y) {
    return vector_field([X = std::move(X), Y = std::move(Y)](const auto& p) {
        const auto Xp = X(p);
        const auto Yp = Y(p);
        return (ddir_vec(Y, p, Xp) - ddir_vec(X, p, Yp)).eval();
    });
}

/// FN bracket [X, K] of a vector field with a vector-valued 1-form:
/// [X, K](v) = [X, Kv] - K([X, v]) on constant-extended v.
template <typename XF, typename KF>
auto fn_bracket(VectorField<XF> X, VectorForm<1, KF> K) {
    return vector_form<1>([X = std::move(X), K = std::move(K)](const auto& p, const auto& args) {
        const auto& v = args[0];
        const auto Xp = X(p);
        const auto Kv = K(p, v);
        const auto lifted_v = lift_const(v);
        // d/dt K(p + t X(p), v)  -  d/dt X(p + t K(p, v))  +  K(p, d/dt X(p + t v))
        const auto t1 = derivative_part(K(lift(p, Xp), lifted_v));
        const auto t2 = ddir_vec(X, p, Kv);
        const auto t3 = K(p, ddir_vec(X, p, v));
        return (t1 - t2 + t3).eval();
    });
}

/// FN bracket of two vector-valued 1-forms, a vector-valued 2-form:
/// [K, L](v, w) = [Kv, Lw] - [Kw, Lv] - L([Kv, w] - [Kw, v]) - K([Lv, w] - [Lw, v])
/// on constant-extended arguments.
template <typename KF, typename LF>
auto fn_bracket(VectorForm<1, KF> K, VectorForm<1, LF> L) {
    return vector_form<2>([K = std::move(K), L = std::move(L)](const auto& p, const auto& args) {
        using T = std::decay_t<decltype(p.x[0])>;
        const auto& v = args[0];
        const auto& w = args[1];
        const VecX<T> Kv = K(p, v);
        const VecX<T> Kw = K(p, w);
        const VecX<T> Lv = L(p, v);
        const VecX<T> Lw = L(p, w);
        const auto cv = lift_const(v);
        const auto cw = lift_const(w);

        // [Kv, Lw] and [Kw, Lv] with constant arguments
        const VecX<T> a =
            derivative_part(L(lift(p, Kv), cw)) - derivative_part(K(lift(p, Lw), cv));
        const VecX<T> b =
            derivative_part(L(lift(p, Kw), cv)) - derivative_part(K(lift(p, Lv), cw));
        // [Kv, w] - [Kw, v] = -D_w K(.,v) + D_v K(.,w)
        const VecX<T> c =
            derivative_part(K(lift(p, v), cw)) - derivative_part(K(lift(p, w), cv));
        const VecX<T> d =
            derivative_part(L(lift(p, v), cw)) - derivative_part(L(lift(p, w), cv));
        return (a - b - L(p, c) - K(p, d)).eval();
    });
}

/// Exterior derivative of a function.
template <typename FF>
auto exterior_d(ScalarField<FF> f) {
    return scalar_form<1>([f = std::move(f)](const auto& p, const auto& args) {
        return ddir(f, p, args[0]);
    });
}

/// Exterior derivative of a scalar p-form on constant-extended arguments:
/// d omega(v_0..v_p) = sum_i (-1)^i d_{v_i} [omega(v_0,..,^v_i,..,v_p)].
template <int P, typename FF>
auto exterior_d(ScalarForm<P, FF> om) {
    return scalar_form<P + 1>([om = std::move(om)](const auto& p, const auto& args) {
        using T = std::decay_t<decltype(p.x[0])>;
        T acc(0.0);
        double sign = 1.0;
        for (int i = 0; i <= P; ++i) {
            const auto q = lift(p, args[i]);
            std::array<VecX<Jet<T>>, P> rest;
            int k = 0;
            for (int j = 0; j <= P; ++j) {
                if (j == i) continue;
                rest[k++] = lift_const(args[j]);
            }
            acc += T(sign) * derivative(om(q, rest));
            sign = -sign;
        }
        return acc;
    });
}

/// Insertion of a vector-valued 1-form: (i_K omega)(v_1..v_p) = sum_i omega(.., K v_i, ..).
template <typename KF, int P, typename FF>
auto insert_endo(VectorForm<1, KF> K, ScalarForm<P, FF> om) {
    return scalar_form<P>([K = std::move(K), om = std::move(om)](const auto& p, const auto& args) {
        using T = std::decay_t<decltype(p.x[0])>;
        T acc(0.0);
        for (int i = 0; i < P; ++i) {
            auto modified = args;
            modified[i] = K(p, args[i]);
            acc += om(p, modified);
        }
        return acc;
    });
}

/// d_K f for a function: (d_K f)(v) = df(Kv).
template <typename KF, typename FF>
auto fn_derive(VectorForm<1, KF> K, ScalarField<FF> f) {
    return scalar_form<1>([K = std::move(K), f = std::move(f)](const auto& p, const auto& args) {
        return ddir(f, p, K(p, args[0]));
    });
}

/// d_K omega = i_K(d omega) - d(i_K omega) for scalar p-forms, p >= 1.
template <typename KF, int P, typename FF>
auto fn_derive(VectorForm<1, KF> K, ScalarForm<P, FF> om) {
    auto first = insert_endo(K, exterior_d(om));
    auto second = exterior_d(insert_endo(K, om));
    return scalar_form<P + 1>(
        [first = std::move(first), second = std::move(second)](const auto& p, const auto& args) {
            return first(p, args) - second(p, args);
        });
}

/// Insertion of a vector field into a scalar form; degree drops by one.
template <typename XF, int P, typename FF>
auto insert_field(VectorField<XF> X, ScalarForm<P, FF> om) {
    static_assert(P >= 1);
    if constexpr (P == 1) {
        return scalar_field([X = std::move(X), om = std::move(om)](const auto& p) {
            return om(p, std::array{X(p)});
        });
    } else {
        return scalar_form<P - 1>(
            [X = std::move(X), om = std::move(om)](const auto& p, const auto& args) {
                using T = std::decay_t<decltype(p.x[0])>;
                std::array<VecX<T>, P> full;
                full[0] = X(p);
                for (int i = 0; i < P - 1; ++i) full[i + 1] = args[i];
                return om(p, full);
            });
    }
}

/// Insertion of a vector field into a vector-valued form.
template <typename XF, int P, typename FF>
auto insert_field(VectorField<XF> X, VectorForm<P, FF> K) {
    static_assert(P >= 1);
    if constexpr (P == 1) {
        return vector_field([X = std::move(X), K = std::move(K)](const auto& p) {
            return K(p, std::array{X(p)});
        });
    } else {
        return vector_form<P - 1>(
            [X = std::move(X), K = std::move(K)](const auto& p, const auto& args) {
                using T = std::decay_t<decltype(p.x[0])>;
                std::array<VecX<T>, P> full;
                full[0] = X(p);
                for (int i = 0; i < P - 1; ++i) full[i + 1] = args[i];
                return K(p, full);
            });
    }
}

/// Composition A o B of endomorphisms.
template <typename AF, typename BF>
auto compose_endo(VectorForm<1, AF> A, VectorForm<1, BF> B) {
    return vector_form<1>([A = std::move(A), B = std::move(B)](const auto& p, const auto& args) {
        return A(p, B(p, args[0]));
    });
}

/// Endomorphism applied to a vector field.
template <typename KF, typename XF>
auto apply_endo(VectorForm<1, KF> K, VectorField<XF> X) {
    return vector_field(
        [K = std::move(K), X = std::move(X)](const auto& p) { return K(p, X(p)); });
}

/// Wedge of scalar 1-forms: (a ^ b)(v, w) = a(v) b(w) - a(w) b(v).
template <typename AF, typename BF>
auto wedge(ScalarForm<1, AF> a, ScalarForm<1, BF> b) {
    return scalar_form<2>([a = std::move(a), b = std::move(b)](const auto& p, const auto& args) {
        return a(p, args[0]) * b(p, args[1]) - a(p, args[1]) * b(p, args[0]);
    });
}

/// Wedge of a scalar 1-form with a vector-valued 1-form:
/// (a ^ K)(v, w) = a(v) K(w) - a(w) K(v).
template <typename AF, typename KF>
auto wedge(ScalarForm<1, AF> a, VectorForm<1, KF> K) {
    return vector_form<2>([a = std::move(a), K = std::move(K)](const auto& p, const auto& args) {
        return (K(p, args[1]) * a(p, args[0]) - K(p, args[0]) * a(p, args[1])).eval();
    });
}

/// Tensor product omega (x) X of a scalar form with a vector field.
template <int P, typename FF, typename XF>
auto tensor(ScalarForm<P, FF> om, VectorField<XF> X) {
    return vector_form<P>([om = std::move(om), X = std::move(X)](const auto& p, const auto& args) {
        return (X(p) * om(p, args)).eval();
    });
}

namespace detail {

/// Max |component| of K's value on vertical basis arguments plus the size of
/// horizontal output components; both must vanish for a semi-basic K.
template <typename KF>
double semi_basic_defect(const VectorForm<1, KF>& K, const PhasePoint<double>& p) {
    const int n = p.dim();
    double defect = 0.0;
    double scale = 1.0;
    for (int j = 0; j < n; ++j) {
        const VecXd on_vertical = K(p, basis_tangent<double>(n, n + j));
        defect = std::max(defect, on_vertical.cwiseAbs().maxCoeff());
        const VecXd on_horizontal = K(p, basis_tangent<double>(n, j));
        defect = std::max(defect, on_horizontal.head(n).cwiseAbs().maxCoeff());
        scale = std::max(scale, on_horizontal.cwiseAbs().maxCoeff());
    }
    return defect / scale;
}

}  // namespace detail

/// Semi-basic trace of a semi-basic vector-valued 1-form: with
/// K = K^i_j dx^j (x) d/dy^i in induced coordinates, returns K^i_i.
/// Semi-basicity is verified at plain-real evaluations (cheap there, and each
/// jet evaluation sits under a real one at the same point).
template <typename KF>
auto semi_basic_trace(VectorForm<1, KF> K) {
    return scalar_field([K = std::move(K)](const auto& p) {
        using T = std::decay_t<decltype(p.x[0])>;
        const int n = p.dim();
        if constexpr (std::is_same_v<T, double>) {
            if (detail::semi_basic_defect(K, p) > 1e-7)
                throw PreconditionError("semi_basic_trace: argument is not semi-basic");
        }
        T acc(0.0);
        for (int j = 0; j < n; ++j) acc += K(p, basis_tangent<T>(n, j))[n + j];
        return acc;
    });
}

}  // namespace spraylab
