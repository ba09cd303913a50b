#pragma once

// Fields and forms on the slit tangent bundle, represented as pure functors
// generic over the scalar type. Composing operators on them stacks jet levels
// automatically, so anything built here can be differentiated again.

#include <array>
#include <utility>

#include "spraylab/types.hpp"

namespace spraylab {

template <typename F>
struct ScalarField {
    F f;
    template <typename T>
    T operator()(const PhasePoint<T>& p) const {
        return f(p);
    }
};

template <typename F>
struct VectorField {
    F f;
    template <typename T>
    VecX<T> operator()(const PhasePoint<T>& p) const {
        return f(p);
    }
};

/// Scalar-valued alternating p-form; arguments are tangent 2n-vectors.
template <int P, typename F>
struct ScalarForm {
    static constexpr int degree = P;
    F f;
    template <typename T>
    T operator()(const PhasePoint<T>& p, const std::array<VecX<T>, P>& args) const {
        return f(p, args);
    }
    template <typename T, int Q = P, typename = std::enable_if_t<Q == 1>>
    T operator()(const PhasePoint<T>& p, const VecX<T>& v) const {
        return f(p, std::array<VecX<T>, 1>{v});
    }
    template <typename T, int Q = P, typename = std::enable_if_t<Q == 2>>
    T operator()(const PhasePoint<T>& p, const VecX<T>& v, const VecX<T>& w) const {
        return f(p, std::array<VecX<T>, 2>{v, w});
    }
};

/// Vector-valued alternating p-form (degree 1 covers endomorphisms like J, h, v).
template <int P, typename F>
struct VectorForm {
    static constexpr int degree = P;
    F f;
    template <typename T>
    VecX<T> operator()(const PhasePoint<T>& p, const std::array<VecX<T>, P>& args) const {
        return f(p, args);
    }
    template <typename T, int Q = P, typename = std::enable_if_t<Q == 1>>
    VecX<T> operator()(const PhasePoint<T>& p, const VecX<T>& v) const {
        return f(p, std::array<VecX<T>, 1>{v});
    }
    template <typename T, int Q = P, typename = std::enable_if_t<Q == 2>>
    VecX<T> operator()(const PhasePoint<T>& p, const VecX<T>& v, const VecX<T>& w) const {
        return f(p, std::array<VecX<T>, 2>{v, w});
    }
};

template <typename F>
ScalarField<F> scalar_field(F f) {
    return {std::move(f)};
}
template <typename F>
VectorField<F> vector_field(F f) {
    return {std::move(f)};
}
template <int P, typename F>
ScalarForm<P, F> scalar_form(F f) {
    return {std::move(f)};
}
template <int P, typename F>
VectorForm<P, F> vector_form(F f) {
    return {std::move(f)};
}

// -- pointwise algebra ---------------------------------------------------------

template <int P, typename A, typename B>
auto operator+(ScalarForm<P, A> a, ScalarForm<P, B> b) {
    return scalar_form<P>([a = std::move(a), b = std::move(b)](const auto& p, const auto& args) {
        return a(p, args) + b(p, args);
    });
}

template <int P, typename A, typename B>
auto operator-(ScalarForm<P, A> a, ScalarForm<P, B> b) {
    return scalar_form<P>([a = std::move(a), b = std::move(b)](const auto& p, const auto& args) {
        return a(p, args) - b(p, args);
    });
}

template <int P, typename A>
auto operator*(double c, ScalarForm<P, A> a) {
    return scalar_form<P>(
        [c, a = std::move(a)](const auto& p, const auto& args) { return a(p, args) * c; });
}

/// Pointwise module action f * omega of a scalar field on a form.
template <typename G, int P, typename A>
auto operator*(ScalarField<G> g, ScalarForm<P, A> a) {
    return scalar_form<P>([g = std::move(g), a = std::move(a)](const auto& p, const auto& args) {
        return g(p) * a(p, args);
    });
}

template <int P, typename A, typename B>
auto operator+(VectorForm<P, A> a, VectorForm<P, B> b) {
    return vector_form<P>([a = std::move(a), b = std::move(b)](const auto& p, const auto& args) {
        return (a(p, args) + b(p, args)).eval();
    });
}

template <int P, typename A, typename B>
auto operator-(VectorForm<P, A> a, VectorForm<P, B> b) {
    return vector_form<P>([a = std::move(a), b = std::move(b)](const auto& p, const auto& args) {
        return (a(p, args) - b(p, args)).eval();
    });
}

template <int P, typename A>
auto operator*(double c, VectorForm<P, A> a) {
    return vector_form<P>(
        [c, a = std::move(a)](const auto& p, const auto& args) { return (a(p, args) * c).eval(); });
}

template <typename G, int P, typename A>
auto operator*(ScalarField<G> g, VectorForm<P, A> a) {
    return vector_form<P>([g = std::move(g), a = std::move(a)](const auto& p, const auto& args) {
        return (a(p, args) * g(p)).eval();
    });
}

// -- canonical objects -----------------------------------------------------------

/// Liouville (dilation) vector field: (x, y) -> (0, y).
inline auto liouville() {
    return vector_field([](const auto& p) {
        using T = std::decay_t<decltype(p.x[0])>;
        const int n = p.dim();
        VecX<T> out = VecX<T>::Zero(2 * n);
        out.tail(n) = p.y;
        return out;
    });
}

/// Vertical endomorphism: (a, b) -> (0, a). Squares to zero.
inline auto vertical_endo() {
    return vector_form<1>([](const auto& p, const auto& args) {
        using T = std::decay_t<decltype(p.x[0])>;
        const int n = p.dim();
        VecX<T> out = VecX<T>::Zero(2 * n);
        out.tail(n) = args[0].head(n);
        return out;
    });
}

/// Identity endomorphism of T(T0M).
inline auto identity_endo() {
    return vector_form<1>([](const auto& p, const auto& args) {
        (void)p;
        return args[0];
    });
}

}  // namespace spraylab
