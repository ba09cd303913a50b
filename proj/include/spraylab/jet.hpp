#pragma once

// Forward-mode autodiff scalar. Higher derivative orders come from nesting:
// Jet<Jet<double>> carries second derivatives, and so on. All arithmetic is
// allocation-free and works as the scalar type of Eigen dense objects.

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <type_traits>

#include "spraylab/errors.hpp"

namespace spraylab {

using std::cos;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sqrt;
using std::tan;

template <typename S>
struct Jet;

namespace detail {

template <typename T>
struct jet_depth {
    static constexpr int value = 0;
};
template <typename S>
struct jet_depth<Jet<S>> {
    static constexpr int value = 1 + jet_depth<S>::value;
};

}  // namespace detail

/// Nesting depth of a scalar type (0 for plain reals).
template <typename T>
inline constexpr int jet_depth_v = detail::jet_depth<T>::value;

// Scalar fallbacks so generic code can treat double like a depth-0 jet.
constexpr double primal(double x) noexcept { return x; }
constexpr double derivative(double) noexcept { return 0.0; }
constexpr double primal_value(double x) noexcept { return x; }

template <typename S>
struct Jet {
    using value_type = S;

    S f{};   // value part
    S df{};  // derivative along this nesting level

    constexpr Jet() = default;
    constexpr Jet(const S& value) : f{value}, df{} {}
    constexpr Jet(const S& value, const S& deriv) : f{value}, df{deriv} {}

    // Broadcast from a plain arithmetic value into arbitrarily deep nests.
    template <typename A, typename = std::enable_if_t<std::is_arithmetic_v<A> && !std::is_same_v<A, S>>>
    constexpr Jet(A value) : f(static_cast<double>(value)), df{} {}

    friend constexpr const S& primal(const Jet& x) noexcept { return x.f; }
    friend constexpr const S& derivative(const Jet& x) noexcept { return x.df; }

    /// Innermost value part, stripped through every nesting level.
    friend constexpr double primal_value(const Jet& x) noexcept { return primal_value(x.f); }

    // -- unary ---------------------------------------------------------------

    friend constexpr Jet operator+(const Jet& x) { return x; }
    friend constexpr Jet operator-(const Jet& x) { return {-x.f, -x.df}; }

    // -- jet (+|-|*|/) jet ----------------------------------------------------

    constexpr Jet& operator+=(const Jet& r) {
        f += r.f;
        df += r.df;
        return *this;
    }
    constexpr Jet& operator-=(const Jet& r) {
        f -= r.f;
        df -= r.df;
        return *this;
    }
    constexpr Jet& operator*=(const Jet& r) {
        df = f * r.df + df * r.f;
        f *= r.f;
        return *this;
    }
    constexpr Jet& operator/=(const Jet& r) {
        f = f / r.f;
        df = (df - f * r.df) / r.f;
        return *this;
    }

    friend constexpr Jet operator+(Jet l, const Jet& r) { return l += r; }
    friend constexpr Jet operator-(Jet l, const Jet& r) { return l -= r; }
    friend constexpr Jet operator*(Jet l, const Jet& r) { return l *= r; }
    friend constexpr Jet operator/(Jet l, const Jet& r) { return l /= r; }

    // -- jet (+|-|*|/) inner scalar -------------------------------------------

    friend constexpr Jet operator+(Jet l, const S& r) { return {l.f + r, l.df}; }
    friend constexpr Jet operator+(const S& l, Jet r) { return {l + r.f, r.df}; }
    friend constexpr Jet operator-(const Jet& l, const S& r) { return {l.f - r, l.df}; }
    friend constexpr Jet operator-(const S& l, const Jet& r) { return {l - r.f, -r.df}; }
    friend constexpr Jet operator*(const Jet& l, const S& r) { return {l.f * r, l.df * r}; }
    friend constexpr Jet operator*(const S& l, const Jet& r) { return {l * r.f, l * r.df}; }
    friend constexpr Jet operator/(const Jet& l, const S& r) { return {l.f / r, l.df / r}; }
    friend constexpr Jet operator/(const S& l, const Jet& r) {
        const S inv = S(1.0) / r.f;
        const S v = l * inv;
        return {v, -v * r.df * inv};
    }

    // -- jet (+|-|*|/) double, for nested jets (S = double is covered above) --

    friend constexpr Jet operator+(const Jet& l, double r) requires(!std::is_same_v<S, double>) {
        return {l.f + S(r), l.df};
    }
    friend constexpr Jet operator+(double l, const Jet& r) requires(!std::is_same_v<S, double>) {
        return {S(l) + r.f, r.df};
    }
    friend constexpr Jet operator-(const Jet& l, double r) requires(!std::is_same_v<S, double>) {
        return {l.f - S(r), l.df};
    }
    friend constexpr Jet operator-(double l, const Jet& r) requires(!std::is_same_v<S, double>) {
        return {S(l) - r.f, -r.df};
    }
    friend constexpr Jet operator*(const Jet& l, double r) requires(!std::is_same_v<S, double>) {
        return {l.f * r, l.df * r};
    }
    friend constexpr Jet operator*(double l, const Jet& r) requires(!std::is_same_v<S, double>) {
        return {r.f * l, r.df * l};
    }
    friend constexpr Jet operator/(const Jet& l, double r) requires(!std::is_same_v<S, double>) {
        return {l.f / r, l.df / r};
    }
    friend constexpr Jet operator/(double l, const Jet& r) requires(!std::is_same_v<S, double>) {
        return Jet(S(l)) / r;
    }

    // Comparisons order by primal value; derivative parts are ignored.
    friend constexpr bool operator<(const Jet& l, const Jet& r) { return primal_value(l) < primal_value(r); }
    friend constexpr bool operator>(const Jet& l, const Jet& r) { return primal_value(l) > primal_value(r); }
    friend constexpr bool operator<=(const Jet& l, const Jet& r) { return primal_value(l) <= primal_value(r); }
    friend constexpr bool operator>=(const Jet& l, const Jet& r) { return primal_value(l) >= primal_value(r); }
    friend constexpr bool operator==(const Jet& l, const Jet& r) { return primal_value(l) == primal_value(r); }
    friend constexpr bool operator!=(const Jet& l, const Jet& r) { return primal_value(l) != primal_value(r); }

    friend std::ostream& operator<<(std::ostream& out, const Jet& x) {
        return out << "{" << x.f << ", " << x.df << "}";
    }
};

// -- elementary functions ------------------------------------------------------

template <typename S>
Jet<S> abs(const Jet<S>& x) {
    return primal_value(x) < 0.0 ? -x : x;
}

template <typename S>
Jet<S> sqrt(const Jet<S>& x) {
    if (primal_value(x) <= 0.0) throw EvalError("sqrt of non-positive argument");
    const S root = sqrt(x.f);
    return {root, x.df / (S(2.0) * root)};
}

template <typename S>
Jet<S> exp(const Jet<S>& x) {
    const S e = exp(x.f);
    return {e, e * x.df};
}

template <typename S>
Jet<S> log(const Jet<S>& x) {
    if (primal_value(x) <= 0.0) throw EvalError("log of non-positive argument");
    return {log(x.f), x.df / x.f};
}

template <typename S>
Jet<S> sin(const Jet<S>& x) {
    return {sin(x.f), cos(x.f) * x.df};
}

template <typename S>
Jet<S> cos(const Jet<S>& x) {
    return {cos(x.f), -sin(x.f) * x.df};
}

template <typename S>
Jet<S> tan(const Jet<S>& x) {
    const S t = tan(x.f);
    return {t, (S(1.0) + t * t) * x.df};
}

/// x^k for integer k, sign-safe for negative bases.
template <typename T>
T powi(const T& x, long long k) {
    if (k < 0) return T(1.0) / powi(x, -k);
    T result(1.0);
    T base = x;
    while (k > 0) {
        if (k & 1) result *= base;
        base *= base;
        k >>= 1;
    }
    return result;
}

inline double powi(double x, long long k) { return std::pow(x, static_cast<double>(k)); }

namespace detail {
inline bool nearly_integer(double e, long long& k) {
    const double r = std::nearbyint(e);
    if (std::abs(e - r) < 1e-12 && std::abs(r) < 1e9) {
        k = static_cast<long long>(r);
        return true;
    }
    return false;
}
}  // namespace detail

/// Power with a constant (rational) exponent. Integer exponents work for any
/// base; fractional ones require a positive base.
template <typename S>
Jet<S> pow(const Jet<S>& x, double e) {
    long long k = 0;
    if (detail::nearly_integer(e, k)) {
        if (k != 0 && primal_value(x) == 0.0 && k < 0) throw EvalError("pow: zero base with negative exponent");
        if (k == 0) return Jet<S>(S(1.0));
        Jet<S> r = powi(x, k);
        return r;
    }
    if (primal_value(x) <= 0.0) throw EvalError("pow: fractional exponent needs a positive base");
    const S pm1 = pow(x.f, e - 1.0);
    return {pm1 * x.f, S(e) * pm1 * x.df};
}

template <typename T>
bool isfinite_deep(const T& x) {
    if constexpr (jet_depth_v<T> == 0) {
        return std::isfinite(x);
    } else {
        return isfinite_deep(x.f) && isfinite_deep(x.df);
    }
}

}  // namespace spraylab
