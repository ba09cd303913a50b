#pragma once

// Runtime-order entry points over the nested-jet scalar: seeding at a chosen
// nesting level and mixed directional derivatives of phase-space functions.

#include <vector>

#include "spraylab/types.hpp"

namespace spraylab {

/// Hard cap on the nesting depth reachable through the runtime-order API.
/// (Statically composed operators pick their own depth at compile time.)
inline constexpr int kMaxJetOrder = 6;

/// Default truncation depth for runtime-order derivative requests.
inline constexpr int kDefaultJetOrder = 5;

namespace detail {

template <int K>
struct jet_n {
    using type = Jet<typename jet_n<K - 1>::type>;
};
template <>
struct jet_n<0> {
    using type = double;
};

}  // namespace detail

/// Scalar carrying K nesting levels.
template <int K>
using JetN = typename detail::jet_n<K>::type;

namespace detail {

template <typename JetT>
JetT seed_impl(double value, int level) {
    if constexpr (jet_depth_v<JetT> == 0) {
        (void)level;
        return value;
    } else {
        using Inner = typename JetT::value_type;
        if (level == jet_depth_v<JetT> - 1) return JetT{Inner(value), Inner(1.0)};
        return JetT{seed_impl<Inner>(value, level), Inner(0.0)};
    }
}

// One coordinate seeded along several levels at once: comps[l] is the
// first-order part at nesting level l (level 0 innermost).
template <typename JetT>
JetT multi_seed(double value, const double* comps) {
    if constexpr (jet_depth_v<JetT> == 0) {
        return value;
    } else {
        using Inner = typename JetT::value_type;
        return JetT{multi_seed<Inner>(value, comps), Inner(comps[jet_depth_v<JetT> - 1])};
    }
}

template <typename T>
double top_coefficient(const T& x) {
    if constexpr (jet_depth_v<T> == 0) {
        return x;
    } else {
        return top_coefficient(derivative(x));
    }
}

}  // namespace detail

/// A depth-`Order` jet seeded to differentiate along nesting level `level`.
template <int Order>
JetN<Order> seed(double value, int level) {
    static_assert(Order >= 1 && Order <= kMaxJetOrder);
    if (level < 0 || level >= Order)
        throw ConfigError("seed: level " + std::to_string(level) + " out of range for order " +
                          std::to_string(Order));
    return detail::seed_impl<JetN<Order>>(value, level);
}

namespace detail {

template <int K, typename F>
double directional_impl(const F& f, const PhasePoint<double>& p, const std::vector<VecXd>& dirs) {
    const int n = p.dim();
    PhasePoint<JetN<K>> q;
    q.x.resize(n);
    q.y.resize(n);
    double comps[kMaxJetOrder];
    for (int i = 0; i < n; ++i) {
        for (int l = 0; l < K; ++l) comps[l] = dirs[l][i];
        q.x[i] = multi_seed<JetN<K>>(p.x[i], comps);
        for (int l = 0; l < K; ++l) comps[l] = dirs[l][n + i];
        q.y[i] = multi_seed<JetN<K>>(p.y[i], comps);
    }
    return top_coefficient(f(q));
}

}  // namespace detail

/// Mixed directional derivative d_{dirs[k-1]} ... d_{dirs[0]} f at p, where f
/// is any functor evaluable at jet-valued phase points and each direction is a
/// tangent 2n-vector. `max_order` gates the request (configuration knob).
template <typename F>
double directional_derivative(const F& f, const PhasePoint<double>& p, const std::vector<VecXd>& dirs,
                              int max_order = kDefaultJetOrder) {
    const int k = static_cast<int>(dirs.size());
    if (max_order < 1 || max_order > kMaxJetOrder)
        throw ConfigError("directional_derivative: max_order must be in [1, " +
                          std::to_string(kMaxJetOrder) + "]");
    if (k < 1 || k > max_order)
        throw ConfigError("directional_derivative: order " + std::to_string(k) +
                          " exceeds configured max order " + std::to_string(max_order));
    switch (k) {
        case 1: return detail::directional_impl<1>(f, p, dirs);
        case 2: return detail::directional_impl<2>(f, p, dirs);
        case 3: return detail::directional_impl<3>(f, p, dirs);
        case 4: return detail::directional_impl<4>(f, p, dirs);
        case 5: return detail::directional_impl<5>(f, p, dirs);
        case 6: return detail::directional_impl<6>(f, p, dirs);
        default: throw ConfigError("directional_derivative: unsupported order");
    }
}

}  // namespace spraylab
