#pragma once

// Dense types templated on the scalar so every geometric object can be
// evaluated with plain reals or with jets of any nesting depth.

#include <Eigen/Dense>

#include "spraylab/jet.hpp"

namespace spraylab {

/// Largest supported base-manifold dimension. Keeps all dense temporaries on
/// the stack (tangent vectors of T0M have 2n components).
inline constexpr int kMaxDim = 5;

template <typename T>
using VecX = Eigen::Matrix<T, Eigen::Dynamic, 1, Eigen::ColMajor, 2 * kMaxDim, 1>;

template <typename T>
using MatN = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

using VecXd = VecX<double>;
using MatNd = MatN<double>;

/// A point (x, y) of the slit tangent bundle T0M, y != 0. Tangent vectors at a
/// phase point have 2n components ordered (d/dx^1..d/dx^n, d/dy^1..d/dy^n).
template <typename T>
struct PhasePoint {
    VecX<T> x;
    VecX<T> y;

    int dim() const { return static_cast<int>(x.size()); }
};

using PhasePointd = PhasePoint<double>;

/// Lift a point one jet level, seeding the derivative along `dir` (a tangent
/// 2n-vector; its first n entries perturb x, the rest y).
template <typename T>
PhasePoint<Jet<T>> lift(const PhasePoint<T>& p, const VecX<T>& dir) {
    const int n = p.dim();
    PhasePoint<Jet<T>> q;
    q.x.resize(n);
    q.y.resize(n);
    for (int i = 0; i < n; ++i) {
        q.x[i] = Jet<T>{p.x[i], dir[i]};
        q.y[i] = Jet<T>{p.y[i], dir[n + i]};
    }
    return q;
}

/// Constant extension of a tangent vector to the lifted scalar level.
template <typename T>
VecX<Jet<T>> lift_const(const VecX<T>& v) {
    VecX<Jet<T>> out(v.size());
    for (int i = 0; i < v.size(); ++i) out[i] = Jet<T>{v[i], T(0.0)};
    return out;
}

template <typename T>
VecX<T> derivative_part(const VecX<Jet<T>>& v) {
    VecX<T> out(v.size());
    for (int i = 0; i < v.size(); ++i) out[i] = derivative(v[i]);
    return out;
}

template <typename T>
VecX<T> primal_part(const VecX<Jet<T>>& v) {
    VecX<T> out(v.size());
    for (int i = 0; i < v.size(); ++i) out[i] = primal(v[i]);
    return out;
}

template <typename T>
VecXd primal_values(const VecX<T>& v) {
    VecXd out(v.size());
    for (int i = 0; i < v.size(); ++i) out[i] = primal_value(v[i]);
    return out;
}

/// Unit tangent 2n-vector along coordinate `idx` (0..2n-1; x-block first).
template <typename T>
VecX<T> basis_tangent(int n, int idx) {
    VecX<T> v = VecX<T>::Zero(2 * n);
    v[idx] = T(1.0);
    return v;
}

}  // namespace spraylab

namespace Eigen {

template <typename S>
struct NumTraits<spraylab::Jet<S>> : NumTraits<double> {
    using Real = spraylab::Jet<S>;
    using NonInteger = spraylab::Jet<S>;
    using Nested = spraylab::Jet<S>;
    using Literal = double;

    static inline Real epsilon() { return Real(NumTraits<double>::epsilon()); }
    static inline Real dummy_precision() { return Real(NumTraits<double>::dummy_precision()); }
    static inline Real highest() { return Real(NumTraits<double>::highest()); }
    static inline Real lowest() { return Real(NumTraits<double>::lowest()); }
    static inline int digits10() { return NumTraits<double>::digits10(); }

    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        ReadCost = 1 << spraylab::jet_depth_v<Real>,
        AddCost = 1 << spraylab::jet_depth_v<Real>,
        MulCost = 3 << spraylab::jet_depth_v<Real>,
        RequireInitialization = 1,
    };
};

template <typename S, typename BinaryOp>
struct ScalarBinaryOpTraits<spraylab::Jet<S>, double, BinaryOp> {
    using ReturnType = spraylab::Jet<S>;
};
template <typename S, typename BinaryOp>
struct ScalarBinaryOpTraits<double, spraylab::Jet<S>, BinaryOp> {
    using ReturnType = spraylab::Jet<S>;
};

}  // namespace Eigen

namespace spraylab {

// Hooks Eigen reaches through ADL for real-only scalar types.
template <typename S>
const Jet<S>& conj(const Jet<S>& x) {
    return x;
}
template <typename S>
const Jet<S>& real(const Jet<S>& x) {
    return x;
}
template <typename S>
Jet<S> imag(const Jet<S>&) {
    return Jet<S>{};
}
template <typename S>
Jet<S> abs2(const Jet<S>& x) {
    return x * x;
}

}  // namespace spraylab
