#pragma once

// Expression trees for user-supplied metrics and projective factors.
//
// Grammar (whitespace-insensitive, offsets are 1-based bytes):
//   expr     := term (('+'|'-') term)*
//   term     := factor (('*'|'/') factor)*
//   factor   := '-' factor | power
//   power    := base ('^' exponent)?
//   exponent := '-' exponent | base          (must fold to a constant)
//   base     := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//
// Variables are x1..xn, y1..yn; functions are sqrt, exp, log, sin, cos, tan
// and pow(e, c) with a constant exponent.

#include <cstdint>
#include <string>
#include <vector>

#include "spraylab/types.hpp"

namespace spraylab {

enum class NodeKind : std::uint8_t {
    Constant,
    VarX,
    VarY,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Pow,  // child `a`, constant exponent in `value`
    Sqrt,
    Exp,
    Log,
    Sin,
    Cos,
    Tan,
};

struct ExprNode {
    NodeKind kind;
    double value = 0.0;     // Constant payload or Pow exponent
    int index = 0;          // variable index (0-based) for VarX/VarY
    int a = -1;             // children; evaluation order is node order
    int b = -1;
    std::uint32_t offset = 0;  // 1-based source offset, 0 if synthetic
};

/// Immutable evaluation tree, generic over the scalar type.
struct Expr {
    int dim = 0;
    std::vector<ExprNode> nodes;  // children always precede parents
    int root = -1;

    bool operator==(const Expr& other) const;
};

/// Parse `text` against base dimension `dim`. Throws ParseError.
Expr parse(const std::string& text, int dim);

/// Minimal-parenthesis rendering; parses back to an equal tree.
std::string print(const Expr& expr);

/// A metric/factor file: `dim=<n>` header line, then one expression.
Expr load_expr_file(const std::string& path);

namespace detail {

/// Constant-exponent power with uniform semantics for reals and jets:
/// integer exponents are sign-safe, fractional ones need a positive base.
template <typename T>
T pow_const(const T& base, double e) {
    if constexpr (jet_depth_v<T> == 0) {
        long long k = 0;
        if (nearly_integer(e, k)) {
            if (base == 0.0 && k < 0) throw EvalError("pow: zero base with negative exponent");
            return powi(base, k);
        }
        if (base <= 0.0) throw EvalError("pow: fractional exponent needs a positive base");
        return std::pow(base, e);
    } else {
        return pow(base, e);
    }
}

template <typename T>
T eval_node(const ExprNode& nd, const std::vector<T>& vals, const VecX<T>& x, const VecX<T>& y) {
    switch (nd.kind) {
        case NodeKind::Constant: return T(nd.value);
        case NodeKind::VarX: return x[nd.index];
        case NodeKind::VarY: return y[nd.index];
        case NodeKind::Add: return vals[nd.a] + vals[nd.b];
        case NodeKind::Sub: return vals[nd.a] - vals[nd.b];
        case NodeKind::Mul: return vals[nd.a] * vals[nd.b];
        case NodeKind::Div:
            if (primal_value(vals[nd.b]) == 0.0) throw EvalError("division by zero", nd.offset);
            return vals[nd.a] / vals[nd.b];
        case NodeKind::Neg: return -vals[nd.a];
        case NodeKind::Pow:
            try {
                return pow_const(vals[nd.a], nd.value);
            } catch (const EvalError& e) {
                throw EvalError(e.what(), nd.offset);
            }
        case NodeKind::Sqrt:
            if (primal_value(vals[nd.a]) < 0.0) throw EvalError("sqrt of negative argument", nd.offset);
            if constexpr (jet_depth_v<T> > 0) {
                if (primal_value(vals[nd.a]) == 0.0)
                    throw EvalError("sqrt not differentiable at zero", nd.offset);
            } else {
                if (primal_value(vals[nd.a]) == 0.0) return T(0.0);
            }
            return sqrt(vals[nd.a]);
        case NodeKind::Exp: return exp(vals[nd.a]);
        case NodeKind::Log:
            if (primal_value(vals[nd.a]) <= 0.0)
                throw EvalError("log of non-positive argument", nd.offset);
            return log(vals[nd.a]);
        case NodeKind::Sin: return sin(vals[nd.a]);
        case NodeKind::Cos: return cos(vals[nd.a]);
        case NodeKind::Tan: return tan(vals[nd.a]);
    }
    throw EvalError("corrupt expression node");
}

}  // namespace detail

/// Evaluate over plain reals or jets; the code path is identical.
template <typename T>
T eval(const Expr& expr, const VecX<T>& x, const VecX<T>& y) {
    if (expr.root < 0) throw EvalError("empty expression");
    thread_local std::vector<T> vals;
    vals.resize(expr.nodes.size());
    for (std::size_t i = 0; i < expr.nodes.size(); ++i)
        vals[i] = detail::eval_node(expr.nodes[i], vals, x, y);
    return vals[expr.root];
}

template <typename T>
T eval(const Expr& expr, const PhasePoint<T>& p) {
    return eval(expr, p.x, p.y);
}

/// Phase-space function backed by a parsed expression; usable wherever the
/// calculus expects a generic scalar functor.
struct ExprFunction {
    Expr expr;
    template <typename T>
    T operator()(const PhasePoint<T>& p) const {
        return eval(expr, p);
    }
};

}  // namespace spraylab
