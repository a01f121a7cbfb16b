#pragma once

#include "martgap/curve.hpp"

namespace martgap {

/// Smaller root of X + f(X) = x, found by bisection on [0, x]. The predicate
/// X + f(X) >= x flips exactly once there because f is concave with f(0) = 0.
/// Throws std::invalid_argument when the curve is not concave.
double solve_left(const Curve& curve, double x);

/// Larger root of X - f(X) = x, bisection on [x, 1]. Mirror of solve_left.
double solve_right(const Curve& curve, double x);

/// Harmonic-mean transform: (T f)(x) = H.M.(f(x_S), f(x_L)) with x_S, x_L the
/// chord roots above. Output vanishes at the endpoints and keeps concavity
/// and symmetry of the input. Grid points are independent; this version runs
/// them under OpenMP.
Curve transform_T(const Curve& curve);

/// Geometric-mean transform: roots of f(X) = (X - x)^2 on either side of x,
/// (T' f)(x) = G.M.(f(x_S), f(x_L)).
Curve transform_Tprime(const Curve& curve);

namespace reference {

/// Single-threaded kernels, kept as the oracle for the OpenMP versions.
Curve transform_T(const Curve& curve);
Curve transform_Tprime(const Curve& curve);

}  // namespace reference

namespace detail {

// Root finders without the per-call concavity check; the transforms validate
// the curve once and then call these in the grid loop.
double solve_left_unchecked(const Curve& curve, double x);
double solve_right_unchecked(const Curve& curve, double x);
double solve_parabola_left(const Curve& curve, double x);
double solve_parabola_right(const Curve& curve, double x);

}  // namespace detail

}  // namespace martgap
