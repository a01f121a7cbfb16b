#include "martgap/transforms.hpp"

#include <cmath>
#include <stdexcept>

namespace martgap {

namespace {

constexpr int kMaxBisectIters = 200;
constexpr double kResidualTol = 1e-13;

void require_concave(const Curve& curve, const char* who) {
  if (!curve.is_concave()) {
    throw std::invalid_argument(std::string(who) + " requires a concave curve");
  }
}

void require_domain(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("argument outside [0,1]");
  }
}

// First point of [lo, hi] where phi >= 0, given phi(lo) < 0 <= phi(hi).
template <typename F>
double bisect_up(F&& phi, double lo, double hi) {
  for (int it = 0; it < kMaxBisectIters; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double v = phi(mid);
    if (std::fabs(v) <= kResidualTol) return mid;
    if (v >= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

// Last point of [lo, hi] where phi >= 0, given phi(lo) >= 0 > phi(hi).
template <typename F>
double bisect_down(F&& phi, double lo, double hi) {
  for (int it = 0; it < kMaxBisectIters; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double v = phi(mid);
    if (std::fabs(v) <= kResidualTol) return mid;
    if (v >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

// Harmonic mean of the curve heights at the 45-degree chord roots. Tiny
// heights near the endpoints can round negative, hence the clamp.
double hm_point(const Curve& f, double x) {
  const double xs = detail::solve_left_unchecked(f, x);
  const double xl = detail::solve_right_unchecked(f, x);
  const double y1 = f.eval(xs);
  const double y2 = f.eval(xl);
  const double s = y1 + y2;
  if (!(s > 0.0)) return 0.0;
  const double hm = 2.0 * y1 * y2 / s;
  return hm > 0.0 ? hm : 0.0;
}

// Geometric mean of the curve heights at the parabola roots.
double gm_point(const Curve& f, double x) {
  const double xs = detail::solve_parabola_left(f, x);
  const double xl = detail::solve_parabola_right(f, x);
  const double y1 = std::max(f.eval(xs), 0.0);
  const double y2 = std::max(f.eval(xl), 0.0);
  return std::sqrt(y1 * y2);
}

void check_transform_input(const Curve& f, const char* who) {
  require_concave(f, who);
  if (f.resolution() < 8) {
    throw std::invalid_argument(std::string(who) + " needs resolution >= 8");
  }
}

// Endpoints are fixed at zero. Within one grid cell of the ends both roots
// collapse to x and the mean of near-zero heights is unstable, so the first
// and last interior points are filled by linearity towards the endpoint.
Curve assemble(std::vector<double> out, const Curve& f) {
  const int n = static_cast<int>(out.size()) - 1;
  out[0] = 0.0;
  out[static_cast<std::size_t>(n)] = 0.0;
  out[1] = 0.5 * out[2];
  out[static_cast<std::size_t>(n) - 1] = 0.5 * out[static_cast<std::size_t>(n) - 2];
  return Curve(std::move(out), f.symmetric_flag());
}

}  // namespace

namespace detail {

double solve_left_unchecked(const Curve& f, double x) {
  if (x <= 0.0) return 0.0;
  const auto phi = [&](double t) { return t + f.eval(t) - x; };
  if (phi(x) <= 0.0) return x;  // f(x) == 0: the chord degenerates at x
  return bisect_up(phi, 0.0, x);
}

double solve_right_unchecked(const Curve& f, double x) {
  if (x >= 1.0) return 1.0;
  const auto phi = [&](double t) { return t - f.eval(t) - x; };
  if (phi(x) >= 0.0) return x;
  return bisect_up(phi, x, 1.0);
}

double solve_parabola_left(const Curve& f, double x) {
  if (x <= 0.0) return 0.0;
  const auto phi = [&](double t) {
    const double d = t - x;
    return f.eval(t) - d * d;
  };
  if (phi(x) <= 0.0) return x;
  return bisect_up(phi, 0.0, x);
}

double solve_parabola_right(const Curve& f, double x) {
  if (x >= 1.0) return 1.0;
  const auto phi = [&](double t) {
    const double d = t - x;
    return f.eval(t) - d * d;
  };
  if (phi(x) <= 0.0) return x;
  return bisect_down(phi, x, 1.0);
}

}  // namespace detail

double solve_left(const Curve& curve, double x) {
  require_domain(x);
  require_concave(curve, "solve_left");
  return detail::solve_left_unchecked(curve, x);
}

double solve_right(const Curve& curve, double x) {
  require_domain(x);
  require_concave(curve, "solve_right");
  return detail::solve_right_unchecked(curve, x);
}

Curve transform_T(const Curve& curve) {
  check_transform_input(curve, "transform_T");
  const int n = curve.resolution();
  std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
#pragma omp parallel for schedule(static)
  for (int k = 2; k <= n - 2; ++k) {
    out[static_cast<std::size_t>(k)] = hm_point(curve, static_cast<double>(k) / n);
  }
  return assemble(std::move(out), curve);
}

Curve transform_Tprime(const Curve& curve) {
  check_transform_input(curve, "transform_Tprime");
  const int n = curve.resolution();
  std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
#pragma omp parallel for schedule(static)
  for (int k = 2; k <= n - 2; ++k) {
    out[static_cast<std::size_t>(k)] = gm_point(curve, static_cast<double>(k) / n);
  }
  return assemble(std::move(out), curve);
}

namespace reference {

Curve transform_T(const Curve& curve) {
  check_transform_input(curve, "transform_T");
  const int n = curve.resolution();
  std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 2; k <= n - 2; ++k) {
    out[static_cast<std::size_t>(k)] = hm_point(curve, static_cast<double>(k) / n);
  }
  return assemble(std::move(out), curve);
}

Curve transform_Tprime(const Curve& curve) {
  check_transform_input(curve, "transform_Tprime");
  const int n = curve.resolution();
  std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 2; k <= n - 2; ++k) {
    out[static_cast<std::size_t>(k)] = gm_point(curve, static_cast<double>(k) / n);
  }
  return assemble(std::move(out), curve);
}

}  // namespace reference

}  // namespace martgap
