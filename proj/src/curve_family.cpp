#include "martgap/curve_family.hpp"

#include <cmath>
#include <stdexcept>

#include "martgap/transforms.hpp"

namespace martgap {

Curve seed_curve(SeedKind seed, int resolution) {
  const double scale = (seed == SeedKind::C) ? 2.0 : 1.0;
  return sample_curve(
      resolution, [scale](double x) { return scale * x * (1.0 - x); }, true);
}

Curve c_curve(int n, int resolution, SeedKind seed) {
  if (n < 1) throw std::invalid_argument("c_curve: n must be >= 1");
  if (resolution < 100) throw std::invalid_argument("c_curve: resolution must be >= 100");
  Curve c = seed_curve(seed, resolution);
  for (int i = 1; i < n; ++i) c = transform_T(c);
  return c;
}

Curve bound_curve(BoundKind kind, int n, int resolution) {
  if (n < 1) throw std::invalid_argument("bound_curve: n must be >= 1");
  switch (kind) {
    case BoundKind::L: {
      const double a = 2.0 / std::sqrt(2.0 * n - 1.0);
      return sample_curve(resolution, [a](double x) { return a * x * (1.0 - x); }, true);
    }
    case BoundKind::U: {
      const double a = 1.0 / std::sqrt(static_cast<double>(n));
      return sample_curve(resolution, [a](double x) { return a * std::sqrt(x * (1.0 - x)); },
                          true);
    }
    case BoundKind::G: {
      const double a = a_sequence(2.0, n).values.back();
      return sample_curve(resolution, [a](double x) { return a * x * (1.0 - x); }, true);
    }
    case BoundKind::D: {
      const double a = 1.0 / n;
      return sample_curve(resolution, [a](double x) { return a * x * (1.0 - x); }, true);
    }
    case BoundKind::Lprime: {
      const double a = std::sqrt(2.0 / (n + 1.0));
      return sample_curve(resolution, [a](double x) { return a * x * (1.0 - x); }, true);
    }
  }
  throw std::invalid_argument("bound_curve: unknown kind");
}

SequenceA a_sequence(double seed, int n) {
  if (!(seed > 0.0)) throw std::invalid_argument("a_sequence: seed must be positive");
  if (n < 1) throw std::invalid_argument("a_sequence: n must be >= 1");
  SequenceA s;
  s.a1 = seed;
  s.values.reserve(static_cast<std::size_t>(n));
  double a = seed;
  s.values.push_back(a);
  for (int i = 1; i < n; ++i) {
    a = 2.0 * a / (std::sqrt(a * a + 1.0) + 1.0);
    s.values.push_back(a);
  }
  return s;
}

TransformIterates::TransformIterates(SeedKind seed, int resolution)
    : resolution_(resolution) {
  if (resolution < 100) {
    throw std::invalid_argument("TransformIterates: resolution must be >= 100");
  }
  curves_.push_back(seed_curve(seed, resolution));
}

const Curve& TransformIterates::get(int n) {
  if (n < 1) throw std::invalid_argument("TransformIterates: n must be >= 1");
  while (static_cast<int>(curves_.size()) < n) {
    curves_.push_back(transform_T(curves_.back()));
  }
  return curves_[static_cast<std::size_t>(n) - 1];
}

}  // namespace martgap
