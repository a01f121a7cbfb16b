#pragma once

#include <vector>

#include "martgap/curve.hpp"

namespace martgap {

/// Seeds for the iterated harmonic-mean transform: C uses 2X(1-X), Cprime
/// uses X(1-X).
enum class SeedKind { C, Cprime };

/// Closed-form comparison curves:
///   L      2/sqrt(2n-1) * X(1-X)
///   U      sqrt(X(1-X)) / sqrt(n)
///   G      a_n * X(1-X), a-sequence seeded at 2
///   D      X(1-X) / n
///   Lprime sqrt(2/(n+1)) * X(1-X)
enum class BoundKind { L, U, G, D, Lprime };

Curve seed_curve(SeedKind seed, int resolution);

/// T^(n-1) applied to the seed curve. Requires n >= 1 and resolution >= 100.
Curve c_curve(int n, int resolution, SeedKind seed = SeedKind::C);

Curve bound_curve(BoundKind kind, int n, int resolution);

struct SequenceA {
  double a1 = 0.0;
  std::vector<double> values;  // a_1 .. a_n
};

/// a_1 = seed, a_{k+1} = 2(sqrt(a_k^2+1) - 1)/a_k. Computed in the
/// rationalized form 2a/(sqrt(a^2+1)+1), which is the same number without
/// the cancellation.
SequenceA a_sequence(double seed, int n);

/// Lazily extended ladder of transform iterates at a shared resolution;
/// get(n) returns T^(n-1)(seed). The transforms dominate runtime, so callers
/// that need several depths share one of these.
class TransformIterates {
 public:
  TransformIterates(SeedKind seed, int resolution);
  const Curve& get(int n);
  int resolution() const { return resolution_; }

 private:
  int resolution_;
  std::vector<Curve> curves_;
};

}  // namespace martgap
