#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace martgap {

/// Sampled curve on [0,1]: heights[k] = f(k / resolution), piecewise-linear
/// in between. Every curve handled here vanishes at both endpoints and stays
/// non-negative; instances are immutable and safe to share across threads.
class Curve {
 public:
  /// heights.size() == resolution + 1; endpoints must be exactly zero.
  /// If `symmetric` is set, heights must mirror around 1/2 within 1e-9.
  explicit Curve(std::vector<double> heights, bool symmetric = false);

  int resolution() const { return static_cast<int>(heights_.size()) - 1; }
  const std::vector<double>& heights() const { return heights_; }
  double height(int k) const { return heights_[static_cast<std::size_t>(k)]; }
  bool symmetric_flag() const { return symmetric_; }

  /// Piecewise-linear interpolant; exact at grid points.
  /// Throws std::domain_error for x outside [0,1].
  double eval(double x) const;

  double max_height() const;

  /// Discrete concavity: heights[k] >= (heights[k-1] + heights[k+1])/2 - tol
  /// with tol = tol_scale * (1 + max height). Sampled transforms are concave
  /// only up to discretization, hence the scaled tolerance.
  bool is_concave(double tol_scale = 1e-9) const;
  bool is_symmetric(double tol = 1e-9) const;

  /// CSV with header "x,y", one row per grid point, 12 significant digits.
  std::string to_csv() const;
  /// {"resolution": N, "heights": [...]}
  std::string to_json_string() const;

 private:
  std::vector<double> heights_;
  bool symmetric_ = false;
};

/// Samples f on a uniform grid with `resolution` intervals. Endpoints are
/// pinned to exactly zero.
template <typename F>
Curve sample_curve(int resolution, F&& f, bool symmetric = false) {
  if (resolution < 1) throw std::invalid_argument("resolution must be >= 1");
  std::vector<double> h(static_cast<std::size_t>(resolution) + 1, 0.0);
  for (int k = 1; k < resolution; ++k) {
    h[static_cast<std::size_t>(k)] = f(static_cast<double>(k) / resolution);
  }
  return Curve(std::move(h), symmetric);
}

}  // namespace martgap
