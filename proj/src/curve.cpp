#include "martgap/curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace martgap {

namespace {

std::string format_sig(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

}  // namespace

Curve::Curve(std::vector<double> heights, bool symmetric)
    : heights_(std::move(heights)), symmetric_(symmetric) {
  if (heights_.size() < 2) {
    throw std::invalid_argument("curve needs at least two grid points");
  }
  if (heights_.front() != 0.0 || heights_.back() != 0.0) {
    throw std::invalid_argument("curve must vanish at both endpoints");
  }
  for (double h : heights_) {
    if (!(h >= 0.0) || !std::isfinite(h)) {
      throw std::invalid_argument("curve heights must be finite and non-negative");
    }
  }
  if (symmetric_ && !is_symmetric()) {
    throw std::invalid_argument("curve marked symmetric but heights are not");
  }
}

double Curve::eval(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("curve evaluated outside [0,1]");
  }
  const int n = resolution();
  const double t = x * n;
  const int k = std::min(static_cast<int>(t), n - 1);
  const double frac = t - k;
  const double h0 = heights_[static_cast<std::size_t>(k)];
  if (frac == 0.0) return h0;
  return h0 + frac * (heights_[static_cast<std::size_t>(k) + 1] - h0);
}

double Curve::max_height() const {
  return *std::max_element(heights_.begin(), heights_.end());
}

bool Curve::is_concave(double tol_scale) const {
  const double tol = tol_scale * (1.0 + max_height());
  const int n = resolution();
  for (int k = 1; k < n; ++k) {
    const std::size_t i = static_cast<std::size_t>(k);
    if (heights_[i] < 0.5 * (heights_[i - 1] + heights_[i + 1]) - tol) return false;
  }
  return true;
}

bool Curve::is_symmetric(double tol) const {
  const int n = resolution();
  for (int k = 0; k <= n; ++k) {
    if (std::fabs(heights_[static_cast<std::size_t>(k)] -
                  heights_[static_cast<std::size_t>(n - k)]) > tol) {
      return false;
    }
  }
  return true;
}

std::string Curve::to_csv() const {
  const int n = resolution();
  std::string out = "x,y\n";
  for (int k = 0; k <= n; ++k) {
    out += format_sig(static_cast<double>(k) / n, 12);
    out += ',';
    out += format_sig(heights_[static_cast<std::size_t>(k)], 12);
    out += '\n';
  }
  return out;
}

std::string Curve::to_json_string() const {
  nlohmann::json j;
  j["resolution"] = resolution();
  j["heights"] = heights_;
  return j.dump();
}

}  // namespace martgap
