#pragma once

// Distances between distributions and the curve/estimate records built from them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "srrw/error.hpp"

namespace srrw {

inline void check_same_length(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size() || p.empty()) throw parameter_error("distributions differ in length");
}

inline double tv_distance(const std::vector<double>& p, const std::vector<double>& q) {
  check_same_length(p, q);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

// TV to the uniform distribution.
inline double tv_to_uniform(const std::vector<double>& p) {
  const double u = 1.0 / static_cast<double>(p.size());
  double s = 0.0;
  for (double x : p) s += std::abs(x - u);
  return 0.5 * s;
}

// l2(q) distance sqrt(sum (p - q)^2 / q); q must be positive.
inline double chi_distance(const std::vector<double>& p, const std::vector<double>& q) {
  check_same_length(p, q);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(q[i] > 0.0)) throw domain_error("chi distance needs a positive reference");
    const double d = p[i] - q[i];
    s += d * d / q[i];
  }
  return std::sqrt(s);
}

// max_x |p(x) |G| - 1|.
inline double linf_distance(const std::vector<double>& p) {
  const double m = static_cast<double>(p.size());
  double worst = 0.0;
  for (double x : p) worst = std::max(worst, std::abs(x * m - 1.0));
  return worst;
}

inline std::vector<double> uniform_vector(std::size_t n) {
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

struct curve_point {
  std::uint64_t n = 0;
  double value = 0.0;
  double std_error = 0.0;
};

struct distance_curve {
  std::string group;
  std::string estimator;
  double alpha = 0.0;
  std::uint64_t replicas = 0;
  std::uint64_t seed = 0;
  std::vector<curve_point> points;
  // Diagnostics raised while estimating (e.g. too few replicas).
  std::vector<std::string> warnings;

  void push(std::uint64_t n, double value, double err = 0.0) {
    if (!points.empty() && n <= points.back().n)
      throw parameter_error("curve grid must be strictly increasing");
    points.push_back({n, value, err});
  }
  std::size_t size() const noexcept { return points.size(); }
  const curve_point& operator[](std::size_t i) const { return points[i]; }
  double value_at(std::uint64_t n) const {
    for (const auto& p : points)
      if (p.n == n) return p.value;
    throw parameter_error("curve has no point at n = " + std::to_string(n));
  }
};

}  // namespace srrw
