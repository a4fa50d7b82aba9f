#pragma once

// Mixing-time extraction and decay fits on distance curves.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "srrw/distance.hpp"
#include "srrw/error.hpp"

namespace srrw {

struct mixing_estimate {
  double epsilon = 0.0;
  std::uint64_t t_mix = 1;    // 1 + largest grid n with value > epsilon, or 1
  std::uint64_t upper = 1;    // next grid time after the last exceedance
  std::uint64_t horizon = 0;  // last grid time scanned
  std::vector<std::uint64_t> exceedances;
  bool guard_triggered = false;  // an exceedance lies in the last 10% of grid points
};

// The "for all later times" clause is enforced over the scanned grid: the estimate
// sits just past the last exceedance, not at the first crossing.
inline mixing_estimate mixing_time_scan(const distance_curve& curve, double epsilon,
                                        std::uint64_t horizon = 0) {
  mixing_estimate m;
  m.epsilon = epsilon;
  std::vector<curve_point> pts;
  for (const auto& p : curve.points)
    if (horizon == 0 || p.n <= horizon) pts.push_back(p);
  if (pts.empty()) throw parameter_error("mixing scan on an empty curve");
  m.horizon = pts.back().n;
  const std::size_t tail = (pts.size() + 9) / 10;
  std::size_t last = pts.size();
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (pts[i].value > epsilon) {
      m.exceedances.push_back(pts[i].n);
      last = i;
      if (i + tail >= pts.size()) m.guard_triggered = true;
    }
  if (last == pts.size()) {
    m.t_mix = 1;
    m.upper = 1;
  } else {
    m.t_mix = pts[last].n + 1;
    m.upper = last + 1 < pts.size() ? pts[last + 1].n : pts[last].n + 1;
  }
  return m;
}

struct decay_fit {
  double C_fit = 0.0;
  double rho_fit = 0.0;
  double r_squared = 0.0;
  std::size_t points_used = 0;
  std::size_t points_trimmed = 0;  // nonpositive values dropped from the window
};

// Least squares of log D(n) on (1 - alpha) n over n in [n_lo, n_hi].
inline decay_fit decay_rate_fit(const distance_curve& curve, double alpha, std::uint64_t n_lo = 0,
                                std::uint64_t n_hi = std::numeric_limits<std::uint64_t>::max()) {
  decay_fit f;
  std::vector<double> xs, ys;
  for (const auto& p : curve.points) {
    if (p.n < n_lo || p.n > n_hi) continue;
    if (!(p.value > 0.0)) {
      ++f.points_trimmed;
      continue;
    }
    xs.push_back((1.0 - alpha) * static_cast<double>(p.n));
    ys.push_back(std::log(p.value));
  }
  f.points_used = xs.size();
  if (xs.size() < 2) throw domain_error("decay fit needs two positive points in the window");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0) throw domain_error("decay fit window has a single time");
  const double slope = sxy / sxx;
  f.rho_fit = std::exp(slope);
  f.C_fit = std::exp(my - slope * mx);
  f.r_squared = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

// Gaussian kernel smoothing over grid index with bandwidth in grid steps.
// Presentation only; mixing times are taken from unsmoothed curves.
inline distance_curve smooth_curve(const distance_curve& curve, double bandwidth = 2.0) {
  distance_curve out = curve;
  if (bandwidth <= 0.0) return out;
  const auto n = static_cast<long>(curve.points.size());
  const long reach = static_cast<long>(std::ceil(4.0 * bandwidth));
  for (long i = 0; i < n; ++i) {
    double s = 0.0, w = 0.0;
    for (long j = std::max(0L, i - reach); j <= std::min(n - 1, i + reach); ++j) {
      const double z = static_cast<double>(j - i) / bandwidth;
      const double k = std::exp(-0.5 * z * z);
      s += k * curve.points[j].value;
      w += k;
    }
    out.points[i].value = s / w;
  }
  out.estimator += "+smoothed";
  return out;
}

}  // namespace srrw
