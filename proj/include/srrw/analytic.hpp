#pragma once

// Closed forms for cluster densities, isolated-vertex counts and the hypercube
// cutoff constant.

#include <cmath>
#include <cstdint>
#include <string>

#include "srrw/error.hpp"

namespace srrw {

namespace detail {
inline void check_open_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw parameter_error("alpha must lie in (0,1), got " + std::to_string(alpha));
}
inline double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}
}  // namespace detail

// Limiting density of size-k clusters: (1-alpha)/alpha * B(k, 1 + 1/alpha).
inline double theta_k(double alpha, std::uint64_t k) {
  detail::check_open_alpha(alpha);
  if (k < 1) throw parameter_error("theta_k needs k >= 1");
  if (k == 1) return (1.0 - alpha) / (1.0 + alpha);
  return (1.0 - alpha) / alpha *
         std::exp(detail::log_beta(static_cast<double>(k), 1.0 + 1.0 / alpha));
}

inline constexpr int hyp2f1_terms = 64;

// 2F1(1, 1/alpha; 1/alpha + 1; 1/2) = sum_m 2^-m / (1 + m alpha). Tail after 64 terms < 2^-64.
inline double hyp2f1_half(double alpha) {
  detail::check_open_alpha(alpha);
  double sum = 0.0;
  // Smallest terms first.
  for (int m = hyp2f1_terms - 1; m >= 0; --m) sum += std::ldexp(1.0, -m) / (1.0 + m * alpha);
  return sum;
}

// Same constant from the Pochhammer series sum (a)_m (b)_m / ((c)_m m!) z^m.
inline double hyp2f1_half_pochhammer(double alpha) {
  detail::check_open_alpha(alpha);
  const double a = 1.0, b = 1.0 / alpha, c = b + 1.0, z = 0.5;
  double term = 1.0, sum = 1.0;
  for (int m = 0; m < 200; ++m) {
    term *= (a + m) * (b + m) / ((c + m) * (m + 1.0)) * z;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

// c_alpha = 1 / ((1 - alpha) F(alpha)).
inline double cutoff_constant(double alpha) {
  return 1.0 / ((1.0 - alpha) * hyp2f1_half(alpha));
}

// Limiting density of odd-size clusters, (1 - alpha)/2 * F(alpha).
inline double odd_cluster_density(double alpha) {
  return 0.5 * (1.0 - alpha) * hyp2f1_half(alpha);
}

// beta_n = Gamma(n - alpha) / (Gamma(1 - alpha) Gamma(n + 1)), beta_1 = 1.
inline double beta_n(std::uint64_t n, double alpha) {
  check_alpha(alpha);
  if (n < 1) throw parameter_error("beta_n needs n >= 1");
  if (n == 1) return 1.0;
  const double x = static_cast<double>(n);
  return std::exp(std::lgamma(x - alpha) - std::lgamma(1.0 - alpha) - std::lgamma(x + 1.0));
}

// prod_{k=1}^{n-1} (1 - (1 + alpha)/(k + 1)).
inline double beta_n_product(std::uint64_t n, double alpha) {
  double p = 1.0;
  for (std::uint64_t k = 1; k < n; ++k) p *= 1.0 - (1.0 + alpha) / (k + 1.0);
  return p;
}

// a_m = prod_{k=1}^{m-1} (1 + alpha/k) = Gamma(m + alpha) / (Gamma(1 + alpha) Gamma(m)).
inline double log_a_m(std::uint64_t m, double alpha) {
  check_alpha(alpha);
  if (m < 1) throw parameter_error("a_m needs m >= 1");
  const double x = static_cast<double>(m);
  return std::lgamma(x + alpha) - std::lgamma(1.0 + alpha) - std::lgamma(x);
}

inline double a_m(std::uint64_t m, double alpha) { return std::exp(log_a_m(m, alpha)); }

inline double a_m_product(std::uint64_t m, double alpha) {
  double p = 1.0;
  for (std::uint64_t k = 1; k < m; ++k) p *= 1.0 + alpha / k;
  return p;
}

// a_n / a_t: mean size at time n of a cluster that is a singleton at time t.
inline double growth_factor(std::uint64_t t, std::uint64_t n, double alpha) {
  if (t < 1 || t > n) throw parameter_error("growth factor needs 1 <= t <= n");
  return std::exp(log_a_m(n, alpha) - log_a_m(t, alpha));
}

// E I(n) = (1 - alpha) n / (1 + alpha) + 2 alpha n beta_n / (1 + alpha).
inline double expected_isolated_exact(std::uint64_t n, double alpha) {
  check_alpha(alpha);
  if (n < 1) throw parameter_error("expected isolated count needs n >= 1");
  const double x = static_cast<double>(n);
  return ((1.0 - alpha) * x + 2.0 * alpha * x * beta_n(n, alpha)) / (1.0 + alpha);
}

}  // namespace srrw
