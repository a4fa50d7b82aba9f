#pragma once

// Absolute spectral gap of P_mu: lambda_* = max |lambda| over the spectrum with one
// copy of the eigenvalue 1 removed, gamma_* = 1 - lambda_*.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "srrw/distribution.hpp"
#include "srrw/error.hpp"

namespace srrw {

struct spectral_report {
  double lambda_star = 0.0;
  double gamma_star = 0.0;
  std::string method;  // "dft", "characters", "symmetric-eigensolver", "general-eigensolver"
};

namespace detail {

inline spectral_report finish_spectrum(std::vector<double> moduli, const std::string& method) {
  spectral_report r;
  r.method = method;
  r.lambda_star = moduli.empty() ? 0.0 : *std::max_element(moduli.begin(), moduli.end());
  r.gamma_star = 1.0 - r.lambda_star;
  return r;
}

}  // namespace detail

// lambda_k = sum_g mu(g) e^{2 pi i k g / L}, k = 0..L-1.
inline std::vector<std::complex<double>> cycle_eigenvalues(const step_distribution& mu) {
  const auto& g = mu.group();
  if (g.kind() != group_kind::cyclic) throw parameter_error("cycle eigenvalues need Z_L");
  const std::uint64_t L = g.order();
  if (L > (std::uint64_t{1} << 24)) throw capacity_error("cycle DFT capped at L <= 2^24");
  std::vector<std::complex<double>> lam(L);
  for (std::uint64_t k = 0; k < L; ++k) {
    std::complex<double> s = 0.0;
    for (const auto& [x, p] : mu.support()) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((k * x) % L) / L;
      s += p * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    lam[k] = s;
  }
  return lam;
}

// Steps on Z_2^d supported on {0, e_1, ..., e_d} with weights mu(e_k) = w[k].
// lambda_S = 1 - 2 sum_{k in S} w[k]; the extremes are the lightest single
// coordinate and the full set. No group is built, so d is unbounded.
inline spectral_report coordinate_character_gap(const std::vector<double>& w) {
  if (w.empty()) throw parameter_error("coordinate weights must be nonempty");
  double total = 0.0;
  for (double c : w) total += c;
  const double lightest = *std::min_element(w.begin(), w.end());
  const double lambda =
      std::max(std::abs(1.0 - 2.0 * lightest), w.size() > 1 ? std::abs(1.0 - 2.0 * total) : 0.0);
  spectral_report r;
  r.method = "characters";
  r.lambda_star = lambda;
  r.gamma_star = 1.0 - lambda;
  return r;
}

inline spectral_report spectral_gap(const step_distribution& mu) {
  const auto& g = mu.group();
  if (g.kind() == group_kind::cyclic) {
    const auto lam = cycle_eigenvalues(mu);
    std::vector<double> mod;
    for (std::size_t k = 1; k < lam.size(); ++k) mod.push_back(std::abs(lam[k]));
    return detail::finish_spectrum(std::move(mod), "dft");
  }
  if (g.kind() == group_kind::hypercube) {
    const unsigned d = g.parameter();
    // Eigenvalue of character S: sum_g mu(g) (-1)^{|S & g|}.
    bool coordinate_only = true;
    std::vector<double> coord(d, 0.0);
    for (const auto& [x, p] : mu.support()) {
      if (x == 0) continue;
      if ((x & (x - 1)) != 0) coordinate_only = false;
      else coord[std::countr_zero(x)] = p;
    }
    if (coordinate_only) return coordinate_character_gap(coord);
    if (d > 20) throw unsupported_error("hypercube characters for general mu need d <= 20");
    std::vector<double> mod;
    for (element_t S = 1; S < g.order(); ++S) {
      double s = 0.0;
      for (const auto& [x, p] : mu.support()) s += (std::popcount(S & x) & 1) ? -p : p;
      mod.push_back(std::abs(s));
    }
    return detail::finish_spectrum(std::move(mod), "characters");
  }
  if (g.order() > matrix_limit) throw capacity_error("spectral gap needs |G| <= 4096");
  const Eigen::MatrixXd P = transition_matrix(mu);
  if (is_symmetric(mu)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(P, Eigen::EigenvaluesOnly);
    std::vector<double> ev(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + solver.eigenvalues().size());
    // Largest eigenvalue is the trivial 1.
    ev.pop_back();
    for (double& v : ev) v = std::abs(v);
    return detail::finish_spectrum(std::move(ev), "symmetric-eigensolver");
  }
  if (g.order() > 512)
    throw unsupported_error("general eigensolver is limited to |G| <= 512 for non-symmetric mu");
  Eigen::EigenSolver<Eigen::MatrixXd> solver(P, false);
  const auto& ev = solver.eigenvalues();
  Eigen::Index trivial = 0;
  for (Eigen::Index i = 1; i < ev.size(); ++i)
    if (std::abs(ev[i] - 1.0) < std::abs(ev[trivial] - 1.0)) trivial = i;
  std::vector<double> mod;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (i != trivial) mod.push_back(std::abs(ev[i]));
  return detail::finish_spectrum(std::move(mod), "general-eigensolver");
}

}  // namespace srrw
