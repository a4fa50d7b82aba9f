#pragma once

// Evolving sets: W' = {y : Q(y) >= u} with Q(y) = sum_{x in W} P(x,y) and u uniform
// on (0,1). For fixed W the new set is piecewise constant in u with at most |G|
// breakpoints, so single-step laws, root profiles and their consequences are
// computed exactly from the sorted values of Q.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "srrw/distribution.hpp"
#include "srrw/error.hpp"
#include "srrw/forest.hpp"
#include "srrw/parallel.hpp"
#include "srrw/rng.hpp"
#include "srrw/walk.hpp"

namespace srrw {

using subset = std::vector<std::uint8_t>;  // membership flags over element indices

inline constexpr double threshold_snap = 1e-12;
inline constexpr std::uint64_t trajectory_limit = 4096;
inline constexpr std::uint32_t exhaustive_limit = 24;

// A step kernel: P_mu, or right multiplication by a fixed element.
struct set_kernel {
  const step_distribution* mu = nullptr;
  element_t shift = 0;

  static set_kernel markov(const step_distribution& m) { return {&m, 0}; }
  static set_kernel deterministic(element_t g) { return {nullptr, g}; }
};

inline std::size_t subset_size(const subset& w) {
  return static_cast<std::size_t>(std::count(w.begin(), w.end(), std::uint8_t{1}));
}

// Q(y) = sum_{x in W} P(x, y), with values within 1e-12 of 0 or 1 snapped.
inline std::vector<double> threshold_values(const finite_group& g, const subset& w,
                                            const set_kernel& k) {
  std::vector<double> q(w.size(), 0.0);
  for (element_t x = 0; x < w.size(); ++x) {
    if (!w[x]) continue;
    if (k.mu) {
      for (const auto& [s, p] : k.mu->support()) q[g.multiply(x, s)] += p;
    } else {
      q[g.multiply(x, k.shift)] = 1.0;
    }
  }
  for (double& v : q) {
    if (std::abs(v) <= threshold_snap) v = 0.0;
    else if (std::abs(v - 1.0) <= threshold_snap) v = 1.0;
  }
  return q;
}

inline subset evolving_step(const finite_group& g, const subset& w, const set_kernel& k, double u) {
  if (!(u > 0.0 && u < 1.0)) throw parameter_error("evolving step needs u in (0,1)");
  const auto q = threshold_values(g, w, k);
  subset out(w.size(), 0);
  for (std::size_t y = 0; y < q.size(); ++y) out[y] = q[y] >= u;
  return out;
}

// One piece of the single-step law: for u in (lo, hi], the new set is {y : Q(y) >= hi}.
struct step_segment {
  double lo = 0.0, hi = 0.0;
  double level = 0.0;     // threshold defining the set
  std::size_t size = 0;   // |{y : Q(y) >= level}|; 0 for the empty set above max Q
  double probability() const { return hi - lo; }
};

inline std::vector<step_segment> step_segments(const std::vector<double>& q) {
  std::vector<double> v;
  for (double x : q)
    if (x > 0.0) v.push_back(x);
  std::sort(v.rbegin(), v.rend());
  std::vector<step_segment> seg;
  const double top = v.empty() ? 0.0 : v.front();
  if (top < 1.0) seg.push_back({top, 1.0, std::numeric_limits<double>::infinity(), 0});
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    const double next = j < v.size() ? v[j] : 0.0;
    seg.push_back({next, v[i], v[i], j});
    i = j;
  }
  return seg;
}

// E sqrt(|W_mu|) = sum_i (q_(i) - q_(i+1)) sqrt(i) over Q sorted descending.
inline double expected_sqrt_size(const std::vector<double>& q) {
  double s = 0.0;
  for (const auto& seg : step_segments(q)) s += seg.probability() * std::sqrt(double(seg.size));
  return s;
}

inline double expected_size(const std::vector<double>& q) {
  double s = 0.0;
  for (const auto& seg : step_segments(q)) s += seg.probability() * double(seg.size);
  return s;
}

// psi(W) = 1 - E sqrt(|W_mu| / |W|).
inline double root_profile_psi_exact(const step_distribution& mu, const subset& w) {
  const std::size_t n = subset_size(w);
  if (n == 0) throw domain_error("psi is undefined on the empty set");
  const auto q = threshold_values(mu.group(), w, set_kernel::markov(mu));
  return 1.0 - expected_sqrt_size(q) / std::sqrt(static_cast<double>(n));
}

// Phi(A) = P_mu(A, A^c) / |A| = sum_{y not in A} Q(y) / |A|.
inline double bottleneck_ratio(const step_distribution& mu, const subset& a) {
  const std::size_t n = subset_size(a);
  if (n == 0) throw domain_error("bottleneck ratio is undefined on the empty set");
  const auto q = threshold_values(mu.group(), a, set_kernel::markov(mu));
  double out = 0.0;
  for (std::size_t y = 0; y < q.size(); ++y)
    if (!a[y]) out += q[y];
  return out / static_cast<double>(n);
}

// Masks.

inline subset subset_from_mask(std::uint64_t mask, std::size_t order) {
  subset w(order, 0);
  for (std::size_t i = 0; i < order; ++i) w[i] = (mask >> i) & 1u;
  return w;
}

inline std::uint64_t mask_from_subset(const subset& w) {
  if (w.size() > 64) throw capacity_error("subset masks need |G| <= 64");
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i]) m |= std::uint64_t{1} << i;
  return m;
}

// Exact law of the next set as mask -> probability (|G| <= 64).
inline std::map<std::uint64_t, double> step_law(const finite_group& g, std::uint64_t mask,
                                                const set_kernel& k) {
  const std::size_t n = g.order();
  if (n > 64) throw capacity_error("exact set laws need |G| <= 64");
  const auto q = threshold_values(g, subset_from_mask(mask, n), k);
  std::map<std::uint64_t, double> law;
  for (const auto& seg : step_segments(q)) {
    std::uint64_t m = 0;
    for (std::size_t y = 0; y < n; ++y)
      if (q[y] >= seg.level) m |= std::uint64_t{1} << y;
    if (seg.probability() > 0.0) law[m] += seg.probability();
  }
  return law;
}

// Doob transform K^(W, A) = |A| / |W| P(W_1 = A | W_0 = W), for nonempty W.
inline std::map<std::uint64_t, double> doob_transform_law(const finite_group& g, std::uint64_t mask,
                                                          const set_kernel& k) {
  if (mask == 0) throw domain_error("Doob transform needs a nonempty set");
  std::map<std::uint64_t, double> out;
  const double w = std::popcount(mask);
  for (const auto& [a, p] : step_law(g, mask, k))
    if (a != 0) out[a] = std::popcount(a) / w * p;
  return out;
}

struct evolving_checks {
  double max_martingale_error = 0.0;  // max |E|W_1| - |W_0||
  double max_doob_error = 0.0;        // max |sum_A K^(W, A) - 1|
  double max_duality_error = 0.0;     // max law difference, complement chain vs chain from W^c
  std::uint64_t sets_checked = 0;
};

inline std::uint64_t full_mask(std::size_t n) {
  return n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

// Exact checks over every W_0: the martingale identity, the Doob transform
// normalization, and complement duality over n_steps steps of kernel k.
inline evolving_checks evolving_set_checks(const finite_group& g, const set_kernel& k,
                                           std::uint32_t n_steps = 1) {
  const std::size_t n = g.order();
  if (n > 16) throw capacity_error("exhaustive evolving-set checks need |G| <= 16");
  const std::uint64_t full = full_mask(n);
  std::vector<std::map<std::uint64_t, double>> one(full + 1);
  for (std::uint64_t w = 0; w <= full; ++w) one[w] = step_law(g, w, k);
  evolving_checks r;
  for (std::uint64_t w = 0; w <= full; ++w) {
    ++r.sets_checked;
    double mean = 0.0;
    for (const auto& [a, p] : one[w]) mean += p * std::popcount(a);
    r.max_martingale_error = std::max(r.max_martingale_error, std::abs(mean - std::popcount(w)));
    if (w != 0) {
      double s = 0.0;
      for (const auto& [a, p] : doob_transform_law(g, w, k)) s += p;
      r.max_doob_error = std::max(r.max_doob_error, std::abs(s - 1.0));
    }
    // n-step laws of (W_j^c) from W and of (W_j) from W^c.
    std::map<std::uint64_t, double> from_w{{w, 1.0}}, from_c{{full & ~w, 1.0}};
    for (std::uint32_t t = 0; t < n_steps; ++t) {
      std::map<std::uint64_t, double> nw, nc;
      for (const auto& [a, p] : from_w)
        for (const auto& [b, q] : one[a]) nw[b] += p * q;
      for (const auto& [a, p] : from_c)
        for (const auto& [b, q] : one[a]) nc[b] += p * q;
      from_w.swap(nw);
      from_c.swap(nc);
    }
    std::map<std::uint64_t, double> diff;
    for (const auto& [a, p] : from_w) diff[full & ~a] += p;
    for (const auto& [a, p] : from_c) diff[a] -= p;
    for (const auto& [a, p] : diff) r.max_duality_error = std::max(r.max_duality_error, std::abs(p));
  }
  return r;
}

// Profiles.

struct profile_row {
  std::uint32_t size = 0;  // r = size / |G|
  double r = 0.0;
  double phi = 0.0;
  double psi = 0.0;
  std::uint64_t phi_witness = 0;
  std::uint64_t psi_witness = 0;
};

struct profile_table {
  std::vector<profile_row> rows;  // r = 1/|G|, ..., floor(|G|/2)/|G|
  bool certified = true;          // false for sampled tables (upper bounds only)
  std::uint64_t subsets_evaluated = 0;

  // Phi(r), psi(r) for any r >= 1/|G|; constant past 1/2.
  const profile_row& at(double r) const {
    const profile_row* best = nullptr;
    for (const auto& row : rows)
      if (row.r <= r + 1e-15) best = &row;
    if (!best) throw domain_error("profile defined for r >= 1/|G| only");
    return *best;
  }
};

enum class profile_mode { exhaustive, sampled };

namespace detail {

struct set_values {
  double phi, psi;
};

inline set_values evaluate_set(const std::vector<double>& q, std::uint64_t mask, std::size_t n) {
  const double size = std::popcount(mask);
  double inside = 0.0;
  for (std::size_t y = 0; y < n; ++y)
    if (mask >> y & 1u) inside += q[y];
  std::vector<double> snapped(q);
  for (double& v : snapped) {
    if (std::abs(v) <= threshold_snap) v = 0.0;
    else if (std::abs(v - 1.0) <= threshold_snap) v = 1.0;
  }
  const double phi = std::max(0.0, size - inside) / size;
  const double psi = 1.0 - expected_sqrt_size(snapped) / std::sqrt(size);
  return {phi, psi};
}

inline void finalize_profile(profile_table& t) {
  // Running infimum over sizes <= k.
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    auto& cur = t.rows[i];
    const auto& prev = t.rows[i - 1];
    if (prev.phi < cur.phi) {
      cur.phi = prev.phi;
      cur.phi_witness = prev.phi_witness;
    }
    if (prev.psi < cur.psi) {
      cur.psi = prev.psi;
      cur.psi_witness = prev.psi_witness;
    }
  }
}

}  // namespace detail

// Phi(r) and psi(r) for r = k/|G|, k = 1..floor(|G|/2). Exhaustive mode walks all
// subsets with |A| <= |G|/2 in Gray-code order, updating Q incrementally.
inline profile_table iso_profile(const step_distribution& mu, profile_mode mode = profile_mode::exhaustive,
                                 std::uint64_t samples = 20000, std::uint64_t seed = 1) {
  const auto& g = mu.group();
  const std::size_t n = g.order();
  const std::uint32_t half = static_cast<std::uint32_t>(n / 2);
  profile_table t;
  if (half == 0) throw domain_error("profiles need |G| >= 2");
  t.rows.resize(half);
  for (std::uint32_t k = 1; k <= half; ++k) {
    auto& row = t.rows[k - 1];
    row.size = k;
    row.r = static_cast<double>(k) / n;
    row.phi = row.psi = std::numeric_limits<double>::infinity();
  }
  auto record = [&](std::uint64_t mask, const detail::set_values& v) {
    auto& row = t.rows[std::popcount(mask) - 1];
    if (v.phi < row.phi) {
      row.phi = v.phi;
      row.phi_witness = mask;
    }
    if (v.psi < row.psi) {
      row.psi = v.psi;
      row.psi_witness = mask;
    }
    ++t.subsets_evaluated;
  };

  // Row x of P_mu as (column, mass).
  std::vector<std::vector<std::pair<element_t, double>>> row_of(n);
  if (n <= 64)
    for (element_t x = 0; x < n; ++x)
      for (const auto& [s, p] : mu.support()) row_of[x].emplace_back(g.multiply(x, s), p);

  if (mode == profile_mode::exhaustive) {
    if (n > exhaustive_limit)
      throw capacity_error("exhaustive profiles are capped at |G| <= 24, got " + std::to_string(n));
    std::vector<double> q(n, 0.0);
    std::uint64_t mask = 0;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t i = 1; i < total; ++i) {
      const int bit = std::countr_zero(i);
      const bool adding = !(mask >> bit & 1u);
      mask ^= std::uint64_t{1} << bit;
      if ((i & 4095u) == 0) {
        std::fill(q.begin(), q.end(), 0.0);
        for (element_t x = 0; x < n; ++x)
          if (mask >> x & 1u)
            for (const auto& [y, p] : row_of[x]) q[y] += p;
      } else {
        for (const auto& [y, p] : row_of[bit]) q[y] += adding ? p : -p;
      }
      if (static_cast<std::uint32_t>(std::popcount(mask)) <= half)
        record(mask, detail::evaluate_set(q, mask, n));
    }
  } else {
    if (n > 64) throw capacity_error("sampled profiles use 64-bit masks; |G| <= 64");
    t.certified = false;
    rng_stream rng(seed);
    auto values = [&](std::uint64_t mask) {
      std::vector<double> q(n, 0.0);
      for (element_t x = 0; x < n; ++x)
        if (mask >> x & 1u)
          for (const auto& [y, p] : row_of[x]) q[y] += p;
      return detail::evaluate_set(q, mask, n);
    };
    for (std::uint64_t s = 0; s < samples; ++s) {
      const std::uint32_t k = 1 + rng.bounded(half);
      std::vector<std::uint32_t> idx(n);
      std::iota(idx.begin(), idx.end(), 0u);
      for (std::uint32_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.bounded(n - i)]);
      std::uint64_t mask = 0;
      for (std::uint32_t i = 0; i < k; ++i) mask |= std::uint64_t{1} << idx[i];
      auto best = values(mask);
      record(mask, best);
      // Swap local search on Phi at fixed size.
      for (int pass = 0; pass < 4; ++pass) {
        bool improved = false;
        for (std::size_t a = 0; a < n; ++a) {
          if (!(mask >> a & 1u)) continue;
          for (std::size_t b = 0; b < n; ++b) {
            if (mask >> b & 1u) continue;
            const std::uint64_t cand = mask ^ (std::uint64_t{1} << a) ^ (std::uint64_t{1} << b);
            const auto v = values(cand);
            record(cand, v);
            if (v.phi < best.phi - 1e-15) {
              mask = cand;
              best = v;
              improved = true;
              break;
            }
          }
          if (improved) break;
        }
        if (!improved) break;
      }
    }
  }
  detail::finalize_profile(t);
  return t;
}

// Smallest slack of psi(W) >= mu0^2 Phi(W)^2 / (2 (1 - mu0)^2) over nonempty proper W.
inline double psi_phi_inequality_check(const step_distribution& mu) {
  const auto& g = mu.group();
  const double mu0 = mu(g.identity());
  if (!(mu0 > 0.0)) throw domain_error("psi-Phi inequality needs mu(e) > 0");
  const std::size_t n = g.order();
  if (n > exhaustive_limit) throw capacity_error("psi-Phi check is exhaustive; |G| <= 24");
  const double c = mu0 * mu0 / (2.0 * (1.0 - mu0) * (1.0 - mu0));
  double worst = std::numeric_limits<double>::infinity();
  const std::uint64_t full = full_mask(n);
  for (std::uint64_t m = 1; m < full; ++m) {
    const auto w = subset_from_mask(m, n);
    const double phi = bottleneck_ratio(mu, w);
    const double psi = root_profile_psi_exact(mu, w);
    worst = std::min(worst, psi - c * phi * phi);
  }
  return worst;
}

struct generation_report {
  double psi_half = 0.0;
  bool gamma_gamma_inv_generates = false;
  std::vector<element_t> generated;  // <Gamma Gamma^-1>
  bool equivalence_holds = false;    // (psi(1/2) > 0) == generates
  std::optional<std::uint64_t> witness;  // W with psi(W) = 0 and W Gamma Gamma^-1 = W
  bool witness_fixed = false;
};

inline constexpr double psi_zero_tolerance = 1e-12;

inline generation_report psi_positivity_vs_generation(const step_distribution& mu) {
  const auto& g = mu.group();
  irreducibility_certificate(mu);  // throws if the assumption fails
  generation_report r;
  const auto table = iso_profile(mu, profile_mode::exhaustive);
  const auto& row = table.rows.back();
  r.psi_half = row.psi;
  const auto ggi = gamma_gamma_inverse(g, mu.gamma());
  r.generated = generated_subgroup(g, ggi);
  r.gamma_gamma_inv_generates = r.generated.size() == g.order();
  const bool positive = r.psi_half > psi_zero_tolerance;
  r.equivalence_holds = positive == r.gamma_gamma_inv_generates;
  if (!positive) {
    r.witness = row.psi_witness;
    const std::uint64_t w = row.psi_witness;
    bool fixed = true;
    for (element_t x = 0; x < g.order() && fixed; ++x) {
      if (!(w >> x & 1u)) continue;
      for (element_t h : ggi)
        if (!(w >> g.multiply(x, h) & 1u)) fixed = false;
    }
    r.witness_fixed = fixed;
  }
  return r;
}

// Kernel sequence induced by a forest: P_mu at isolated steps, right
// multiplication by the cluster spin elsewhere.
inline std::vector<set_kernel> forest_kernels(const step_distribution& mu, const forest_path& f,
                                              const spin_assignment& spins) {
  std::vector<std::uint32_t> size(f.n + 1, 0);
  for (std::uint32_t j = 1; j <= f.n; ++j) ++size[f.root[j - 1]];
  std::vector<set_kernel> out;
  out.reserve(f.n);
  for (std::uint32_t k = 1; k <= f.n; ++k) {
    const std::uint32_t r = f.root[k - 1];
    if (size[r] == 1) {
      out.push_back(set_kernel::markov(mu));
    } else {
      if (!spins.has(r)) throw contract_error("missing spin for non-isolated root " + std::to_string(r));
      out.push_back(set_kernel::deterministic(spins.get(r)));
    }
  }
  return out;
}

// |W_0|, ..., |W_n| along the forest-induced kernels.
inline std::vector<std::size_t> evolving_trajectory(const step_distribution& mu,
                                                    const forest_path& f,
                                                    const spin_assignment& spins, subset w0,
                                                    rng_stream& rng) {
  const auto& g = mu.group();
  if (g.order() > trajectory_limit) throw capacity_error("trajectories need |G| <= 4096");
  if (w0.size() != g.order()) throw parameter_error("initial set has the wrong length");
  std::vector<std::size_t> sizes{subset_size(w0)};
  for (const auto& k : forest_kernels(mu, f, spins)) {
    w0 = evolving_step(g, w0, k, rng.uniform_open01());
    sizes.push_back(subset_size(w0));
  }
  return sizes;
}

}  // namespace srrw
