#pragma once

// Exact small-n ground truth by exhausting every (xi, u) configuration.
//
// Configurations are visited depth first so that consecutive leaves share their
// prefix. The weight of a configuration is prod_{j=2}^n [alpha or 1-alpha]/(j-1).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "srrw/distance.hpp"
#include "srrw/distribution.hpp"
#include "srrw/error.hpp"
#include "srrw/forest.hpp"
#include "srrw/parallel.hpp"

namespace srrw {

inline constexpr std::uint32_t oracle_max_n = 9;
inline constexpr double oracle_spin_cap = 1e5;

struct enumeration_summary {
  std::uint64_t configurations = 0;
  double total_weight = 0.0;
};

namespace detail {

template <class Visit>
void enumerate_rec(growing_forest& f, std::uint32_t n, double weight, bool skip_zero,
                   enumeration_summary& summary, kahan_sum& total, Visit& visit) {
  const std::uint32_t j = f.n() + 1;
  if (j > n) {
    ++summary.configurations;
    total.add(weight);
    visit(static_cast<const growing_forest&>(f), weight);
    return;
  }
  const double alpha = f.alpha();
  const double inv = 1.0 / static_cast<double>(j - 1);
  for (int keep = 0; keep <= 1; ++keep) {
    const double pk = keep ? alpha : 1.0 - alpha;
    if (skip_zero && pk == 0.0) continue;
    for (std::uint32_t u = 1; u < j; ++u) {
      f.push(keep != 0, u);
      enumerate_rec(f, n, weight * pk * inv, skip_zero, summary, total, visit);
      f.pop();
    }
  }
}

}  // namespace detail

// Calls visit(forest, weight) once per configuration. With skip_zero, branches of
// probability zero (xi_j = 1 at alpha = 0) are pruned.
template <class Visit>
enumeration_summary enumerate_forests(std::uint32_t n, double alpha, Visit&& visit,
                                      bool skip_zero = false) {
  check_alpha(alpha);
  if (n < 1) throw parameter_error("enumeration needs n >= 1");
  if (n > oracle_max_n) throw capacity_error("forest enumeration is capped at n = 9");
  growing_forest f(alpha);
  f.reserve(n);
  f.push(false, 0);
  enumeration_summary summary;
  kahan_sum total;
  detail::enumerate_rec(f, n, 1.0, skip_zero, summary, total, visit);
  summary.total_weight = total.value();
  return summary;
}

// E f(F_n) over the exact forest law.
template <class Functional>
double exact_forest_expectation(std::uint32_t n, double alpha, Functional&& fn) {
  kahan_sum acc;
  enumerate_forests(
      n, alpha, [&](const growing_forest& f, double w) { acc.add(w * fn(f)); }, true);
  return acc.value();
}

inline double expected_isolated_oracle(std::uint32_t n, double alpha) {
  return exact_forest_expectation(n, alpha,
                                  [](const growing_forest& f) { return double(f.isolated()); });
}

namespace detail {

// Step pattern of a forest: token 0 for an isolated step, t >= 1 for the t-th
// cluster of size >= 2 in order of first appearance, packed 4 bits per step.
inline std::uint64_t step_pattern(const growing_forest& f, unsigned& big_clusters) {
  std::uint64_t key = 0;
  std::uint32_t first_root[16] = {};
  big_clusters = 0;
  for (std::uint32_t k = 1; k <= f.n(); ++k) {
    const std::uint32_t r = f.root_of(k);
    std::uint64_t token = 0;
    if (f.cluster_size(r) >= 2) {
      unsigned t = 0;
      while (t < big_clusters && first_root[t] != r) ++t;
      if (t == big_clusters) first_root[big_clusters++] = r;
      token = t + 1;
    }
    key |= token << (4 * (k - 1));
  }
  return key;
}

}  // namespace detail

// P(S_n = .), integrating singleton spins through P_mu and enumerating the spins
// of larger clusters.
inline std::vector<double> exact_endpoint_distribution(const step_distribution& mu, double alpha,
                                                       std::uint32_t n, unsigned threads = 0) {
  const auto& g = mu.group();
  if (g.order() > matrix_limit) throw capacity_error("exact oracle needs |G| <= 4096");
  if (n > oracle_max_n) throw capacity_error("exact oracle is capped at n = 9");

  struct pattern {
    kahan_sum weight;
    unsigned big = 0;
  };
  std::map<std::uint64_t, pattern> patterns;
  enumerate_forests(
      n, alpha,
      [&](const growing_forest& f, double w) {
        unsigned big = 0;
        const std::uint64_t key = detail::step_pattern(f, big);
        auto& p = patterns[key];
        p.weight.add(w);
        p.big = big;
      },
      true);

  const auto& support = mu.support();
  for (const auto& [key, p] : patterns)
    if (std::pow(static_cast<double>(support.size()), p.big) > oracle_spin_cap)
      throw capacity_error("exact oracle: |Gamma|^(#clusters of size >= 2) exceeds 10^5");

  std::vector<std::pair<std::uint64_t, const pattern*>> items;
  for (const auto& [key, p] : patterns) items.emplace_back(key, &p);
  std::vector<std::vector<double>> partial(items.size());

  parallel_for(items.size(), threads, [&](std::size_t i) {
    const std::uint64_t key = items[i].first;
    const unsigned big = items[i].second->big;
    std::vector<kahan_sum> acc(g.order());
    std::vector<std::size_t> choice(big, 0);
    for (;;) {
      double spin_weight = 1.0;
      for (unsigned t = 0; t < big; ++t) spin_weight *= support[choice[t]].second;
      std::vector<double> v = delta(g, g.identity());
      for (std::uint32_t k = 0; k < n; ++k) {
        const unsigned token = (key >> (4 * k)) & 0xFu;
        v = token == 0 ? apply_step(v, mu)
                       : apply_deterministic(v, g, support[choice[token - 1]].first);
      }
      for (element_t x = 0; x < g.order(); ++x) acc[x].add(spin_weight * v[x]);
      unsigned t = 0;
      while (t < big && ++choice[t] == support.size()) choice[t++] = 0;
      if (t == big) break;
    }
    partial[i].resize(g.order());
    const double w = items[i].second->weight.value();
    for (element_t x = 0; x < g.order(); ++x) partial[i][x] = w * acc[x].value();
  });

  std::vector<double> out(g.order());
  for (element_t x = 0; x < g.order(); ++x) {
    kahan_sum s;
    for (const auto& part : partial) s.add(part[x]);
    out[x] = s.value();
  }
  return out;
}

// TV(P(S_n = .), U) for n = 1..n_max.
inline distance_curve exact_tv_curve(const step_distribution& mu, double alpha,
                                     std::uint32_t n_max) {
  if (n_max < 1 || n_max > oracle_max_n) throw capacity_error("exact curve needs 1 <= n_max <= 9");
  distance_curve c;
  c.group = mu.group().describe();
  c.estimator = "exact";
  c.alpha = alpha;
  for (std::uint32_t n = 1; n <= n_max; ++n)
    c.push(n, tv_to_uniform(exact_endpoint_distribution(mu, alpha, n)));
  return c;
}

struct negative_correlation_report {
  double max_violation_ge = -1.0;  // max of P(all >= K) - prod P(>= K)
  double max_violation_lt = -1.0;  // same for the {< K} family
  std::uint64_t prefixes = 0;
  std::uint64_t subsets = 0;
  double max_violation() const { return std::max(max_violation_ge, max_violation_lt); }
};

// For every prefix F_m and every nonempty subset J of its roots, compares the joint
// probability that all clusters C_{j,n}, j in J, reach size K with the product of
// the marginals, by exhausting the suffixes m+1..n.
inline negative_correlation_report negative_correlation_check(double alpha, std::uint32_t n,
                                                              std::uint32_t m, std::uint32_t K) {
  check_alpha(alpha);
  if (n > 8) throw capacity_error("negative correlation check is capped at n = 8");
  if (m < 1 || m >= n) throw parameter_error("conditioning time must satisfy 1 <= m < n");

  negative_correlation_report report;
  enumerate_forests(
      m, alpha,
      [&](const growing_forest& prefix, double) {
        ++report.prefixes;
        std::vector<std::uint32_t> roots;
        for (std::uint32_t j = 1; j <= m; ++j)
          if (prefix.root_of(j) == j) roots.push_back(j);
        const auto r = static_cast<unsigned>(roots.size());
        const std::uint32_t all = (1u << r) - 1u;
        std::vector<kahan_sum> law(std::size_t{1} << r);

        growing_forest f = prefix;
        auto rec = [&](auto&& self, double w) -> void {
          const std::uint32_t j = f.n() + 1;
          if (j > n) {
            std::uint32_t mask = 0;
            for (unsigned i = 0; i < r; ++i)
              if (f.cluster_size(roots[i]) >= K) mask |= 1u << i;
            law[mask].add(w);
            return;
          }
          const double inv = 1.0 / static_cast<double>(j - 1);
          for (int keep = 0; keep <= 1; ++keep) {
            const double pk = keep ? alpha : 1.0 - alpha;
            if (pk == 0.0) continue;
            for (std::uint32_t u = 1; u < j; ++u) {
              f.push(keep != 0, u);
              self(self, w * pk * inv);
              f.pop();
            }
          }
        };
        rec(rec, 1.0);

        auto violation = [&](bool at_least) {
          std::vector<double> marginal(r, 0.0);
          for (std::uint32_t mask = 0; mask <= all; ++mask) {
            const std::uint32_t ev = at_least ? mask : (~mask & all);
            for (unsigned i = 0; i < r; ++i)
              if (ev >> i & 1u) marginal[i] += law[mask].value();
          }
          double worst = -1.0;
          for (std::uint32_t J = 1; J <= all; ++J) {
            double joint = 0.0;
            for (std::uint32_t mask = 0; mask <= all; ++mask) {
              const std::uint32_t ev = at_least ? mask : (~mask & all);
              if ((ev & J) == J) joint += law[mask].value();
            }
            double prod = 1.0;
            for (unsigned i = 0; i < r; ++i)
              if (J >> i & 1u) prod *= marginal[i];
            worst = std::max(worst, joint - prod);
          }
          return worst;
        };
        report.max_violation_ge = std::max(report.max_violation_ge, violation(true));
        report.max_violation_lt = std::max(report.max_violation_lt, violation(false));
        report.subsets += all;
      },
      true);
  return report;
}

}  // namespace srrw
