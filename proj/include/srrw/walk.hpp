#pragma once

// Step-reinforced random walks: S_0 = e, S_n = S_{n-1} X_n, where X_n copies a
// uniform earlier step with probability alpha and is a fresh mu-draw otherwise.
//
// Two samplers: the direct definition, and the forest construction that draws one
// spin per cluster root and multiplies spins along root labels.

#include <cstdint>
#include <vector>

#include "srrw/distribution.hpp"
#include "srrw/error.hpp"
#include "srrw/forest.hpp"
#include "srrw/parallel.hpp"
#include "srrw/rng.hpp"

namespace srrw {

struct walk_path {
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::vector<element_t> steps;      // X_1..X_n at [0, n)
  std::vector<element_t> positions;  // S_0..S_n at [0, n]

  std::uint32_t n() const noexcept { return static_cast<std::uint32_t>(steps.size()); }
  element_t endpoint() const { return positions.back(); }
};

// Direct sampler with a caller-supplied reinforcement decision keep(j, rng) for j >= 2.
template <class Keep>
walk_path sample_path_direct_with(const step_distribution& mu, double alpha, std::uint32_t n,
                                  rng_stream& rng, Keep&& keep) {
  check_alpha(alpha);
  if (n < 1) throw parameter_error("walk length must be >= 1");
  const auto& g = mu.group();
  walk_path w;
  w.alpha = alpha;
  w.steps.resize(n);
  w.positions.resize(n + 1);
  w.positions[0] = g.identity();
  for (std::uint32_t j = 1; j <= n; ++j) {
    element_t x;
    if (j >= 2 && keep(j, rng)) x = w.steps[rng.bounded(j - 1)];
    else x = mu.sample(rng);
    w.steps[j - 1] = x;
    w.positions[j] = g.multiply(w.positions[j - 1], x);
  }
  return w;
}

inline walk_path sample_path_direct(const step_distribution& mu, double alpha, std::uint32_t n,
                                    rng_stream& rng) {
  return sample_path_direct_with(mu, alpha, n, rng,
                                 [alpha](std::uint32_t, rng_stream& r) { return r.bernoulli(alpha); });
}

// Endpoint only; `history` is scratch storage reused across calls.
inline element_t sample_endpoint_direct(const step_distribution& mu, double alpha,
                                        std::uint32_t n, rng_stream& rng,
                                        std::vector<element_t>& history) {
  const auto& g = mu.group();
  history.resize(n);
  element_t s = g.identity();
  for (std::uint32_t j = 1; j <= n; ++j) {
    element_t x;
    if (j >= 2 && rng.bernoulli(alpha)) x = history[rng.bounded(j - 1)];
    else x = mu.sample(rng);
    history[j - 1] = x;
    s = g.multiply(s, x);
  }
  return s;
}

// Spins by cluster root; `assigned` marks the roots that carry one.
struct spin_assignment {
  std::vector<element_t> value;  // at [root - 1]
  std::vector<std::uint8_t> assigned;

  explicit spin_assignment(std::uint32_t n = 0) : value(n, 0), assigned(n, 0) {}
  void set(std::uint32_t root, element_t g) {
    value[root - 1] = g;
    assigned[root - 1] = 1;
  }
  bool has(std::uint32_t root) const { return root >= 1 && root <= assigned.size() && assigned[root - 1]; }
  element_t get(std::uint32_t root) const { return value[root - 1]; }
};

struct forest_walk {
  forest_path forest;
  spin_assignment spins;
  walk_path walk;
};

// S_n = g_{L(1)} ... g_{L(n)} for the given forest and spins.
inline walk_path walk_from_forest(const finite_group& g, const forest_path& f,
                                  const spin_assignment& spins) {
  walk_path w;
  w.alpha = f.alpha;
  w.seed = f.seed;
  w.steps.resize(f.n);
  w.positions.resize(f.n + 1);
  w.positions[0] = g.identity();
  for (std::uint32_t j = 1; j <= f.n; ++j) {
    const std::uint32_t r = f.root[j - 1];
    if (!spins.has(r)) throw contract_error("missing spin for root " + std::to_string(r));
    w.steps[j - 1] = spins.get(r);
    w.positions[j] = g.multiply(w.positions[j - 1], w.steps[j - 1]);
  }
  return w;
}

inline forest_walk sample_path_forest(const step_distribution& mu, double alpha, std::uint32_t n,
                                      rng_stream& rng) {
  check_alpha(alpha);
  if (n < 1) throw parameter_error("walk length must be >= 1");
  growing_forest f(alpha);
  f.reserve(n);
  spin_assignment spins(n);
  for (std::uint32_t j = 1; j <= n; ++j) {
    const auto ev = f.step(rng);
    if (ev.fresh) spins.set(ev.root, mu.sample(rng));
  }
  forest_walk out{f.snapshot(), std::move(spins), {}};
  out.walk = walk_from_forest(mu.group(), out.forest, out.spins);
  return out;
}

inline element_t sample_endpoint_forest(const step_distribution& mu, double alpha,
                                        std::uint32_t n, rng_stream& rng,
                                        std::vector<element_t>& spin_by_root) {
  const auto& g = mu.group();
  growing_forest f(alpha);
  f.reserve(n);
  spin_by_root.resize(n);
  element_t s = g.identity();
  for (std::uint32_t j = 1; j <= n; ++j) {
    const auto ev = f.step(rng);
    if (ev.fresh) spin_by_root[ev.root - 1] = mu.sample(rng);
    s = g.multiply(s, spin_by_root[ev.root - 1]);
  }
  return s;
}

enum class construction { direct, forest };

// R endpoints S_n; replica r uses stream(seed, r).
inline std::vector<element_t> sample_endpoints(const step_distribution& mu, double alpha,
                                               std::uint32_t n, std::uint64_t replicas,
                                               std::uint64_t seed, construction how,
                                               unsigned threads = 0) {
  check_alpha(alpha);
  std::vector<element_t> out(replicas);
  const batch_plan plan(replicas);
  parallel_for(plan.batches, threads, [&](std::size_t b) {
    std::vector<element_t> scratch;
    for (std::uint64_t r = plan.begin(b); r < plan.end(b); ++r) {
      auto rng = rng_stream::stream(seed, r);
      out[r] = how == construction::direct ? sample_endpoint_direct(mu, alpha, n, rng, scratch)
                                           : sample_endpoint_forest(mu, alpha, n, rng, scratch);
    }
  });
  return out;
}

// delta_e P_1 ... P_n, where P_k is right multiplication by the spin of L(k) for
// steps in clusters of size >= 2, and P_mu for isolated steps.
inline std::vector<double> conditional_kernel_product(const step_distribution& mu,
                                                      const forest_path& f,
                                                      const spin_assignment& spins) {
  const auto& g = mu.group();
  if (g.order() > matrix_limit) throw capacity_error("kernel products need |G| <= 4096");
  std::vector<std::uint32_t> size(f.n + 1, 0);
  for (std::uint32_t j = 1; j <= f.n; ++j) ++size[f.root[j - 1]];
  std::vector<double> p = delta(g, g.identity());
  for (std::uint32_t k = 1; k <= f.n; ++k) {
    const std::uint32_t r = f.root[k - 1];
    if (size[r] == 1) {
      p = apply_step(p, mu);
    } else {
      if (!spins.has(r)) throw contract_error("missing spin for non-isolated root " + std::to_string(r));
      p = apply_deterministic(p, g, spins.get(r));
    }
  }
  return p;
}

}  // namespace srrw
