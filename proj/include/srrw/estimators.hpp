#pragma once

// Monte Carlo estimators of TV(P(S_n = .), U) along a grid of times.
//
//  * empirical: plug-in TV of endpoint histograms (any group), bootstrap error.
//  * cycle Rao-Blackwell: for mu(+-1) = 1/2 on odd Z_L, the conditional law of S_n
//    given the forest has Fourier coefficients prod_j cos(2 pi k |C_j| / L); these
//    are averaged over forests and inverted. Jackknife error over batches.
//  * hypercube semi-exact: given the forest, S_n on Z_2^d with the lazy mu is the
//    lazy walk after N_J(n) steps (N_J = number of odd clusters), so its Hamming
//    weight law is an Ehrenfest chain run N_J(n) steps.
//
// Replicas are split into at most 64 contiguous batches; replica r always draws
// from stream(seed, r) and batch results are reduced in batch order, so results do
// not depend on the number of threads.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <tuple>
#include <vector>

#include "srrw/distance.hpp"
#include "srrw/distribution.hpp"
#include "srrw/error.hpp"
#include "srrw/forest.hpp"
#include "srrw/parallel.hpp"
#include "srrw/rng.hpp"
#include "srrw/walk.hpp"

namespace srrw {

using time_grid = std::vector<std::uint64_t>;

inline void check_grid(const time_grid& grid) {
  if (grid.empty()) throw parameter_error("time grid is empty");
  if (grid.front() < 1) throw parameter_error("time grid must start at n >= 1");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1]) throw parameter_error("time grid must be strictly increasing");
  if (grid.back() > 0xFFFFFFFFull) throw parameter_error("time grid exceeds 2^32 - 1");
}

// Every integer up to `dense_until`, then about `per_decade` points per decade up to n_max.
inline time_grid geometric_grid(std::uint64_t n_max, std::uint64_t dense_until = 10,
                                double per_decade = 40.0) {
  time_grid g;
  for (std::uint64_t n = 1; n <= std::min(dense_until, n_max); ++n) g.push_back(n);
  const double ratio = std::pow(10.0, 1.0 / per_decade);
  double x = static_cast<double>(g.empty() ? 1 : g.back());
  while (true) {
    x *= ratio;
    const auto n = static_cast<std::uint64_t>(std::ceil(x));
    if (n > n_max) break;
    if (g.empty() || n > g.back()) g.push_back(n);
  }
  if (g.empty() || g.back() != n_max) g.push_back(n_max);
  return g;
}

inline time_grid linear_grid(std::uint64_t start, std::uint64_t stop, std::uint64_t step) {
  if (step == 0 || start < 1 || stop < start) throw parameter_error("bad linear grid");
  time_grid g;
  for (std::uint64_t n = start; n <= stop; n += step) g.push_back(n);
  if (g.back() != stop) g.push_back(stop);
  return g;
}

struct estimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Jackknife over batches: stat(excluded batch or -1 for none).
template <class Stat>
estimate jackknife(std::size_t batches, Stat&& stat) {
  estimate e;
  e.value = stat(-1);
  if (batches < 2) return e;
  std::vector<double> loo(batches);
  double mean = 0.0;
  for (std::size_t b = 0; b < batches; ++b) mean += loo[b] = stat(static_cast<long>(b));
  mean /= static_cast<double>(batches);
  double ss = 0.0;
  for (double v : loo) ss += (v - mean) * (v - mean);
  e.std_error = std::sqrt(ss * (batches - 1.0) / batches);
  return e;
}

// Empirical estimator.

struct empirical_estimate {
  double value = 0.0;
  double std_error = 0.0;
  bool undersampled = false;  // R < 100 |G|
};

inline constexpr std::uint64_t bootstrap_seed = 0xB007B007ULL;
inline constexpr int bootstrap_resamples = 256;

// Plug-in TV of the pooled histogram; error by resampling whole batches.
inline empirical_estimate bootstrap_tv(const std::vector<std::vector<std::uint32_t>>& batch_hist,
                                       std::uint64_t order, std::uint64_t seed = bootstrap_seed) {
  const std::size_t B = batch_hist.size();
  std::vector<double> pooled(order, 0.0);
  std::vector<std::uint64_t> batch_total(B, 0);
  double total = 0.0;
  for (std::size_t b = 0; b < B; ++b)
    for (std::uint64_t x = 0; x < order; ++x) {
      pooled[x] += batch_hist[b][x];
      batch_total[b] += batch_hist[b][x];
    }
  for (double v : pooled) total += v;
  empirical_estimate e;
  if (total == 0) return e;
  for (double& v : pooled) v /= total;
  e.value = tv_to_uniform(pooled);
  e.undersampled = total < 100.0 * static_cast<double>(order);
  if (B < 2) return e;
  rng_stream rng(seed);
  std::vector<double> h(order);
  double s1 = 0.0, s2 = 0.0;
  for (int rep = 0; rep < bootstrap_resamples; ++rep) {
    std::fill(h.begin(), h.end(), 0.0);
    double t = 0.0;
    for (std::size_t i = 0; i < B; ++i) {
      const std::size_t b = rng.bounded(static_cast<std::uint32_t>(B));
      for (std::uint64_t x = 0; x < order; ++x) h[x] += batch_hist[b][x];
      t += batch_total[b];
    }
    if (t == 0) continue;
    for (double& v : h) v /= t;
    const double tv = tv_to_uniform(h);
    s1 += tv;
    s2 += tv * tv;
  }
  const double mean = s1 / bootstrap_resamples;
  e.std_error = std::sqrt(std::max(0.0, s2 / bootstrap_resamples - mean * mean));
  return e;
}

inline empirical_estimate empirical_tv_estimator(const std::vector<element_t>& samples,
                                                 const finite_group& g) {
  if (g.order() > dense_distribution_limit) throw capacity_error("histogram over a huge group");
  const batch_plan plan(samples.size());
  std::vector<std::vector<std::uint32_t>> hist(std::max<std::size_t>(plan.batches, 1),
                                               std::vector<std::uint32_t>(g.order(), 0));
  for (std::size_t b = 0; b < plan.batches; ++b)
    for (std::uint64_t r = plan.begin(b); r < plan.end(b); ++r) ++hist[b][samples[r]];
  return bootstrap_tv(hist, g.order());
}

// Endpoint histograms at each grid time from R walks.
inline distance_curve empirical_tv_curve(const step_distribution& mu, double alpha,
                                         const time_grid& grid, std::uint64_t replicas,
                                         std::uint64_t seed,
                                         construction how = construction::direct,
                                         unsigned threads = 0) {
  check_alpha(alpha);
  check_grid(grid);
  if (replicas < 1) throw parameter_error("replicas must be >= 1");
  const auto& g = mu.group();
  const std::uint64_t order = g.order();
  const batch_plan plan(replicas);
  const double cells = static_cast<double>(order) * grid.size() * plan.batches;
  if (cells > 1.5e8) throw capacity_error("empirical curve histograms exceed 600 MB");
  // hist[b][i][x]
  std::vector<std::vector<std::vector<std::uint32_t>>> hist(
      plan.batches,
      std::vector<std::vector<std::uint32_t>>(grid.size(), std::vector<std::uint32_t>(order, 0)));
  const auto n_max = static_cast<std::uint32_t>(grid.back());

  parallel_for(plan.batches, threads, [&](std::size_t b) {
    std::vector<element_t> history(n_max);
    for (std::uint64_t r = plan.begin(b); r < plan.end(b); ++r) {
      auto rng = rng_stream::stream(seed, r);
      element_t s = g.identity();
      std::size_t next = 0;
      if (how == construction::direct) {
        for (std::uint32_t j = 1; j <= n_max; ++j) {
          element_t x;
          if (j >= 2 && rng.bernoulli(alpha)) x = history[rng.bounded(j - 1)];
          else x = mu.sample(rng);
          history[j - 1] = x;
          s = g.multiply(s, x);
          if (j == grid[next]) ++hist[b][next++][s];
        }
      } else {
        growing_forest f(alpha);
        f.reserve(n_max);
        for (std::uint32_t j = 1; j <= n_max; ++j) {
          const auto ev = f.step(rng);
          if (ev.fresh) history[ev.root - 1] = mu.sample(rng);
          s = g.multiply(s, history[ev.root - 1]);
          if (j == grid[next]) ++hist[b][next++][s];
        }
      }
    }
  });

  distance_curve c;
  c.group = g.describe();
  c.estimator = how == construction::direct ? "empirical-direct" : "empirical-forest";
  c.alpha = alpha;
  c.replicas = replicas;
  c.seed = seed;
  std::vector<std::vector<std::uint32_t>> slice(plan.batches);
  bool undersampled = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t b = 0; b < plan.batches; ++b) slice[b] = hist[b][i];
    const auto e = bootstrap_tv(slice, order);
    undersampled |= e.undersampled;
    c.push(grid[i], e.value, e.std_error);
  }
  if (undersampled)
    c.warnings.push_back("replicas below 100*|G|; plug-in TV is biased upward by O(sqrt(|G|/R))");
  return c;
}

// Cycle Rao-Blackwell estimator.

// Conditional Fourier coefficients prod_j cos(2 pi k c_j / L), k = 0..L-1.
inline std::vector<double> cycle_conditional_fourier(std::uint32_t L,
                                                     const std::vector<std::uint32_t>& sizes) {
  std::vector<double> phi(L, 1.0);
  for (std::uint32_t k = 1; k < L; ++k)
    for (std::uint32_t c : sizes)
      phi[k] *= std::cos(2.0 * std::numbers::pi * static_cast<double>((std::uint64_t{k} * c) % L) / L);
  return phi;
}

// Law on Z_L with real, symmetric Fourier coefficients phi_k (phi_0 = 1).
// p(x) - 1/L = (2/L) sum_{k=1}^{(L-1)/2} phi_k cos(2 pi k x / L), for odd L.
inline std::vector<double> cycle_deviation_from_fourier(std::uint32_t L,
                                                        const std::vector<double>& phi_half) {
  std::vector<double> dev(L, 0.0);
  for (std::uint32_t x = 0; x < L; ++x) {
    double s = 0.0;
    for (std::uint32_t k = 1; k <= (L - 1) / 2; ++k)
      s += phi_half[k - 1] *
           std::cos(2.0 * std::numbers::pi * static_cast<double>((std::uint64_t{k} * x) % L) / L);
    dev[x] = 2.0 * s / L;
  }
  return dev;
}

inline std::vector<double> cycle_law_from_fourier(std::uint32_t L, const std::vector<double>& phi_half) {
  auto dev = cycle_deviation_from_fourier(L, phi_half);
  for (double& v : dev) v += 1.0 / L;
  return dev;
}

// Conditional law of S_n given the cluster sizes, mu(+-1) = 1/2 on odd Z_L.
inline std::vector<double> cycle_conditional_law(std::uint32_t L,
                                                 const std::vector<std::uint32_t>& sizes) {
  const auto phi = cycle_conditional_fourier(L, sizes);
  return cycle_law_from_fourier(L, std::vector<double>(phi.begin() + 1, phi.begin() + 1 + (L - 1) / 2));
}

namespace detail {

// Per-step increments of log|prod| and sign flips when one cluster size moves
// from residue r to r+1 (mod L), for k = 1..K, stored row-major by r.
struct cycle_tables {
  std::uint32_t L = 0, K = 0;
  std::vector<double> dlog;        // log|cos(2 pi k c / L)|
  std::vector<std::uint8_t> flip;  // sign change of cos(2 pi k c / L)
  std::vector<double> dlog2;       // log cos^2(pi k c / L)
  std::vector<double> cosine;      // cos(2 pi k x / L) at [k-1][x]

  explicit cycle_tables(std::uint32_t L_) : L(L_), K((L_ - 1) / 2) {
    auto lc = [&](std::uint64_t k, std::uint64_t c, double scale) {
      return std::cos(scale * std::numbers::pi * static_cast<double>((k * c) % (2 * L)) / L);
    };
    dlog.resize(std::size_t{L} * K);
    flip.resize(std::size_t{L} * K);
    dlog2.resize(std::size_t{L} * K);
    for (std::uint32_t r = 0; r < L; ++r)
      for (std::uint32_t k = 1; k <= K; ++k) {
        const double a = lc(k, r, 2.0), b = lc(k, (r + 1) % L, 2.0);
        const double a2 = lc(k, r, 1.0), b2 = lc(k, (r + 1) % L, 1.0);
        dlog[r * K + k - 1] = std::log(std::abs(b)) - std::log(std::abs(a));
        flip[r * K + k - 1] = (a < 0) != (b < 0);
        dlog2[r * K + k - 1] = 2.0 * (std::log(std::abs(b2)) - std::log(std::abs(a2)));
      }
    cosine.resize(std::size_t{K} * L);
    for (std::uint32_t k = 1; k <= K; ++k)
      for (std::uint32_t x = 0; x < L; ++x) cosine[(k - 1) * L + x] = lc(k, x, 2.0);
  }

  double tv(const std::vector<double>& phi) const {
    double s = 0.0;
    for (std::uint32_t x = 0; x < L; ++x) {
      double v = 0.0;
      for (std::uint32_t k = 0; k < K; ++k) v += phi[k] * cosine[std::size_t{k} * L + x];
      s += std::abs(2.0 * v / L);
    }
    return 0.5 * s;
  }
};

}  // namespace detail

struct cycle_rb_result {
  distance_curve tv;
  // Upper bound on TV^2: (1/2) sum_k E prod_j cos^2(pi k |C_j| / L).
  distance_curve bound;
  // Averaged Fourier coefficients phi_1..phi_K at each grid time.
  std::vector<std::vector<double>> fourier;
};

inline cycle_rb_result rao_blackwell_cycle(std::uint32_t L, double alpha, const time_grid& grid,
                                           std::uint64_t replicas, std::uint64_t seed,
                                           unsigned threads = 0, bool with_bound = true) {
  check_alpha(alpha);
  check_grid(grid);
  if (L < 3 || L % 2 == 0)
    throw unsupported_error("cycle Rao-Blackwell estimator needs odd L >= 3");
  if (replicas < 1) throw parameter_error("replicas must be >= 1");
  const detail::cycle_tables T(L);
  const std::uint32_t K = T.K;
  const batch_plan plan(replicas);
  const std::size_t G = grid.size();
  // sums[b][i][k], bound sums[b][i]
  std::vector<std::vector<double>> phi_sum(plan.batches, std::vector<double>(G * K, 0.0));
  std::vector<std::vector<double>> bound_sum(plan.batches, std::vector<double>(G, 0.0));
  const auto n_max = static_cast<std::uint32_t>(grid.back());

  parallel_for(plan.batches, threads, [&](std::size_t b) {
    std::vector<double> logv(K), log2v(K);
    std::vector<std::uint8_t> neg(K);
    for (std::uint64_t r = plan.begin(b); r < plan.end(b); ++r) {
      auto rng = rng_stream::stream(seed, r);
      growing_forest f(alpha);
      f.reserve(n_max);
      std::fill(logv.begin(), logv.end(), 0.0);
      std::fill(log2v.begin(), log2v.end(), 0.0);
      std::fill(neg.begin(), neg.end(), 0);
      std::size_t next = 0;
      for (std::uint32_t j = 1; j <= n_max; ++j) {
        const auto ev = f.step(rng);
        const std::uint32_t res = (ev.size - 1) % L;
        const double* dl = &T.dlog[std::size_t{res} * K];
        const std::uint8_t* fl = &T.flip[std::size_t{res} * K];
        for (std::uint32_t k = 0; k < K; ++k) {
          logv[k] += dl[k];
          neg[k] ^= fl[k];
        }
        if (with_bound) {
          const double* d2 = &T.dlog2[std::size_t{res} * K];
          for (std::uint32_t k = 0; k < K; ++k) log2v[k] += d2[k];
        }
        if (j == grid[next]) {
          double* acc = &phi_sum[b][next * K];
          for (std::uint32_t k = 0; k < K; ++k) {
            const double v = std::exp(logv[k]);
            acc[k] += neg[k] ? -v : v;
          }
          if (with_bound) {
            double s = 0.0;
            for (std::uint32_t k = 0; k < K; ++k) s += std::exp(log2v[k]);
            bound_sum[b][next] += 0.5 * s;
          }
          ++next;
        }
      }
    }
  });

  cycle_rb_result out;
  out.tv.group = "cyclic(" + std::to_string(L) + ")";
  out.tv.estimator = "rao-blackwell";
  out.tv.alpha = alpha;
  out.tv.replicas = replicas;
  out.tv.seed = seed;
  out.bound = out.tv;
  out.bound.estimator = "fourier-bound";
  std::vector<double> batch_n(plan.batches);
  for (std::size_t b = 0; b < plan.batches; ++b)
    batch_n[b] = static_cast<double>(plan.end(b) - plan.begin(b));
  std::vector<double> phi(K);
  for (std::size_t i = 0; i < G; ++i) {
    std::vector<double> total(K, 0.0);
    double total_bound = 0.0;
    for (std::size_t b = 0; b < plan.batches; ++b) {
      for (std::uint32_t k = 0; k < K; ++k) total[k] += phi_sum[b][i * K + k];
      total_bound += bound_sum[b][i];
    }
    const auto e = jackknife(plan.batches, [&](long skip) {
      double count = static_cast<double>(replicas);
      for (std::uint32_t k = 0; k < K; ++k) phi[k] = total[k];
      if (skip >= 0) {
        count -= batch_n[skip];
        for (std::uint32_t k = 0; k < K; ++k) phi[k] -= phi_sum[skip][i * K + k];
      }
      for (double& v : phi) v /= count;
      return T.tv(phi);
    });
    out.tv.push(grid[i], e.value, e.std_error);
    std::vector<double> mean(K);
    for (std::uint32_t k = 0; k < K; ++k) mean[k] = total[k] / replicas;
    out.fourier.push_back(std::move(mean));
    if (with_bound) {
      const auto eb = jackknife(plan.batches, [&](long skip) {
        double count = static_cast<double>(replicas), s = total_bound;
        if (skip >= 0) {
          count -= batch_n[skip];
          s -= bound_sum[skip][i];
        }
        return s / count;
      });
      out.bound.push(grid[i], eb.value, eb.std_error);
    }
  }
  return out;
}

inline void check_simple_cycle(const step_distribution& mu) {
  const auto& g = mu.group();
  if (g.kind() != group_kind::cyclic || g.order() % 2 == 0 || g.order() < 3)
    throw unsupported_error("Rao-Blackwell cycle estimator needs odd L >= 3");
  if (mu.support_size() != 2 || std::abs(mu(1) - 0.5) > probability_tolerance ||
      std::abs(mu(g.inverse(1)) - 0.5) > probability_tolerance)
    throw unsupported_error("Rao-Blackwell cycle estimator needs mu(+1) = mu(-1) = 1/2");
}

// Averaged conditional law of S_n over R forests.
inline std::vector<double> rao_blackwell_cycle_distribution(const step_distribution& mu,
                                                            double alpha, std::uint32_t n,
                                                            std::uint64_t replicas,
                                                            std::uint64_t seed,
                                                            unsigned threads = 0) {
  check_simple_cycle(mu);
  const auto L = static_cast<std::uint32_t>(mu.group().order());
  const auto r = rao_blackwell_cycle(L, alpha, {n}, replicas, seed, threads, false);
  return cycle_law_from_fourier(L, r.fourier.front());
}

// Hypercube semi-exact estimator.

// Law of the Hamming weight after m lazy steps from 0 on Z_2^d.
class ehrenfest_chain {
 public:
  explicit ehrenfest_chain(std::uint32_t d) : d_(d), q_(d + 1, 0.0), next_(d + 1) {
    if (d < 1) throw parameter_error("Ehrenfest chain needs d >= 1");
    q_[0] = 1.0;
  }
  void step() {
    const double inv = 1.0 / (2.0 * d_);
    std::fill(next_.begin(), next_.end(), 0.0);
    for (std::uint32_t w = 0; w <= d_; ++w) {
      const double p = q_[w];
      if (p == 0.0) continue;
      next_[w] += 0.5 * p;
      if (w < d_) next_[w + 1] += p * (d_ - w) * inv;
      if (w > 0) next_[w - 1] += p * w * inv;
    }
    q_.swap(next_);
    ++steps_;
  }
  const std::vector<double>& law() const noexcept { return q_; }
  std::uint64_t steps() const noexcept { return steps_; }

 private:
  std::uint32_t d_;
  std::vector<double> q_, next_;
  std::uint64_t steps_ = 0;
};

inline std::vector<double> hypercube_weight_chain(std::uint32_t d, std::uint64_t m) {
  ehrenfest_chain c(d);
  for (std::uint64_t i = 0; i < m; ++i) c.step();
  return c.law();
}

inline std::vector<double> binomial_half(std::uint32_t d) {
  std::vector<double> b(d + 1);
  for (std::uint32_t w = 0; w <= d; ++w)
    b[w] = std::exp(std::lgamma(d + 1.0) - std::lgamma(w + 1.0) - std::lgamma(d - w + 1.0) -
                    d * std::numbers::ln2);
  return b;
}

// TV over Z_2^d of a law that depends on x only through W(x), given its weight marginal.
inline double weight_marginal_tv(const std::vector<double>& weights) {
  const auto d = static_cast<std::uint32_t>(weights.size() - 1);
  return tv_distance(weights, binomial_half(d));
}

// P(S_n = x) = p_w / C(d, w) for W(x) = w; d <= 20.
inline std::vector<double> hypercube_law_from_weights(const std::vector<double>& weights) {
  const auto d = static_cast<std::uint32_t>(weights.size() - 1);
  if (d > 20) throw capacity_error("dense hypercube law needs d <= 20");
  const auto b = binomial_half(d);
  std::vector<double> p(std::size_t{1} << d);
  for (std::size_t x = 0; x < p.size(); ++x) {
    const auto w = static_cast<std::uint32_t>(std::popcount(x));
    p[x] = weights[w] / (b[w] * std::ldexp(1.0, static_cast<int>(d)));
  }
  return p;
}

inline constexpr std::uint32_t hypercube_max_d = 1024;

// Samples N_J(n) at every grid time over R forests and averages the Ehrenfest laws.
inline distance_curve hypercube_tv_estimate(std::uint32_t d, double alpha, const time_grid& grid,
                                            std::uint64_t replicas, std::uint64_t seed,
                                            unsigned threads = 0) {
  check_alpha(alpha);
  check_grid(grid);
  if (d < 1 || d > hypercube_max_d) throw size_error("hypercube estimator needs 1 <= d <= 1024");
  if (replicas < 1) throw parameter_error("replicas must be >= 1");
  const batch_plan plan(replicas);
  const std::size_t G = grid.size();
  const auto n_max = static_cast<std::uint32_t>(grid.back());
  // odd[r * G + i] = N_J(grid[i]) for replica r.
  std::vector<std::uint32_t> odd(replicas * G);
  parallel_for(plan.batches, threads, [&](std::size_t b) {
    for (std::uint64_t r = plan.begin(b); r < plan.end(b); ++r) {
      auto rng = rng_stream::stream(seed, r);
      growing_forest f(alpha);
      f.reserve(n_max);
      std::size_t next = 0;
      for (std::uint32_t j = 1; j <= n_max; ++j) {
        f.step(rng);
        if (j == grid[next]) odd[r * G + next++] = static_cast<std::uint32_t>(f.odd_clusters());
      }
    }
  });

  // (m, grid index, batch) with multiplicity, swept in increasing m.
  std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> keys;
  keys.reserve(replicas * G);
  for (std::size_t b = 0; b < plan.batches; ++b)
    for (std::uint64_t r = plan.begin(b); r < plan.end(b); ++r)
      for (std::size_t i = 0; i < G; ++i)
        keys.emplace_back(odd[r * G + i], static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(b));
  std::sort(keys.begin(), keys.end());

  // acc[(i * B + b) * (d+1) + w]
  const std::size_t B = plan.batches, W = d + 1;
  std::vector<double> acc(G * B * W, 0.0);
  ehrenfest_chain chain(d);
  for (std::size_t a = 0; a < keys.size();) {
    const auto [m, i, b] = keys[a];
    std::size_t e = a;
    while (e < keys.size() && keys[e] == keys[a]) ++e;
    while (chain.steps() < m) chain.step();
    const double mult = static_cast<double>(e - a);
    double* dst = &acc[(std::size_t{i} * B + b) * W];
    const auto& q = chain.law();
    for (std::size_t w = 0; w < W; ++w) dst[w] += mult * q[w];
    a = e;
  }

  distance_curve c;
  c.group = "hypercube(" + std::to_string(d) + ")";
  c.estimator = "hypercube-semi-exact";
  c.alpha = alpha;
  c.replicas = replicas;
  c.seed = seed;
  const auto binom = binomial_half(d);
  std::vector<double> batch_n(B);
  for (std::size_t b = 0; b < B; ++b) batch_n[b] = static_cast<double>(plan.end(b) - plan.begin(b));
  std::vector<double> total(W), p(W);
  for (std::size_t i = 0; i < G; ++i) {
    std::fill(total.begin(), total.end(), 0.0);
    for (std::size_t b = 0; b < B; ++b)
      for (std::size_t w = 0; w < W; ++w) total[w] += acc[(i * B + b) * W + w];
    const auto e = jackknife(B, [&](long skip) {
      double count = static_cast<double>(replicas);
      p = total;
      if (skip >= 0) {
        count -= batch_n[skip];
        for (std::size_t w = 0; w < W; ++w) p[w] -= acc[(i * B + skip) * W + w];
      }
      double s = 0.0;
      for (std::size_t w = 0; w < W; ++w) s += std::abs(p[w] / count - binom[w]);
      return 0.5 * s;
    });
    c.push(grid[i], e.value, e.std_error);
  }
  return c;
}

}  // namespace srrw
