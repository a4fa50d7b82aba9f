#pragma once

// Percolated random recursive trees.
//
// Vertex j >= 2 attaches to a uniform earlier vertex u_j; the edge is kept with
// probability alpha (xi_j = 1) and deleted otherwise. Clusters are identified by
// their root, the smallest label, so L(j) = j when xi_j = 0 and L(j) = L(u_j)
// otherwise. Labels are 1-based throughout; arrays are indexed by j - 1.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "srrw/error.hpp"
#include "srrw/rng.hpp"

namespace srrw {

struct forest_path {
  std::uint32_t n = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::uint8_t> xi;       // xi[j-1]; xi[0] = 0
  std::vector<std::uint32_t> parent;  // u_j at [j-1]; parent[0] = 0
  std::vector<std::uint32_t> root;    // L(j) at [j-1]

  std::uint32_t label(std::uint32_t j) const { return root[j - 1]; }

  // Cluster sizes keyed by root, in increasing root order.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> clusters() const {
    std::vector<std::uint32_t> size(n + 1, 0);
    for (std::uint32_t j = 1; j <= n; ++j) ++size[root[j - 1]];
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (std::uint32_t j = 1; j <= n; ++j)
      if (size[j] > 0) out.emplace_back(j, size[j]);
    return out;
  }

  // First t vertices. The root recursion only looks backwards, so this is exact.
  forest_path prefix(std::uint32_t t) const {
    if (t < 1 || t > n) throw parameter_error("prefix length out of range");
    forest_path p;
    p.n = t;
    p.alpha = alpha;
    p.seed = seed;
    p.xi.assign(xi.begin(), xi.begin() + t);
    p.parent.assign(parent.begin(), parent.begin() + t);
    p.root.assign(root.begin(), root.begin() + t);
    return p;
  }
};

// A forest grown one vertex at a time, with cluster sizes and the isolated and
// odd-size cluster counts kept current. pop() undoes the last push.
class growing_forest {
 public:
  struct event {
    std::uint32_t vertex = 0;
    std::uint32_t root = 0;
    std::uint32_t size = 0;  // size of root's cluster after the step
    bool fresh = false;      // a new cluster was started
  };

  explicit growing_forest(double alpha) : alpha_(alpha) { check_alpha(alpha); }

  void reserve(std::size_t n) {
    xi_.reserve(n);
    parent_.reserve(n);
    root_.reserve(n);
    size_.reserve(n);
  }

  // Draws xi_j then u_j. The first vertex consumes no randomness.
  event step(rng_stream& rng) {
    const auto j = static_cast<std::uint32_t>(root_.size() + 1);
    if (j == 1) return push(false, 0);
    const bool keep = rng.bernoulli(alpha_);
    const std::uint32_t u = 1 + rng.bounded(j - 1);
    return push(keep, u);
  }

  // Appends vertex j with the given choices; u is ignored for j = 1.
  event push(bool keep, std::uint32_t u) {
    const auto j = static_cast<std::uint32_t>(root_.size() + 1);
    if (j == 1) {
      keep = false;
      u = 0;
    } else if (u < 1 || u >= j) {
      throw parameter_error("parent choice u_j must lie in [1, j-1]");
    }
    xi_.push_back(keep ? 1 : 0);
    parent_.push_back(u);
    size_.push_back(0);
    if (!keep) {
      root_.push_back(j);
      size_[j - 1] = 1;
      ++clusters_;
      ++isolated_;
      ++odd_;
      return {j, j, 1, true};
    }
    const std::uint32_t r = root_[u - 1];
    root_.push_back(r);
    const std::uint32_t s = ++size_[r - 1];
    if (s == 2) --isolated_;
    odd_ += (s & 1u) ? 1 : -1;
    return {j, r, s, false};
  }

  void pop() {
    if (root_.empty()) throw contract_error("pop on an empty forest");
    const auto j = static_cast<std::uint32_t>(root_.size());
    const std::uint32_t r = root_.back();
    if (r == j) {
      --clusters_;
      --isolated_;
      --odd_;
    } else {
      const std::uint32_t s = size_[r - 1]--;
      if (s == 2) ++isolated_;
      odd_ += (s & 1u) ? -1 : 1;
    }
    xi_.pop_back();
    parent_.pop_back();
    root_.pop_back();
    size_.pop_back();
  }

  std::uint32_t n() const noexcept { return static_cast<std::uint32_t>(root_.size()); }
  double alpha() const noexcept { return alpha_; }
  std::uint32_t root_of(std::uint32_t j) const { return root_[j - 1]; }
  std::uint32_t cluster_size(std::uint32_t root) const { return size_[root - 1]; }
  std::uint64_t clusters() const noexcept { return clusters_; }
  std::uint64_t isolated() const noexcept { return isolated_; }
  // Number of clusters of odd size, N_J(n) for J the odd integers.
  std::uint64_t odd_clusters() const noexcept { return static_cast<std::uint64_t>(odd_); }

  forest_path snapshot(std::uint64_t seed = 0) const {
    forest_path p;
    p.n = n();
    p.alpha = alpha_;
    p.seed = seed;
    p.xi = xi_;
    p.parent = parent_;
    p.root = root_;
    return p;
  }

 private:
  double alpha_;
  std::vector<std::uint8_t> xi_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> root_;
  std::vector<std::uint32_t> size_;  // by root label; 0 for non-roots
  std::uint64_t clusters_ = 0;
  std::uint64_t isolated_ = 0;
  std::int64_t odd_ = 0;
};

inline forest_path grow_forest(std::uint32_t n, double alpha, rng_stream& rng,
                               std::uint64_t seed = 0) {
  if (n < 1) throw parameter_error("forest length must be >= 1");
  growing_forest f(alpha);
  f.reserve(n);
  for (std::uint32_t j = 1; j <= n; ++j) f.step(rng);
  return f.snapshot(seed);
}

// Builds a forest from explicit choices, indexed by j - 1 (entries for j = 1 are ignored).
inline forest_path forest_from_choices(const std::vector<std::uint8_t>& xi,
                                       const std::vector<std::uint32_t>& u, double alpha = 0.5) {
  if (xi.size() != u.size() || xi.empty())
    throw parameter_error("xi and u must have the same nonzero length");
  growing_forest f(alpha);
  for (std::size_t i = 0; i < xi.size(); ++i) f.push(i > 0 && xi[i] != 0, i > 0 ? u[i] : 0);
  return f.snapshot();
}

// Statistics.

struct cluster_options {
  std::uint32_t block_length = 0;  // m for the block count; 0 skips it
  std::vector<std::pair<double, std::uint32_t>> windows;  // (L, k) pairs
  std::vector<std::uint32_t> index_set;  // J for N_J; empty means odd integers only
};

struct window_count {
  double L = 0;
  std::uint32_t k = 0;
  std::uint64_t count = 0;  // #{roots : L/(96k) <= |C| < L/(2k)}
};

struct cluster_stats {
  std::uint32_t n = 0;
  double alpha = 0.0;
  std::map<std::uint32_t, std::uint64_t> size_counts;  // k -> N_k(n)
  std::uint64_t clusters = 0;
  std::uint64_t isolated = 0;       // I(n) = N_1(n)
  std::uint64_t odd_clusters = 0;   // N_J for J the odd integers
  std::uint64_t index_set_count = 0;  // N_J for the requested J
  std::uint64_t block_isolated = 0;   // I^(m)(floor(n/m) m)
  std::vector<window_count> windows;
  double y = 0.0;  // I(n)/n - (1-alpha)/(1+alpha)

  std::uint64_t N(std::uint32_t k) const {
    const auto it = size_counts.find(k);
    return it == size_counts.end() ? 0 : it->second;
  }
};

inline cluster_stats cluster_statistics(const forest_path& f, const cluster_options& opt = {}) {
  cluster_stats s;
  s.n = f.n;
  s.alpha = f.alpha;
  std::vector<std::uint32_t> size(f.n + 1, 0);
  for (std::uint32_t j = 1; j <= f.n; ++j) ++size[f.root[j - 1]];
  std::vector<std::uint8_t> in_j;
  if (!opt.index_set.empty()) {
    in_j.assign(f.n + 1, 0);
    for (std::uint32_t k : opt.index_set)
      if (k >= 1 && k <= f.n) in_j[k] = 1;
  }
  for (std::uint32_t j = 1; j <= f.n; ++j) {
    const std::uint32_t c = size[j];
    if (c == 0) continue;
    ++s.size_counts[c];
    ++s.clusters;
    if (c & 1u) ++s.odd_clusters;
    if (!in_j.empty() && in_j[c]) ++s.index_set_count;
  }
  if (in_j.empty()) s.index_set_count = s.odd_clusters;
  s.isolated = s.N(1);
  for (const auto& [L, k] : opt.windows) {
    window_count w{L, k, 0};
    const double lo = L / (96.0 * k), hi = L / (2.0 * k);
    for (const auto& [c, count] : s.size_counts)
      if (c >= lo && c < hi) w.count += count;
    s.windows.push_back(w);
  }
  if (opt.block_length > 0) {
    const std::uint32_t m = opt.block_length;
    for (std::uint32_t b = 0; b + m <= f.n; b += m) {
      bool all = true;
      for (std::uint32_t j = b + 1; j <= b + m && all; ++j) all = size[f.root[j - 1]] == 1;
      s.block_isolated += all;
    }
  }
  s.y = static_cast<double>(s.isolated) / f.n - (1.0 - f.alpha) / (1.0 + f.alpha);
  return s;
}

}  // namespace srrw
