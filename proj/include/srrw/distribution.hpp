#pragma once

// Step distributions mu on a finite group, the kernel P_mu(x,y) = mu(x^-1 y),
// and the structural predicates on mu and its support Gamma.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "srrw/error.hpp"
#include "srrw/group.hpp"
#include "srrw/rng.hpp"

namespace srrw {

inline constexpr double probability_tolerance = 1e-12;
inline constexpr std::uint64_t dense_distribution_limit = std::uint64_t{1} << 20;

class step_distribution {
 public:
  using entry = std::pair<element_t, double>;

  // Entries may repeat (masses add). Zero entries are dropped; the total must be
  // within 1e-9 of 1 and is then renormalized exactly.
  step_distribution(finite_group group, std::vector<entry> entries) : group_(std::move(group)) {
    std::map<element_t, double> acc;
    for (const auto& [x, p] : entries) {
      if (x >= group_.order()) throw parameter_error("step distribution: element out of range");
      if (!std::isfinite(p) || p < 0.0)
        throw parameter_error("step distribution: probabilities must be finite and >= 0");
      acc[x] += p;
    }
    double total = 0.0;
    for (const auto& [x, p] : acc) total += p;
    if (std::abs(total - 1.0) > 1e-9)
      throw parameter_error("step distribution: probabilities sum to " + std::to_string(total));
    for (const auto& [x, p] : acc)
      if (p > 0.0) support_.emplace_back(x, p / total);
    if (support_.empty()) throw parameter_error("step distribution: empty support");
    cumulative_.reserve(support_.size());
    double run = 0.0;
    for (const auto& [x, p] : support_) cumulative_.push_back(run += p);
    cumulative_.back() = 1.0;
    if (group_.order() <= dense_distribution_limit) {
      dense_.assign(group_.order(), 0.0);
      for (const auto& [x, p] : support_) dense_[x] = p;
    }
  }

  static step_distribution from_dense(finite_group group, const std::vector<double>& p) {
    if (p.size() != group.order()) throw parameter_error("dense distribution has wrong length");
    std::vector<entry> e;
    for (element_t x = 0; x < p.size(); ++x)
      if (p[x] != 0.0) e.emplace_back(x, p[x]);
    return step_distribution(std::move(group), std::move(e));
  }

  // Keys in the group's canonical notation.
  static step_distribution from_notation(finite_group group,
                                         const std::vector<std::pair<std::string, double>>& p) {
    std::vector<entry> e;
    for (const auto& [key, value] : p) e.emplace_back(group.parse(key), value);
    return step_distribution(std::move(group), std::move(e));
  }

  const finite_group& group() const noexcept { return group_; }
  const std::vector<entry>& support() const noexcept { return support_; }
  std::size_t support_size() const noexcept { return support_.size(); }

  double operator()(element_t x) const {
    if (!dense_.empty()) return dense_[x];
    auto it = std::lower_bound(support_.begin(), support_.end(), x,
                               [](const entry& a, element_t b) { return a.first < b; });
    return (it != support_.end() && it->first == x) ? it->second : 0.0;
  }
  bool in_support(element_t x) const { return (*this)(x) > 0.0; }

  std::vector<element_t> gamma() const {
    std::vector<element_t> g;
    g.reserve(support_.size());
    for (const auto& [x, p] : support_) g.push_back(x);
    return g;
  }

  std::vector<double> dense() const {
    if (!dense_.empty()) return dense_;
    if (group_.order() > dense_distribution_limit)
      throw capacity_error("dense vector over a group of order " + std::to_string(group_.order()));
    std::vector<double> d(group_.order(), 0.0);
    for (const auto& [x, p] : support_) d[x] = p;
    return d;
  }

  element_t sample(rng_stream& rng) const {
    if (support_.size() == 1) return support_.front().first;
    const double u = rng.uniform01();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto i = std::min<std::size_t>(it - cumulative_.begin(), support_.size() - 1);
    return support_[i].first;
  }

 private:
  finite_group group_;
  std::vector<entry> support_;  // sorted by element
  std::vector<double> cumulative_;
  std::vector<double> dense_;
};

// Presets.

// mu(+1) = mu(-1) = 1/2 on Z_L.
inline step_distribution simple_cycle_step(const finite_group& g) {
  if (g.kind() != group_kind::cyclic) throw parameter_error("simple cycle step needs a cyclic group");
  return step_distribution(g, {{1, 0.5}, {g.inverse(1), 0.5}});
}

// mu(0) = 1/2, mu(+1) = mu(-1) = 1/4 on Z_L.
inline step_distribution lazy_cycle_step(const finite_group& g) {
  if (g.kind() != group_kind::cyclic) throw parameter_error("lazy cycle step needs a cyclic group");
  return step_distribution(g, {{0, 0.5}, {1, 0.25}, {g.inverse(1), 0.25}});
}

// mu(0) = 1/2, mu(e_k) = 1/(2d) on Z_2^d.
inline step_distribution lazy_hypercube_step(const finite_group& g) {
  if (g.kind() != group_kind::hypercube)
    throw parameter_error("lazy hypercube step needs a hypercube group");
  std::vector<step_distribution::entry> e{{0, 0.5}};
  const unsigned d = g.parameter();
  for (unsigned k = 0; k < d; ++k) e.emplace_back(element_t{1} << k, 0.5 / d);
  return step_distribution(g, std::move(e));
}

// mu(e) = 1/2, mu(toggle) = 1/4, mu(move +-1) = 1/8 each.
inline step_distribution lamplighter_lazy_step(const finite_group& g) {
  if (g.kind() != group_kind::lamplighter)
    throw parameter_error("lamplighter step needs a lamplighter group");
  const unsigned L = g.parameter();
  const element_t toggle = g.lamplighter_encode(1u, 0);
  const element_t right = g.lamplighter_encode(0u, 1);
  const element_t left = g.lamplighter_encode(0u, L - 1);
  return step_distribution(g, {{0, 0.5}, {toggle, 0.25}, {right, 0.125}, {left, 0.125}});
}

inline step_distribution uniform_step(const finite_group& g) {
  if (g.order() > dense_distribution_limit) throw capacity_error("uniform step on a huge group");
  std::vector<step_distribution::entry> e;
  const double p = 1.0 / static_cast<double>(g.order());
  for (element_t x = 0; x < g.order(); ++x) e.emplace_back(x, p);
  return step_distribution(g, std::move(e));
}

// Uniform on the given elements.
inline step_distribution uniform_on(const finite_group& g, const std::vector<element_t>& set) {
  std::vector<step_distribution::entry> e;
  for (element_t x : set) e.emplace_back(x, 1.0 / static_cast<double>(set.size()));
  return step_distribution(g, std::move(e));
}

// Kernels and one-step updates.

inline constexpr std::uint64_t matrix_limit = 4096;

inline Eigen::MatrixXd transition_matrix(const step_distribution& mu) {
  const auto& g = mu.group();
  if (g.order() > matrix_limit)
    throw capacity_error("transition matrix needs |G| <= 4096, got " + std::to_string(g.order()));
  const auto n = static_cast<Eigen::Index>(g.order());
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (element_t x = 0; x < g.order(); ++x)
    for (const auto& [s, p] : mu.support()) P(x, g.multiply(x, s)) += p;
  return P;
}

// Row vector times P_mu: q(x s) += p(x) mu(s).
inline std::vector<double> apply_step(const std::vector<double>& p, const step_distribution& mu) {
  const auto& g = mu.group();
  std::vector<double> q(p.size(), 0.0);
  for (element_t x = 0; x < p.size(); ++x) {
    if (p[x] == 0.0) continue;
    for (const auto& [s, w] : mu.support()) q[g.multiply(x, s)] += p[x] * w;
  }
  return q;
}

// Row vector times the permutation matrix of right multiplication by s.
inline std::vector<double> apply_deterministic(const std::vector<double>& p, const finite_group& g,
                                               element_t s) {
  std::vector<double> q(p.size());
  for (element_t x = 0; x < p.size(); ++x) q[g.multiply(x, s)] = p[x];
  return q;
}

inline std::vector<double> delta(const finite_group& g, element_t x) {
  std::vector<double> p(g.order(), 0.0);
  p[x] = 1.0;
  return p;
}

// Reversed kernel P*(x,y) = P(y,x). Row-stochastic again because P is doubly stochastic.
inline Eigen::MatrixXd reversed_kernel(const Eigen::MatrixXd& P) { return P.transpose(); }

// Subgroups.

inline constexpr std::uint64_t closure_limit = std::uint64_t{1} << 24;

// Elements of the subgroup generated by `gens`, sorted.
inline std::vector<element_t> generated_subgroup(const finite_group& g,
                                                 const std::vector<element_t>& gens) {
  if (g.order() > closure_limit) throw capacity_error("subgroup closure on a group above 2^24");
  std::vector<bool> in(g.order(), false);
  std::vector<element_t> members{g.identity()};
  in[g.identity()] = true;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (element_t s : gens) {
      const element_t y = g.multiply(members[i], s);
      if (!in[y]) {
        in[y] = true;
        members.push_back(y);
      }
    }
  }
  std::sort(members.begin(), members.end());
  return members;
}

// Order of the subgroup generated by `gens`; arithmetic shortcuts for Z_L and Z_2^d.
inline std::uint64_t subgroup_order(const finite_group& g, const std::vector<element_t>& gens) {
  if (g.kind() == group_kind::cyclic) {
    std::uint64_t h = g.order();
    for (element_t s : gens) h = std::gcd(h, std::uint64_t{s});
    return g.order() / h;
  }
  if (g.kind() == group_kind::hypercube) {
    // Rank of the span over GF(2).
    std::vector<element_t> basis;
    for (element_t v : gens) {
      for (element_t b : basis) v = std::min(v, v ^ b);
      if (v != 0) {
        basis.push_back(v);
        std::sort(basis.rbegin(), basis.rend());
      }
    }
    return std::uint64_t{1} << basis.size();
  }
  return generated_subgroup(g, gens).size();
}

// Gamma * Gamma^-1 and Gamma^-1 * Gamma as element lists (duplicates removed).
inline std::vector<element_t> gamma_gamma_inverse(const finite_group& g,
                                                  const std::vector<element_t>& gamma) {
  std::vector<element_t> out;
  for (element_t a : gamma)
    for (element_t b : gamma) out.push_back(g.multiply(a, g.inverse(b)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<element_t> gamma_inverse_gamma(const finite_group& g,
                                                  const std::vector<element_t>& gamma) {
  std::vector<element_t> out;
  for (element_t a : gamma)
    for (element_t b : gamma) out.push_back(g.multiply(g.inverse(a), b));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Conjugacy classes as orbits of x -> s^-1 x s over the generators. Each class is
// sorted; classes are ordered by their smallest element.
inline std::vector<std::vector<element_t>> conjugacy_classes(const finite_group& g) {
  if (g.order() > 10000) throw capacity_error("conjugacy classes need |G| <= 10^4");
  const auto n = static_cast<element_t>(g.order());
  std::vector<std::vector<element_t>> classes;
  if (g.is_abelian()) {
    for (element_t x = 0; x < n; ++x) classes.push_back({x});
    return classes;
  }
  const auto gens = g.generators();
  std::vector<bool> seen(n, false);
  for (element_t x = 0; x < n; ++x) {
    if (seen[x]) continue;
    std::vector<element_t> orbit{x};
    seen[x] = true;
    for (std::size_t i = 0; i < orbit.size(); ++i) {
      for (element_t s : gens) {
        const element_t y = g.multiply(g.multiply(g.inverse(s), orbit[i]), s);
        if (!seen[y]) {
          seen[y] = true;
          orbit.push_back(y);
        }
      }
    }
    std::sort(orbit.begin(), orbit.end());
    classes.push_back(std::move(orbit));
  }
  return classes;
}

struct predicate_report {
  bool symmetric = false;       // mu(g) = mu(g^-1)
  bool class_function = false;  // mu(s^-1 x s) = mu(x)
  bool lazy_atom = false;       // mu(e) > 0
  bool generates = false;       // <Gamma> = G
  bool gamma_gamma_inv_generates = false;
  bool gamma_inv_gamma_generates = false;
  bool case_symmetric_support = false;  // Gamma = Gamma^-1
  bool case_union_of_classes = false;   // Gamma closed under conjugation
  bool case_identity_in_support = false;
};

inline bool is_symmetric(const step_distribution& mu) {
  const auto& g = mu.group();
  for (const auto& [x, p] : mu.support())
    if (std::abs(mu(g.inverse(x)) - p) > probability_tolerance) return false;
  return true;
}

inline bool is_class_function(const step_distribution& mu) {
  const auto& g = mu.group();
  if (g.is_abelian()) return true;
  const auto gens = g.generators();
  for (const auto& [x, p] : mu.support())
    for (element_t s : gens)
      if (std::abs(mu(g.multiply(g.multiply(g.inverse(s), x), s)) - p) > probability_tolerance)
        return false;
  return true;
}

inline bool support_is_symmetric(const step_distribution& mu) {
  for (const auto& [x, p] : mu.support())
    if (!mu.in_support(mu.group().inverse(x))) return false;
  return true;
}

inline bool support_is_union_of_classes(const step_distribution& mu) {
  const auto& g = mu.group();
  if (g.is_abelian()) return true;
  const auto gens = g.generators();
  for (const auto& [x, p] : mu.support())
    for (element_t s : gens)
      if (!mu.in_support(g.multiply(g.multiply(g.inverse(s), x), s))) return false;
  return true;
}

inline predicate_report distribution_predicates(const step_distribution& mu) {
  const auto& g = mu.group();
  const auto gamma = mu.gamma();
  predicate_report r;
  r.symmetric = is_symmetric(mu);
  r.class_function = is_class_function(mu);
  r.lazy_atom = mu(g.identity()) > 0.0;
  r.generates = subgroup_order(g, gamma) == g.order();
  r.gamma_gamma_inv_generates = subgroup_order(g, gamma_gamma_inverse(g, gamma)) == g.order();
  r.gamma_inv_gamma_generates = subgroup_order(g, gamma_inverse_gamma(g, gamma)) == g.order();
  r.case_symmetric_support = support_is_symmetric(mu);
  r.case_union_of_classes = support_is_union_of_classes(mu);
  r.case_identity_in_support = r.lazy_atom;
  return r;
}

// Irreducibility and aperiodicity.

struct irreducibility_certificate_t {
  std::uint64_t m_star = 0;  // least m with P^m entrywise positive
  double epsilon_star = 0.0;  // min entry of P^m_star
};

namespace detail {

// Brent cycle detection on a deterministic set-valued iteration. `advance`
// replaces its argument with the next set; `full` tests the target state.
template <class State, class Advance, class Full>
std::uint64_t first_full_power(State s, Advance advance, Full full, std::uint64_t bound) {
  State saved = s;
  std::uint64_t power = 1, lambda = 0;
  for (std::uint64_t m = 1; m <= bound; ++m) {
    if (full(s)) return m;
    advance(s);
    ++lambda;
    if (s == saved) return 0;  // cycling without ever becoming full
    if (lambda == power) {
      saved = s;
      power *= 2;
      lambda = 0;
    }
  }
  return 0;
}

}  // namespace detail

// Least m with supp(mu^{*m}) = G, then eps = min mu^{*m}. P^m(x,y) = mu^{*m}(x^-1 y),
// so this equals the matrix statement for every row at once.
inline irreducibility_certificate_t irreducibility_certificate(const step_distribution& mu) {
  const auto& g = mu.group();
  if (g.order() > dense_distribution_limit)
    throw capacity_error("irreducibility certificate needs |G| <= 2^20");
  const auto n = g.order();
  const auto gamma = mu.gamma();
  std::vector<std::uint8_t> start(n, 0);
  for (element_t s : gamma) start[s] = 1;
  auto advance = [&](std::vector<std::uint8_t>& set) {
    std::vector<std::uint8_t> next(n, 0);
    for (element_t x = 0; x < n; ++x)
      if (set[x])
        for (element_t s : gamma) next[g.multiply(x, s)] = 1;
    set.swap(next);
  };
  auto full = [](const std::vector<std::uint8_t>& set) {
    return std::all_of(set.begin(), set.end(), [](std::uint8_t b) { return b != 0; });
  };
  const std::uint64_t bound = n * n;
  const std::uint64_t m = detail::first_full_power(start, advance, full, bound);
  if (m == 0) throw reducible_error("P_mu is not irreducible and aperiodic");
  std::vector<double> p = mu.dense();
  for (std::uint64_t k = 1; k < m; ++k) p = apply_step(p, mu);
  return {m, *std::min_element(p.begin(), p.end())};
}

// Same certificate from an explicit stochastic matrix.
inline irreducibility_certificate_t irreducibility_certificate(const Eigen::MatrixXd& P) {
  const auto n = static_cast<std::uint64_t>(P.rows());
  if (P.rows() != P.cols() || n == 0) throw parameter_error("square matrix required");
  using pattern = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;
  const pattern base = (P.array() > 0.0).cast<std::uint8_t>();
  auto advance = [&](pattern& s) {
    const Eigen::MatrixXd prod = s.cast<double>() * base.cast<double>();
    s = (prod.array() > 0.0).cast<std::uint8_t>();
  };
  auto full = [](const pattern& s) { return (s.array() != 0).all(); };
  const std::uint64_t m = detail::first_full_power(base, advance, full, n * n);
  if (m == 0) throw reducible_error("matrix is not irreducible and aperiodic");
  Eigen::MatrixXd Q = P;
  for (std::uint64_t k = 1; k < m; ++k) Q = Q * P;
  return {m, Q.minCoeff()};
}

}  // namespace srrw
