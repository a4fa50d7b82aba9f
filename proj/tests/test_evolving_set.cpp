#include <gtest/gtest.h>

#include <cmath>

#include <srrw/evolving_set.hpp>

using namespace srrw;

namespace {

// E sqrt(|W'|) by a midpoint rule over u; exact up to breakpoints hit by the grid.
double sqrt_size_by_quadrature(const finite_group& g, const subset& w, const set_kernel& k) {
  const int N = 200000;
  double s = 0;
  for (int i = 0; i < N; ++i) s += std::sqrt(double(subset_size(evolving_step(g, w, k, (i + 0.5) / N))));
  return s / N;
}

std::vector<step_distribution> battery() {
  const auto s3 = make_symmetric(3);
  std::vector<step_distribution> out;
  out.push_back(simple_cycle_step(make_cyclic(5)));
  out.push_back(lazy_cycle_step(make_cyclic(8)));
  out.push_back(lazy_hypercube_step(make_hypercube(3)));
  out.push_back(uniform_on(s3, {s3.parse("(12)"), s3.parse("(132)")}));
  out.push_back(lamplighter_lazy_step(make_lamplighter(2)));
  out.push_back(step_distribution(make_cyclic(7), {{0, 0.2}, {1, 0.5}, {3, 0.3}}));
  return out;
}

}  // namespace

TEST(EvolvingSet, LazyTwoPointValues) {
  const auto mu = lazy_cycle_step(make_cyclic(2));
  const subset w = {1, 0};
  EXPECT_NEAR(root_profile_psi_exact(mu, w), 1 - std::sqrt(2.0) / 2, 1e-15);
  EXPECT_NEAR(bottleneck_ratio(mu, w), 0.5, 1e-15);
  const auto seg = step_segments(threshold_values(mu.group(), w, set_kernel::markov(mu)));
  ASSERT_EQ(seg.size(), 2u);
  EXPECT_EQ(seg[0].size, 0u);
  EXPECT_EQ(seg[1].size, 2u);
  EXPECT_DOUBLE_EQ(seg[1].probability(), 0.5);
}

TEST(EvolvingSet, StepRules) {
  const auto g = make_cyclic(6);
  const subset w = {1, 1, 0, 0, 0, 0};
  EXPECT_EQ(evolving_step(g, w, set_kernel::deterministic(2), 0.3), (subset{0, 0, 1, 1, 0, 0}));
  EXPECT_EQ(evolving_step(g, w, set_kernel::deterministic(2), 0.999), (subset{0, 0, 1, 1, 0, 0}));
  const auto mu = simple_cycle_step(g);
  EXPECT_EQ(evolving_step(g, w, set_kernel::markov(mu), 0.4), (subset{1, 1, 1, 0, 0, 1}));
  EXPECT_EQ(evolving_step(g, w, set_kernel::markov(mu), 0.6), (subset{0, 0, 0, 0, 0, 0}));
  EXPECT_THROW(evolving_step(g, w, set_kernel::markov(mu), 1.0), parameter_error);
  EXPECT_THROW(root_profile_psi_exact(mu, subset(6, 0)), domain_error);
}

TEST(EvolvingSet, SegmentsMatchQuadrature) {
  rng_stream rng(4);
  for (const auto& mu : battery()) {
    const auto& g = mu.group();
    for (int rep = 0; rep < 3; ++rep) {
      subset w(g.order(), 0);
      for (auto& b : w) b = rng.bernoulli(0.5);
      if (subset_size(w) == 0) w[0] = 1;
      const auto k = set_kernel::markov(mu);
      const double exact = expected_sqrt_size(threshold_values(g, w, k));
      EXPECT_NEAR(exact, sqrt_size_by_quadrature(g, w, k), 1e-4) << g.describe();
      double total = 0;
      for (const auto& [m, p] : step_law(g, mask_from_subset(w), k)) total += p;
      EXPECT_NEAR(total, 1.0, 1e-14);
    }
  }
}

TEST(EvolvingSet, MartingaleDoobAndDuality) {
  for (const auto& mu : battery()) {
    const auto r = evolving_set_checks(mu.group(), set_kernel::markov(mu), 3);
    EXPECT_LT(r.max_martingale_error, 1e-12) << mu.group().describe();
    EXPECT_LT(r.max_doob_error, 1e-12);
    EXPECT_LT(r.max_duality_error, 1e-12);
    EXPECT_EQ(r.sets_checked, std::uint64_t{1} << mu.group().order());
  }
  const auto g = make_symmetric(3);
  const auto r = evolving_set_checks(g, set_kernel::deterministic(g.parse("(123)")), 2);
  EXPECT_EQ(r.max_martingale_error, 0.0);
  EXPECT_EQ(r.max_duality_error, 0.0);
  EXPECT_THROW(evolving_set_checks(make_cyclic(17), set_kernel::deterministic(1)), capacity_error);
}

TEST(Profiles, ExhaustiveMatchesDirectEnumeration) {
  for (const auto& mu : battery()) {
    const auto& g = mu.group();
    const std::size_t n = g.order();
    const auto t = iso_profile(mu);
    EXPECT_TRUE(t.certified);
    ASSERT_EQ(t.rows.size(), n / 2);
    std::vector<double> phi(n / 2 + 1, 1e300), psi(n / 2 + 1, 1e300);
    for (std::uint64_t m = 1; m < full_mask(n); ++m) {
      const auto k = static_cast<std::size_t>(std::popcount(m));
      if (k > n / 2) continue;
      const auto w = subset_from_mask(m, n);
      for (std::size_t j = k; j <= n / 2; ++j) {
        phi[j] = std::min(phi[j], bottleneck_ratio(mu, w));
        psi[j] = std::min(psi[j], root_profile_psi_exact(mu, w));
      }
    }
    for (std::size_t k = 1; k <= n / 2; ++k) {
      EXPECT_NEAR(t.rows[k - 1].phi, phi[k], 1e-12) << g.describe() << " k=" << k;
      EXPECT_NEAR(t.rows[k - 1].psi, psi[k], 1e-12) << g.describe() << " k=" << k;
      const auto w = subset_from_mask(t.rows[k - 1].phi_witness, n);
      EXPECT_NEAR(bottleneck_ratio(mu, w), phi[k], 1e-12);
      if (k > 1) {
        EXPECT_LE(t.rows[k - 1].phi, t.rows[k - 2].phi);
        EXPECT_LE(t.rows[k - 1].psi, t.rows[k - 2].psi);
      }
    }
  }
}

TEST(Profiles, CycleArcs) {
  const auto t = iso_profile(simple_cycle_step(make_cyclic(10)));
  for (std::uint32_t k = 1; k <= 5; ++k) EXPECT_NEAR(t.rows[k - 1].phi, 1.0 / k, 1e-12);
  EXPECT_NEAR(t.at(0.5).phi, 0.2, 1e-12);
  EXPECT_NEAR(t.at(0.9).phi, 0.2, 1e-12);
  EXPECT_THROW(t.at(0.05), domain_error);
  EXPECT_THROW(iso_profile(uniform_step(make_cyclic(25))), capacity_error);
}

TEST(Profiles, SampledIsAnUpperBound) {
  const auto mu = lazy_hypercube_step(make_hypercube(4));
  const auto exact = iso_profile(mu);
  const auto sampled = iso_profile(mu, profile_mode::sampled, 300, 5);
  EXPECT_FALSE(sampled.certified);
  for (std::size_t i = 0; i < exact.rows.size(); ++i) {
    EXPECT_GE(sampled.rows[i].phi, exact.rows[i].phi - 1e-12);
    EXPECT_GE(sampled.rows[i].psi, exact.rows[i].psi - 1e-12);
  }
  // Half-cube cut is easy to find.
  EXPECT_NEAR(sampled.rows.back().phi, exact.rows.back().phi, 1e-12);
  const auto larger = iso_profile(lazy_hypercube_step(make_hypercube(5)), profile_mode::sampled, 50, 1);
  EXPECT_EQ(larger.rows.size(), 16u);
}

TEST(Profiles, PsiPhiInequality) {
  for (const auto& mu : {lazy_cycle_step(make_cyclic(2)), lazy_cycle_step(make_cyclic(9)),
                         lazy_hypercube_step(make_hypercube(3)),
                         step_distribution(make_cyclic(7), {{0, 0.2}, {1, 0.5}, {3, 0.3}})})
    EXPECT_GE(psi_phi_inequality_check(mu), -1e-12) << mu.group().describe();
  EXPECT_THROW(psi_phi_inequality_check(simple_cycle_step(make_cyclic(5))), domain_error);
}

TEST(Profiles, PositivityVersusGeneration) {
  const auto s3 = make_symmetric(3);
  const auto mu = uniform_on(s3, {s3.parse("(12)"), s3.parse("(132)")});
  const auto r = psi_positivity_vs_generation(mu);
  EXPECT_FALSE(r.gamma_gamma_inv_generates);
  EXPECT_EQ(r.generated.size(), 2u);
  EXPECT_NEAR(r.psi_half, 0.0, 1e-12);
  EXPECT_TRUE(r.equivalence_holds);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_TRUE(r.witness_fixed);

  const auto z5 = psi_positivity_vs_generation(simple_cycle_step(make_cyclic(5)));
  EXPECT_TRUE(z5.gamma_gamma_inv_generates);
  EXPECT_GT(z5.psi_half, 1e-3);
  EXPECT_TRUE(z5.equivalence_holds);
  EXPECT_THROW(psi_positivity_vs_generation(simple_cycle_step(make_cyclic(6))), reducible_error);
}

TEST(Trajectory, ForestKernels) {
  const auto g = make_cyclic(9);
  const auto mu = lazy_cycle_step(g);
  const auto f = forest_from_choices({0, 1, 0, 0, 0, 1, 1}, {0, 1, 1, 2, 3, 4, 4});
  spin_assignment spins(f.n);
  spins.set(1, 2);
  spins.set(4, 5);
  const auto ks = forest_kernels(mu, f, spins);
  ASSERT_EQ(ks.size(), 7u);
  EXPECT_EQ(ks[0].mu, nullptr);
  EXPECT_EQ(ks[0].shift, 2u);
  EXPECT_NE(ks[2].mu, nullptr);
  EXPECT_EQ(ks[3].shift, 5u);
  rng_stream rng(1);
  subset w(9, 0);
  w[0] = w[1] = 1;
  const auto sizes = evolving_trajectory(mu, f, spins, w, rng);
  ASSERT_EQ(sizes.size(), 8u);
  EXPECT_EQ(sizes[0], 2u);
  EXPECT_EQ(sizes[1], 2u);
  EXPECT_EQ(sizes[2], 2u);
  const auto full = evolving_trajectory(mu, f, spins, subset(9, 1), rng);
  for (auto s : full) EXPECT_EQ(s, 9u);
  EXPECT_THROW(forest_kernels(mu, f, spin_assignment(f.n)), contract_error);
}
