#include <gtest/gtest.h>

#include <srrw/analytic.hpp>
#include <srrw/forest.hpp>
#include <srrw/parallel.hpp>

#include <cmath>

using namespace srrw;

namespace {

cluster_options blocks(std::uint32_t m) {
  cluster_options o;
  o.block_length = m;
  return o;
}

cluster_options windows(std::vector<std::pair<double, std::uint32_t>> w, std::uint32_t m = 0) {
  cluster_options o;
  o.windows = std::move(w);
  o.block_length = m;
  return o;
}

cluster_options index_set(std::vector<std::uint32_t> j) {
  cluster_options o;
  o.index_set = std::move(j);
  return o;
}

// u_2 = u_3 = 1, u_4 = 2, u_5 = 3, u_6 = u_7 = 4; xi_3 = xi_4 = xi_5 = 0, others kept.
forest_path fixture_forest() {
  return forest_from_choices({0, 1, 0, 0, 0, 1, 1}, {0, 1, 1, 2, 3, 4, 4});
}

}  // namespace

TEST(Forest, SevenVertexFixture) {
  const auto f = fixture_forest();
  const std::vector<std::uint32_t> labels = {1, 1, 3, 4, 5, 4, 4};
  EXPECT_EQ(f.root, labels);
  const auto c = f.clusters();
  ASSERT_EQ(c.size(), 4u);
  EXPECT_EQ(c[0], std::make_pair(1u, 2u));
  EXPECT_EQ(c[1], std::make_pair(3u, 1u));
  EXPECT_EQ(c[2], std::make_pair(4u, 3u));
  EXPECT_EQ(c[3], std::make_pair(5u, 1u));
  const auto s = cluster_statistics(f);
  EXPECT_EQ(s.N(1), 2u);
  EXPECT_EQ(s.N(2), 1u);
  EXPECT_EQ(s.N(3), 1u);
  EXPECT_EQ(s.odd_clusters, 3u);
  EXPECT_EQ(s.isolated, 2u);
}

TEST(Forest, DegenerateConfigurations) {
  rng_stream rng(1);
  const auto singletons = grow_forest(50, 0.0, rng);
  const auto s = cluster_statistics(singletons, blocks(1));
  EXPECT_EQ(s.isolated, 50u);
  EXPECT_EQ(s.block_isolated, 50u);
  EXPECT_EQ(s.clusters, 50u);

  std::vector<std::uint8_t> xi(30, 1);
  std::vector<std::uint32_t> u(30, 1);
  const auto one = forest_from_choices(xi, u);
  const auto t = cluster_statistics(one, windows({{40.0, 1}}));
  EXPECT_EQ(t.clusters, 1u);
  EXPECT_EQ(t.N(30), 1u);
  for (auto r : one.root) EXPECT_EQ(r, 1u);
  // Window [40/96, 20) excludes the single cluster of size 30.
  EXPECT_EQ(t.windows.front().count, 0u);
}

TEST(Forest, Invariants) {
  rng_stream rng(2);
  for (double alpha : {0.1, 0.5, 0.9}) {
    const auto f = grow_forest(5000, alpha, rng);
    const auto s = cluster_statistics(f);
    std::uint64_t mass = 0;
    for (const auto& [k, c] : s.size_counts) mass += k * c;
    EXPECT_EQ(mass, 5000u);
    std::uint64_t fresh = 1;
    for (std::uint32_t j = 2; j <= f.n; ++j) fresh += f.xi[j - 1] == 0;
    EXPECT_EQ(s.clusters, fresh);
    EXPECT_EQ(f.root[0], 1u);
    for (std::uint32_t j = 2; j <= f.n; ++j)
      EXPECT_EQ(f.root[j - 1], f.xi[j - 1] ? f.root[f.parent[j - 1] - 1] : j);
  }
}

TEST(Forest, GrowingCountersMatchStatistics) {
  rng_stream rng(3);
  growing_forest g(0.6);
  for (int j = 0; j < 2000; ++j) g.step(rng);
  const auto s = cluster_statistics(g.snapshot());
  EXPECT_EQ(g.isolated(), s.isolated);
  EXPECT_EQ(g.odd_clusters(), s.odd_clusters);
  EXPECT_EQ(g.clusters(), s.clusters);
  // pop undoes push exactly.
  for (int j = 0; j < 500; ++j) g.pop();
  const auto p = cluster_statistics(g.snapshot());
  EXPECT_EQ(g.isolated(), p.isolated);
  EXPECT_EQ(g.odd_clusters(), p.odd_clusters);
}

TEST(Forest, PrefixReplayEqualsShorterGrowth) {
  auto a = rng_stream(9);
  auto b = rng_stream(9);
  const auto long_f = grow_forest(300, 0.4, a);
  const auto short_f = grow_forest(120, 0.4, b);
  EXPECT_EQ(long_f.prefix(120).root, short_f.root);
}

TEST(Forest, Determinism) {
  auto a = rng_stream::stream(42, 5);
  auto b = rng_stream::stream(42, 5);
  EXPECT_EQ(grow_forest(1000, 0.5, a).parent, grow_forest(1000, 0.5, b).parent);
  EXPECT_THROW(grow_forest(10, 1.0, a), parameter_error);
  EXPECT_THROW(grow_forest(10, -0.1, a), parameter_error);
}

TEST(Forest, WindowAndBlockCounts) {
  // Sizes {2,1,3,1}: window L=12,k=1 is [0.125, 6): all four clusters.
  const auto s = cluster_statistics(fixture_forest(), windows({{12.0, 1}, {12.0, 2}}, 2));
  EXPECT_EQ(s.windows[0].count, 4u);
  // k = 2: [0.0625, 3) keeps sizes 1 and 2.
  EXPECT_EQ(s.windows[1].count, 3u);
  // Blocks {1,2},{3,4},{5,6}: none fully isolated (3 and 5 isolated, 4 and 6 not).
  EXPECT_EQ(s.block_isolated, 0u);
  const auto t = cluster_statistics(fixture_forest(), index_set({1, 3}));
  EXPECT_EQ(t.index_set_count, 3u);
  EXPECT_NEAR(t.y, 2.0 / 7.0 - 1.0 / 3.0, 1e-15);
}

// Mean of I(n) against the closed form at n = 1000.
TEST(ForestStatistics, MeanIsolatedMatchesClosedForm) {
  for (double alpha : {0.2, 0.5, 0.8}) {
    const std::uint64_t R = 100000;
    const batch_plan plan(R);
    std::vector<double> s1(plan.batches), s2(plan.batches);
    parallel_for(plan.batches, 0, [&](std::size_t b) {
      for (std::uint64_t r = plan.begin(b); r < plan.end(b); ++r) {
        auto rng = rng_stream::stream(17, r);
        growing_forest f(alpha);
        f.reserve(1000);
        for (int j = 0; j < 1000; ++j) f.step(rng);
        const double v = static_cast<double>(f.isolated());
        s1[b] += v;
        s2[b] += v * v;
      }
    });
    double m = 0, q = 0;
    for (std::size_t b = 0; b < plan.batches; ++b) {
      m += s1[b];
      q += s2[b];
    }
    m /= R;
    const double sd = std::sqrt((q / R - m * m) / R);
    EXPECT_LT(std::abs(m - expected_isolated_exact(1000, alpha)), 4 * sd) << alpha;
  }
}

TEST(ForestStatistics, LowerTailOfIsolatedCount) {
  for (double alpha : {0.2, 0.5, 0.8}) {
    int low = 0;
    for (int r = 0; r < 10000; ++r) {
      auto rng = rng_stream::stream(23, r);
      growing_forest f(alpha);
      for (int j = 0; j < 500; ++j) f.step(rng);
      low += f.isolated() <= (1 - alpha) * 500 / 8;
    }
    EXPECT_LE(low / 10000.0, 0.01) << alpha;
  }
}

// Mean size at n of clusters that are singletons at t grows by a_n / a_t.
TEST(ForestStatistics, GrowthFactorOfIsolatedRoots) {
  const double alpha = 0.5;
  const std::uint32_t t = 100, n = 400;
  double sum = 0, sum2 = 0;
  std::uint64_t count = 0;
  for (int r = 0; r < 4000; ++r) {
    auto rng = rng_stream::stream(31, r);
    const auto f = grow_forest(n, alpha, rng);
    const auto pre = f.prefix(t).clusters();
    const auto all = f.clusters();
    std::vector<std::uint32_t> final_size(n + 1, 0);
    for (const auto& [root, size] : all) final_size[root] = size;
    for (const auto& [root, size] : pre)
      if (size == 1) {
        const double v = final_size[root];
        sum += v;
        sum2 += v * v;
        ++count;
      }
  }
  const double m = sum / count;
  const double se = std::sqrt((sum2 / count - m * m) / count);
  EXPECT_LT(std::abs(m - growth_factor(t, n, alpha)), 3 * se);
}

TEST(ForestStatistics, ClusterDensities) {
  const double alpha = 0.5;
  const std::uint32_t n = 100000;
  std::vector<double> density(6, 0.0);
  double odd = 0;
  const int R = 200;
  for (int r = 0; r < R; ++r) {
    auto rng = rng_stream::stream(5, r);
    const auto s = cluster_statistics(grow_forest(n, alpha, rng));
    for (std::uint32_t k = 1; k <= 5; ++k) density[k] += double(s.N(k)) / n / R;
    odd += double(s.odd_clusters) / n / R;
  }
  for (std::uint32_t k = 1; k <= 5; ++k) EXPECT_NEAR(density[k], theta_k(alpha, k), 0.01) << k;
  EXPECT_NEAR(odd, odd_cluster_density(alpha), 0.005);
}
