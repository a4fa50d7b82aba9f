#include <gtest/gtest.h>

#include <srrw/distribution.hpp>
#include <srrw/group.hpp>

#include <set>

using namespace srrw;

namespace {

void expect_axioms(const finite_group& g) {
  const auto n = static_cast<element_t>(g.order());
  const element_t e = g.identity();
  for (element_t x = 0; x < n; ++x) {
    ASSERT_EQ(g.multiply(x, e), x);
    ASSERT_EQ(g.multiply(e, x), x);
    ASSERT_EQ(g.multiply(x, g.inverse(x)), e);
    ASSERT_EQ(g.multiply(g.inverse(x), x), e);
  }
  if (n <= 256) {
    for (element_t x = 0; x < n; ++x)
      for (element_t y = 0; y < n; ++y)
        for (element_t z = 0; z < n; ++z)
          ASSERT_EQ(g.multiply(g.multiply(x, y), z), g.multiply(x, g.multiply(y, z)));
  } else {
    rng_stream rng(7);
    for (int i = 0; i < 100000; ++i) {
      const element_t x = rng.bounded(n), y = rng.bounded(n), z = rng.bounded(n);
      ASSERT_EQ(g.multiply(g.multiply(x, y), z), g.multiply(x, g.multiply(y, z)));
    }
  }
}

}  // namespace

TEST(Group, CyclicBasics) {
  const auto g = make_cyclic(3);
  EXPECT_EQ(g.order(), 3u);
  EXPECT_EQ(g.identity(), 0u);
  EXPECT_EQ(g.multiply(2, 2), 1u);
  EXPECT_EQ(g.inverse(1), 2u);
  EXPECT_EQ(g.parse("-1"), 2u);
  EXPECT_EQ(g.format(2), "2");
}

TEST(Group, AxiomsForEveryKind) {
  expect_axioms(make_cyclic(2));
  expect_axioms(make_cyclic(17));
  expect_axioms(make_hypercube(1));
  expect_axioms(make_hypercube(6));
  expect_axioms(make_hypercube(12));
  expect_axioms(make_symmetric(1));
  expect_axioms(make_symmetric(3));
  expect_axioms(make_symmetric(5));
  expect_axioms(make_symmetric(7));  // 5040 > table limit: arithmetic path
  expect_axioms(make_lamplighter(3));
  expect_axioms(make_lamplighter(6));
  expect_axioms(make_lamplighter(10));
}

TEST(Group, SizeLimits) {
  EXPECT_THROW(make_cyclic(1), size_error);
  EXPECT_THROW(make_hypercube(0), size_error);
  EXPECT_THROW(make_hypercube(33), size_error);
  EXPECT_THROW(make_symmetric(9), size_error);
  EXPECT_THROW(make_symmetric(0), size_error);
  EXPECT_THROW(make_lamplighter(20), size_error);  // 20 * 2^20 > 2^24
  EXPECT_NO_THROW(make_lamplighter(19));
  EXPECT_THROW(make_group("torus", 3), parameter_error);
}

TEST(Group, LamplighterOrderAndProduct) {
  const auto g = make_lamplighter(3);
  EXPECT_EQ(g.order(), 24u);
  EXPECT_FALSE(g.is_abelian());
  // (f,j)(h,k) = (f + h(. - j), j + k).
  const element_t a = g.parse("(100,1)");
  const element_t b = g.parse("(100,0)");
  EXPECT_EQ(g.format(g.multiply(a, b)), "(110,1)");
  EXPECT_EQ(g.format(g.multiply(b, a)), "(000,1)");
  EXPECT_EQ(g.format(g.inverse(g.parse("(110,1)"))), "(101,2)");
  EXPECT_EQ(g.identity(), g.parse("(000,0)"));
  // Index order is lexicographic in (lamps, position).
  EXPECT_EQ(g.format(1), "(000,1)");
  EXPECT_EQ(g.format(3), "(001,0)");
  EXPECT_EQ(g.format(23), "(111,2)");
}

TEST(Group, RoundTripNotation) {
  for (const auto& g : {make_cyclic(7), make_hypercube(5), make_symmetric(4), make_lamplighter(4)})
    for (element_t x = 0; x < g.order(); ++x) EXPECT_EQ(g.parse(g.format(x)), x) << g.describe();
}

TEST(Group, PermutationConvention) {
  // Apply the left factor first: (12)(23) sends 1 -> 2 -> 3.
  const auto g = make_symmetric(3);
  EXPECT_EQ(g.format(g.multiply(g.parse("(12)"), g.parse("(23)"))), "(132)");
  EXPECT_EQ(g.format(g.inverse(g.parse("(132)"))), "(123)");
  EXPECT_EQ(g.parse("e"), g.identity());
  EXPECT_EQ(g.format(g.identity()), "()");
  EXPECT_THROW(g.parse("(12)(23)"), parameter_error);
  EXPECT_THROW(g.parse("(14)"), parameter_error);
}

TEST(Group, HypercubeNotation) {
  const auto g = make_hypercube(4);
  EXPECT_EQ(g.parse("1000"), 1u);
  EXPECT_EQ(g.format(0b0110), "0110");
  EXPECT_THROW(g.parse("10"), parameter_error);
}

TEST(Group, CayleyTable) {
  // Z_2 x Z_2 with the identity stored at index 2.
  std::vector<std::vector<element_t>> t = {{2, 3, 0, 1}, {3, 2, 1, 0}, {0, 1, 2, 3}, {1, 0, 3, 2}};
  const auto g = make_table_group(t);
  EXPECT_EQ(g.identity(), 2u);
  EXPECT_TRUE(g.is_abelian());
  expect_axioms(g);
  EXPECT_EQ(subgroup_order(g, g.generators()), 4u);
  std::vector<std::vector<element_t>> bad = {{0, 1}, {1, 1}};
  EXPECT_THROW(make_table_group(bad), parameter_error);
}

TEST(Distribution, ValidationAndSupport) {
  const auto g = make_cyclic(5);
  EXPECT_THROW(step_distribution(g, {{0, 0.5}, {1, 0.4}}), parameter_error);
  EXPECT_THROW(step_distribution(g, {{0, 1.5}, {1, -0.5}}), parameter_error);
  EXPECT_THROW(step_distribution(g, {{7, 1.0}}), parameter_error);
  const step_distribution mu(g, {{1, 0.5}, {4, 0.5}, {2, 0.0}});
  EXPECT_EQ(mu.support_size(), 2u);
  EXPECT_FALSE(mu.in_support(2));
  const auto from_keys = step_distribution::from_notation(g, {{"1", 0.5}, {"-1", 0.5}});
  EXPECT_EQ(from_keys.gamma(), mu.gamma());
}

TEST(Distribution, TransitionMatrixExamples) {
  const auto g = make_cyclic(3);
  const auto P = transition_matrix(simple_cycle_step(g));
  EXPECT_DOUBLE_EQ(P(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(P(0, 2), 0.5);
  EXPECT_DOUBLE_EQ(P(0, 0), 0.0);
  const auto H = transition_matrix(lazy_hypercube_step(make_hypercube(2)));
  for (int x = 0; x < 4; ++x) EXPECT_DOUBLE_EQ(H(x, x), 0.5);
}

TEST(Distribution, DoublyStochastic) {
  rng_stream rng(3);
  for (const auto& g : {make_cyclic(9), make_symmetric(4), make_lamplighter(3), make_hypercube(5)}) {
    std::vector<double> w(g.order());
    for (auto& v : w) v = rng.uniform01() < 0.3 ? rng.uniform01() : 0.0;
    w[1] += 0.1;
    double s = 0;
    for (double v : w) s += v;
    for (auto& v : w) v /= s;
    const auto P = transition_matrix(step_distribution::from_dense(g, w));
    EXPECT_LT((P.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
    EXPECT_LT((P.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
  }
}

TEST(Irreducibility, Examples) {
  const auto z3 = make_cyclic(3);
  const auto c = irreducibility_certificate(simple_cycle_step(z3));
  EXPECT_EQ(c.m_star, 2u);
  EXPECT_DOUBLE_EQ(c.epsilon_star, 0.25);
  const auto z2 = make_cyclic(2);
  EXPECT_THROW(irreducibility_certificate(step_distribution(z2, {{1, 1.0}})), reducible_error);
  const auto lazy = irreducibility_certificate(step_distribution(z2, {{0, 0.5}, {1, 0.5}}));
  EXPECT_EQ(lazy.m_star, 1u);
  EXPECT_DOUBLE_EQ(lazy.epsilon_star, 0.5);
  // Reducible: Gamma inside a proper subgroup.
  EXPECT_THROW(irreducibility_certificate(step_distribution(make_cyclic(6), {{2, 0.5}, {4, 0.5}})),
               reducible_error);
}

TEST(Irreducibility, MatrixAndConvolutionAgree) {
  for (const auto& mu : {simple_cycle_step(make_cyclic(7)), lazy_cycle_step(make_cyclic(8)),
                         lazy_hypercube_step(make_hypercube(4)),
                         uniform_on(make_symmetric(3), {make_symmetric(3).parse("(12)"),
                                                        make_symmetric(3).parse("(132)")})}) {
    const auto a = irreducibility_certificate(mu);
    const auto b = irreducibility_certificate(transition_matrix(mu));
    EXPECT_EQ(a.m_star, b.m_star);
    EXPECT_NEAR(a.epsilon_star, b.epsilon_star, 1e-12);
  }
  // Simple walk on an even cycle is periodic.
  EXPECT_THROW(irreducibility_certificate(transition_matrix(simple_cycle_step(make_cyclic(6)))),
               reducible_error);
}

TEST(Predicates, S3Remark) {
  const auto g = make_symmetric(3);
  const element_t t12 = g.parse("(12)"), c132 = g.parse("(132)");
  const auto mu = uniform_on(g, {t12, c132});
  const auto ggi = generated_subgroup(g, gamma_gamma_inverse(g, mu.gamma()));
  std::set<std::string> names;
  for (element_t x : ggi) names.insert(g.format(x));
  EXPECT_EQ(names, (std::set<std::string>{"()", "(13)"}));
  const auto gig = generated_subgroup(g, gamma_inverse_gamma(g, mu.gamma()));
  std::set<std::string> names2;
  for (element_t x : gig) names2.insert(g.format(x));
  EXPECT_EQ(names2, (std::set<std::string>{"()", "(23)"}));
  const auto r = distribution_predicates(mu);
  EXPECT_TRUE(r.generates);
  EXPECT_FALSE(r.gamma_gamma_inv_generates);
  EXPECT_FALSE(r.gamma_inv_gamma_generates);
  EXPECT_FALSE(r.symmetric);
  EXPECT_FALSE(r.class_function);
  EXPECT_FALSE(r.lazy_atom);
}

TEST(Predicates, AbelianIsClassFunction) {
  rng_stream rng(11);
  for (const auto& g : {make_cyclic(12), make_hypercube(4)}) {
    std::vector<double> w(g.order());
    for (auto& v : w) v = rng.uniform01();
    double s = 0;
    for (double v : w) s += v;
    for (auto& v : w) v /= s;
    EXPECT_TRUE(distribution_predicates(step_distribution::from_dense(g, w)).class_function);
  }
}

TEST(Predicates, LazyGenerates) {
  const auto g = make_symmetric(4);
  const auto mu = step_distribution(g, {{g.identity(), 0.5}, {g.parse("(12)"), 0.25},
                                        {g.parse("(1234)"), 0.25}});
  const auto r = distribution_predicates(mu);
  EXPECT_TRUE(r.lazy_atom);
  EXPECT_TRUE(r.case_identity_in_support);
  EXPECT_TRUE(r.gamma_gamma_inv_generates);
}

// Each of the cases (i)-(iii), under an irreducibility certificate, forces
// <Gamma Gamma^-1> = G; and the two orderings of the product agree.
TEST(Predicates, CasesImplyGenerationBattery) {
  std::vector<step_distribution> battery;
  const auto s3 = make_symmetric(3), s4 = make_symmetric(4), l3 = make_lamplighter(3);
  battery.push_back(simple_cycle_step(make_cyclic(5)));
  battery.push_back(simple_cycle_step(make_cyclic(9)));
  battery.push_back(lazy_cycle_step(make_cyclic(6)));
  battery.push_back(step_distribution(make_cyclic(7), {{1, 0.7}, {3, 0.3}}));
  battery.push_back(step_distribution(make_cyclic(8), {{1, 0.5}, {2, 0.5}}));
  battery.push_back(lazy_hypercube_step(make_hypercube(3)));
  battery.push_back(lazy_hypercube_step(make_hypercube(6)));
  battery.push_back(uniform_on(s3, {s3.parse("(12)"), s3.parse("(132)")}));
  battery.push_back(uniform_on(s3, {s3.parse("(12)"), s3.parse("(13)"), s3.parse("(23)")}));
  battery.push_back(uniform_on(s3, {s3.parse("(12)"), s3.parse("(123)"), s3.parse("(132)")}));
  battery.push_back(uniform_on(s3, {s3.identity(), s3.parse("(12)"), s3.parse("(123)")}));
  battery.push_back(uniform_on(s4, {s4.parse("(12)"), s4.parse("(1234)")}));
  battery.push_back(uniform_on(s4, {s4.identity(), s4.parse("(12)"), s4.parse("(1234)")}));
  battery.push_back(uniform_on(s4, {s4.parse("(12)"), s4.parse("(1234)"), s4.parse("(1432)")}));
  battery.push_back(uniform_on(s4, {s4.parse("(123)"), s4.parse("(12)(34)")}));
  battery.push_back(lamplighter_lazy_step(l3));
  battery.push_back(uniform_on(l3, {l3.parse("(100,0)"), l3.parse("(000,1)")}));
  battery.push_back(uniform_on(l3, {l3.parse("(100,1)"), l3.parse("(000,1)")}));
  battery.push_back(uniform_on(l3, {l3.parse("(100,0)"), l3.parse("(000,1)"), l3.parse("(000,2)")}));
  battery.push_back(uniform_step(make_symmetric(3)));
  battery.push_back(uniform_step(make_lamplighter(3)));
  battery.push_back(step_distribution(make_cyclic(4), {{1, 0.6}, {2, 0.4}}));
  ASSERT_GE(battery.size(), 20u);
  int certified = 0;
  for (const auto& mu : battery) {
    const auto r = distribution_predicates(mu);
    if (r.gamma_gamma_inv_generates || r.gamma_inv_gamma_generates) {
      EXPECT_EQ(r.gamma_gamma_inv_generates, r.gamma_inv_gamma_generates) << mu.group().describe();
    }
    bool ok = true;
    try {
      irreducibility_certificate(mu);
    } catch (const reducible_error&) {
      ok = false;
    }
    if (!ok) continue;
    ++certified;
    if (r.case_symmetric_support || r.case_union_of_classes || r.case_identity_in_support) {
      EXPECT_TRUE(r.gamma_gamma_inv_generates) << mu.group().describe();
    }
  }
  EXPECT_GE(certified, 15);
}

TEST(ConjugacyClasses, Examples) {
  EXPECT_EQ(conjugacy_classes(make_cyclic(6)).size(), 6u);
  const auto classes = conjugacy_classes(make_symmetric(3));
  ASSERT_EQ(classes.size(), 3u);
  std::multiset<std::size_t> sizes;
  for (const auto& c : classes) sizes.insert(c.size());
  EXPECT_EQ(sizes, (std::multiset<std::size_t>{1, 2, 3}));
  EXPECT_EQ(conjugacy_classes(make_symmetric(4)).size(), 5u);
  EXPECT_EQ(conjugacy_classes(make_symmetric(5)).size(), 7u);
  // Brute-force orbits under all of G.
  const auto l3 = make_lamplighter(3);
  std::set<std::set<element_t>> brute;
  for (element_t x = 0; x < l3.order(); ++x) {
    std::set<element_t> cls;
    for (element_t y = 0; y < l3.order(); ++y) cls.insert(l3.multiply(l3.multiply(l3.inverse(y), x), y));
    brute.insert(cls);
  }
  EXPECT_EQ(conjugacy_classes(l3).size(), brute.size());
}
