#include <gtest/gtest.h>

#include "oracle/oracle.hpp"
#include "support.hpp"

using namespace testing_support;

namespace {

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(*parse_rational("7/2"), q(7, 2));
  EXPECT_EQ(*parse_rational("-3"), -3);
  EXPECT_EQ(*parse_rational("4/6"), q(2, 3));
  EXPECT_FALSE(parse_rational("1/0"));
  EXPECT_FALSE(parse_rational("abc"));
  EXPECT_FALSE(parse_rational("1.5"));
  EXPECT_EQ(to_string(q(6, 4)), "3/2");
  EXPECT_EQ(to_string(q(-4, 2)), "-2");
  Rational r = q(10, -4);
  EXPECT_EQ(r.get_den(), 2);
  EXPECT_EQ(r.get_num(), -5);
}

TEST(Capacity, InfiniteOrdering) {
  Capacity inf = Capacity::infinite();
  EXPECT_TRUE(Capacity(1000000) < inf);
  EXPECT_TRUE(Rational(5) < inf);
  EXPECT_TRUE((inf + Capacity(3)).is_infinite());
  EXPECT_TRUE((inf - Rational(3)).is_infinite());
  EXPECT_EQ(min(inf, Capacity(4)), Capacity(4));
  EXPECT_EQ(to_string(inf), "inf");
  EXPECT_TRUE(parse_capacity("inf")->is_infinite());
  EXPECT_EQ(*parse_capacity("7/2"), Capacity(q(7, 2)));
  EXPECT_THROW(inf.value(), std::logic_error);
}

TEST(Network, RejectsParallelAndSelfLoops) {
  Network n = single_edge(Rational(1));
  EXPECT_THROW(n.add_edge(0, 1, Rational(2)), ModelError);
  VertexId v = n.add_vertex("v");
  EXPECT_THROW(n.add_edge(v, v, Rational(1)), ModelError);
}

TEST(Network, ValidateStructure) {
  Network n;
  VertexId s = n.add_vertex("s");
  VertexId v = n.add_vertex("v");
  VertexId t = n.add_vertex("t");
  EXPECT_THROW(n.validate(), ModelError);
  n.set_source(s);
  n.set_sink(t);
  n.add_edge(s, v, Rational(1));
  EdgeId vt = n.add_edge(v, t, Rational(1));
  EXPECT_NO_THROW(n.validate());
  n.add_edge(t, v, Rational(1));
  EXPECT_THROW(n.validate(), ModelError);

  Network m = chain(Mapping::identity(), Rational(1), Rational(-1));
  EXPECT_THROW(m.validate(), ModelError);

  Network p = chain(Mapping::identity(), Rational(1), Rational(1));
  p.set_out_pref(1, {});
  EXPECT_NO_THROW(p.validate());
  (void)vt;
}

TEST(Network, PreferencePermutations) {
  Network n = halving_network();
  EXPECT_NO_THROW(n.validate());
  VertexId v1 = n.vertex("v1");
  EdgeId a = n.edge("v1", "v2"), b = n.edge("v1", "v3");
  EXPECT_TRUE(n.prefers(v1, b, a));
  EXPECT_FALSE(n.prefers(v1, a, b));
  n.set_out_pref(v1, {a});
  EXPECT_THROW(n.validate(), ModelError);
  n.set_out_pref(v1, {a, a});
  EXPECT_THROW(n.validate(), ModelError);
  Network m = halving_network();
  m.set_in_pref(m.source(), {});
  EXPECT_NO_THROW(m.validate());
}

TEST(Network, DefaultPreferenceIsDeclarationOrder) {
  Network n = halving_network();
  VertexId v2 = n.vertex("v2");
  EXPECT_EQ(n.out_pref(v2), n.out_edges(v2));
  EXPECT_FALSE(n.has_explicit_out_pref(v2));
}

TEST(CheckFlow, AppendixFinalFlow) {
  Network n = load("appendix_a.net");
  Flow f = flow_of(n, {{"s", "v1", 2}, {"v1", "v2", 6}, {"v2", "v1", 10}, {"v1", "t", 10}});
  EXPECT_TRUE(check_flow(n, f).feasible());
  EXPECT_TRUE(oracle::feasible(n, f));
  EXPECT_EQ(inflow(n, f, n.vertex("v1")), 12);
  EXPECT_EQ(outflow(n, f, n.vertex("v1")), 16);
}

TEST(CheckFlow, ExampleTwoRightGraph) {
  Network n = load("example2.net");
  Flow f = flow_of(n, {{"v1", "v2", 2}, {"v2", "v1", 4}, {"v1", "t", 6}});
  EXPECT_TRUE(check_flow(n, f).feasible());
}

TEST(CheckFlow, ZeroFlowWithoutOffsets) {
  Network n = halving_network();
  EXPECT_TRUE(check_flow(n, zero_flow(n)).feasible());
}

TEST(CheckFlow, ReportsViolations) {
  Network n = load("example2.net");
  Flow f = flow_of(n, {{"s", "v1", 2}, {"v1", "t", 4}});
  auto rep = check_flow(n, f);
  EXPECT_FALSE(rep.feasible());
  ASSERT_EQ(rep.capacity.size(), 1u);
  EXPECT_EQ(rep.capacity[0].edge, n.edge("s", "v1"));
  EXPECT_TRUE(rep.balance.empty());
  f[n.edge("v1", "t")] = 3;
  rep = check_flow(n, f);
  ASSERT_EQ(rep.balance.size(), 1u);
  EXPECT_EQ(rep.balance[0].vertex, n.vertex("v1"));
  EXPECT_THROW(check_flow(n, Flow(2)), ModelError);
}

TEST(CheckFlow, ZeroInflowInterval) {
  Network n = chain(Mapping::linear(1, 3), Rational(5), Rational(5));
  Flow f = flow_of(n, {{"v", "t", 3}});
  EXPECT_TRUE(check_flow(n, f).feasible());
  f[1] = q(7, 2);
  EXPECT_FALSE(check_flow(n, f).feasible());
}

TEST(CheckFlow, AgreesWithBruteForce) {
  std::mt19937 rng(11);
  oracle::NetSpec spec;
  spec.max_inner = 5;
  spec.max_segments = 3;
  spec.cycles = true;
  for (int trial = 0; trial < 300; ++trial) {
    Network n = oracle::random_network(rng, spec);
    Flow f = zero_flow(n);
    for (auto& x : f) x = oracle::rational_in(rng, 0, 3);
    EXPECT_EQ(check_flow(n, f).feasible(), oracle::feasible(n, f));
    EXPECT_EQ(check_flow(n, zero_flow(n)).feasible(), oracle::feasible(n, zero_flow(n)));
    for (VertexId v : n.inner_vertices()) {
      EXPECT_EQ(inflow(n, f, v), oracle::sum_in(n, f, v));
      EXPECT_EQ(outflow(n, f, v), oracle::sum_out(n, f, v));
    }
  }
}

}  // namespace
