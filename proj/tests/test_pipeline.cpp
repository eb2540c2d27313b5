#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>

#include "sflow/pipeline.hpp"
#include "sflow/reduction.hpp"
#include "sflow/scarf.hpp"
#include "golden.hpp"

using namespace testing_support;

namespace {

const Solution& appendix() {
  static const Solution sol = solve(load("appendix_a.net"));
  return sol;
}

const Stage& stage(const Solution& sol, const std::string& name) {
  for (const Stage& st : sol.stages)
    if (st.name == name) return st;
  throw std::runtime_error("no stage " + name);
}

TEST(Appendix, FinalFlow) {
  auto t0 = std::chrono::steady_clock::now();
  Network n = load("appendix_a.net");
  Solution sol = solve(n);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 1.0);
  EXPECT_EQ(sol.flow, flow_of(n, {{"s", "v1", 2}, {"v1", "v2", 6}, {"v2", "v1", 10}, {"v1", "t", 10}}));
  EXPECT_EQ(sol.report.method, "augment");
  EXPECT_EQ(sol.report.verdict, Verdict::Stable);
  EXPECT_EQ(sol.report.segments, 4u);
  ASSERT_EQ(sol.stages.size(), 3u);
  EXPECT_EQ(sol.stages[0].name, "input");
  EXPECT_EQ(sol.stages[1].name, "lm");
  EXPECT_EQ(sol.stages[2].name, "acyclic");
}

TEST(Appendix, LmFlow) {
  const Stage& lm = stage(appendix(), "lm");
  const auto& rows = appendix_lm_rows();
  ASSERT_EQ(lm.net.edge_count(), rows.size());
  for (const LmRow& r : rows) EXPECT_EQ(at(lm.net, lm.flow, lm_name(r.x), lm_name(r.y)), r.v) << r.x << r.y;
}

TEST(Appendix, AcyclicFlow) {
  const Stage& ac = stage(appendix(), "acyclic");
  const Network& n = ac.net;
  Flow listed = listed_acyclic_flow(n);
  EXPECT_TRUE(check_flow(n, listed).feasible());
  EXPECT_TRUE(is_stable(n, listed).stable());

  // The solver routes the unit of slack at b through m2 instead of m1; every
  // other edge matches the listing.
  std::vector<EdgeId> moved = slack_edges_of_b(n);
  for (EdgeId e = 0; e < n.edge_count(); ++e) {
    if (std::find(moved.begin(), moved.end(), e) != moved.end()) continue;
    EXPECT_EQ(ac.flow[e], listed[e]) << n.name(n.edge_at(e).tail) << " -> " << n.name(n.edge_at(e).head);
  }
  EXPECT_EQ(ac.flow[moved[0]], 0);
  EXPECT_EQ(ac.flow[moved[1]], 0);
  EXPECT_EQ(ac.flow[moved[2]], 1);
  EXPECT_EQ(ac.flow[moved[3]], 1);
}

TEST(Appendix, ListedVariantPullsBackToTheSameFlow) {
  Network n = load("appendix_a.net");
  Reduction lm = mplm_to_lm(n);
  Reduction ac = cyclic_to_acyclic(lm.net);
  Flow back = pullback(lm.map, pullback(ac.map, listed_acyclic_flow(ac.net)));
  EXPECT_EQ(back, appendix().flow);
  EXPECT_TRUE(is_stable(n, back).stable());
}

TEST(Appendix, EveryStageIsStable) {
  for (const Stage& st : appendix().stages) {
    EXPECT_TRUE(check_flow(st.net, st.flow).feasible()) << st.name;
    EXPECT_TRUE(is_stable(st.net, st.flow).stable()) << st.name;
  }
}

TEST(Appendix, ComplexityProbe) {
  ComplexityStats c = complexity_probe(load("appendix_a.net"));
  EXPECT_EQ(c.vertices, 4u);
  EXPECT_EQ(c.edges, 4u);
  EXPECT_EQ(c.segments, 4u);
  // Eight LM vertices and twelve LM edges before layering.
  EXPECT_EQ(c.reduced_vertices, 4u + 4 * 8 + 12);
  EXPECT_EQ(c.reduced_edges, 2u + 6 * 8 + 2 * 12);
  EXPECT_TRUE(c.within_bound);
  EXPECT_LE(c.iterations, 2 * c.reduced_edges);
  EXPECT_GE(c.longest_path, 2u);

  // First layer: s.out plus one vertex per LM vertex.
  const Network& ac = stage(appendix(), "acyclic").net;
  std::size_t first = 0;
  for (EdgeId e : ac.out_edges(ac.source())) first += ac.edge_at(e).head != ac.sink();
  EXPECT_EQ(first, 9u);
}

TEST(Pipeline, ExampleTwo) {
  Network n = load("example2.net");
  Solution sol = solve(n);
  EXPECT_TRUE(check_flow(n, sol.flow).feasible());
  EXPECT_TRUE(is_stable(n, sol.flow).stable());
  ASSERT_EQ(sol.stages.size(), 2u);
  EXPECT_EQ(sol.stages[1].name, "acyclic");
  EXPECT_EQ(sol.report.segments, 2u);
}

TEST(Pipeline, SingleEdge) {
  Network n = single_edge(Rational(5));
  Solution sol = solve(n);
  EXPECT_EQ(sol.flow, flow_of(n, {{"s", "t", 5}}));
  EXPECT_EQ(sol.stages.size(), 1u);
  EXPECT_EQ(sol.report.iterations, 1u);
  EXPECT_EQ(sol.trace.size(), 1u);
}

TEST(Pipeline, InfiniteCapacitiesStayOnTheAugmentingPath) {
  Network n = chain(Mapping::linear(2), Capacity::infinite(), Rational(6));
  Solution sol = solve(n);
  EXPECT_EQ(sol.flow, flow_of(n, {{"s", "v", 3}, {"v", "t", 6}}));
  EXPECT_EQ(sol.report.method, "augment");
}

TEST(Pipeline, StallFallsBackToPivoting) {
  Network n = load("stall.net");
  Solution sol = solve(n);
  EXPECT_EQ(sol.report.method, "pivot");
  EXPECT_EQ(sol.report.pivot_reason, "augmentation saturated no H-edge");
  EXPECT_EQ(sol.report.pivot_stage, "input");
  EXPECT_TRUE(check_flow(n, sol.flow).feasible());
  EXPECT_TRUE(is_stable(n, sol.flow).stable());
  ScarfInstance inst = build_scarf(n);
  EXPECT_TRUE(check_dominance(inst, flow_to_scarf(n, sol.flow)).all());

  std::string rep = format_report(sol);
  EXPECT_NE(rep.find("method pivot\n"), std::string::npos);
  EXPECT_NE(rep.find("pivot-reason augmentation saturated no H-edge\n"), std::string::npos);
  EXPECT_NE(rep.find("pivot-stage input\n"), std::string::npos);
}

TEST(Pipeline, ReportLines) {
  std::string rep = format_report(appendix());
  for (const char* line : {"stage input vertices 4 edges 4\n", "stage lm vertices 10 edges 12\n",
                           "stage acyclic vertices 48 edges 74\n", "segments 4\n", "method augment\n",
                           "verdict stable\n"})
    EXPECT_NE(rep.find(line), std::string::npos) << line;
  EXPECT_EQ(rep.find("pivot-reason"), std::string::npos);
}

TEST(Pipeline, Deterministic) {
  Network n = load("appendix_a.net");
  Solution a = solve(n), b = solve(n);
  EXPECT_EQ(a.flow, b.flow);
  EXPECT_EQ(format_report(a), format_report(b));
  EXPECT_EQ(format_trace(a.stages.back().net, a.trace), format_trace(b.stages.back().net, b.trace));
  for (std::size_t i = 0; i < a.stages.size(); ++i) EXPECT_EQ(a.stages[i].flow, b.stages[i].flow);
}

TEST(Pipeline, InfiniteRouteHasNoStableFlow) {
  Network n = chain(Mapping::linear(2), Capacity::infinite(), Capacity::infinite());
  EXPECT_THROW(solve(n), ModelError);
  // One finite edge on every route is enough.
  n.add_vertex("w");
  EXPECT_THROW(solve(n), ModelError);
}

// Layered network whose augmentation stalls; its infinite end edges get
// finite stand-ins so pivoting can run on it directly.
TEST(Pipeline, LayeredStallPivotsWithBoundedCapacities) {
  Network n = parse_network(
      "source s\n"
      "vertex v1 slopes 3/4 7/4 13/4 breaks 3 10/3\n"
      "vertex v2 slopes 2 start 1/2\n"
      "vertex v3 slopes 3/2 start 1\n"
      "vertex v4 slopes 1 3 7/2 start 1 breaks 5/4 13/4\n"
      "sink t\n"
      "edge s v1 2\nedge s v3 7/4\nedge v1 v2 5\nedge v2 v1 3\nedge v2 t 14/3\n"
      "edge v3 v1 2/3\nedge v4 v2 1\nedge v4 v3 3\nedge v4 t 5/4\n"
      "in v1 v2 s v3\nout v1 v2\nin v2 v1 v4\nout v2 t v1\nin v3 s v4\nout v3 v1\nout v4 v2 t v3\n");
  Network lm = mplm_to_lm(n).net;
  Network layered = cyclic_to_acyclic(lm).net;
  ASSERT_FALSE(layered.all_finite());
  ASSERT_TRUE(run(layered).stall.has_value());
  Solution sol = solve(layered);
  EXPECT_EQ(sol.report.method, "pivot");
  EXPECT_EQ(sol.report.pivot_stage, "input");
  EXPECT_TRUE(check_flow(layered, sol.flow).feasible());
  EXPECT_TRUE(is_stable(layered, sol.flow).stable());
}

TEST(Pipeline, RejectsInvalidNetworks) {
  Network n = single_edge(Rational(5));
  n.add_vertex("loose");
  EXPECT_THROW(solve(n), ModelError);
}

}  // namespace
