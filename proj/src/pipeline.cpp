#include "sflow/pipeline.hpp"

#include <optional>
#include <sstream>
#include <stdexcept>

#include "sflow/reduction.hpp"
#include "sflow/scarf.hpp"

namespace sflow {

namespace {

// Copy of n with every infinite capacity replaced by a value above anything a
// feasible flow can put on that edge; nullopt when some edge has no such
// bound. Stability only asks whether an edge has room, so the copy has the
// same stable flows.
std::optional<Network> bounded_copy(const Network& n) {
  Network b = n;
  auto total = [&](const std::vector<EdgeId>& es) -> std::optional<Rational> {
    Rational sum = 0;
    for (EdgeId e : es) {
      if (!b.edge_at(e).cap.is_finite()) return std::nullopt;
      sum += b.edge_at(e).cap.value();
    }
    return sum;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (EdgeId e = 0; e < b.edge_count(); ++e) {
      const Edge& edge = b.edge_at(e);
      if (edge.cap.is_finite()) continue;
      std::optional<Rational> bound;
      if (edge.tail != b.source())
        if (auto in = total(b.in_edges(edge.tail))) bound = b.mapping(edge.tail).eval(*in);
      if (edge.head != b.sink())
        if (auto out = total(b.out_edges(edge.head))) {
          Rational x = b.mapping(edge.head).inverse(*out);
          bound = bound ? min(*bound, x) : x;
        }
      if (!bound) continue;
      b.set_capacity(e, Rational(*bound + 1));
      changed = true;
    }
  }
  if (!b.all_finite()) return std::nullopt;
  return b;
}

// The network Scarf pivoting runs on, if n has one.
std::optional<Network> scarf_network(const Network& n) {
  for (VertexId v : n.inner_vertices())
    if (n.mapping(v).classify() == MappingClass::MPLM) return std::nullopt;
  return bounded_copy(n);
}

bool idle_below_jump(const Network& n, const Flow& f) {
  for (VertexId v : n.inner_vertices())
    if (inflow(n, f, v) == 0 && outflow(n, f, v) < n.mapping(v).pseudo_start) return true;
  return false;
}

Flow pivot_flow(const Network& bounded, const std::string& why) {
  ScarfInstance inst = build_scarf(bounded);
  auto x = scarf_pivot(inst);
  if (!x) throw std::logic_error("pivoting gave up: " + why);
  return scarf_to_flow(inst, *x, bounded);
}

// Whether t is reachable from s along edges of infinite capacity.
bool unbounded_path(const Network& n) {
  std::vector<bool> seen(n.vertex_count(), false);
  std::vector<VertexId> todo = {n.source()};
  seen[n.source()] = true;
  while (!todo.empty()) {
    VertexId v = todo.back();
    todo.pop_back();
    for (EdgeId e : n.out_edges(v)) {
      const Edge& edge = n.edge_at(e);
      if (edge.cap.is_finite() || seen[edge.head]) continue;
      seen[edge.head] = true;
      todo.push_back(edge.head);
    }
  }
  return seen[n.sink()];
}

}  // namespace

Solution solve(const Network& n) {
  n.validate();
  if (unbounded_path(n)) throw ModelError("no stable flow: s reaches t along edges of infinite capacity");
  Solution sol;
  for (VertexId v : n.inner_vertices()) sol.report.segments += n.mapping(v).segments();

  std::vector<ReductionMap> maps;
  sol.stages.push_back({"input", n, {}});
  if (!n.all_lm()) {
    Reduction r = mplm_to_lm(sol.stages.back().net);
    maps.push_back(std::move(r.map));
    sol.stages.push_back({"lm", std::move(r.net), {}});
  }
  if (detect_cycles(sol.stages.back().net)) {
    Reduction r = cyclic_to_acyclic(sol.stages.back().net);
    maps.push_back(std::move(r.map));
    sol.stages.push_back({"acyclic", std::move(r.net), {}});
  }

  RunResult rr = run(sol.stages.back().net);
  sol.report.iterations = rr.iterations;
  sol.report.longest_path = rr.longest_path;
  sol.trace = std::move(rr.trace);
  sol.stages.back().flow = std::move(rr.flow);
  std::size_t top = sol.stages.size() - 1;
  if (rr.stall) {
    // Pivot on the deepest stage that has a Scarf instance; stages below it
    // keep the flow the solver stalled at.
    std::optional<Network> bounded;
    while (!(bounded = scarf_network(sol.stages[top].net))) {
      if (top == 0) throw std::logic_error("solver stalled: " + *rr.stall);
      --top;
    }
    sol.report.method = "pivot";
    sol.report.pivot_reason = *rr.stall;
    sol.report.pivot_stage = sol.stages[top].name;
    sol.stages[top].flow = pivot_flow(*bounded, *rr.stall);
  }
  for (std::size_t i = top; i > 0; --i) sol.stages[i - 1].flow = pullback(maps[i - 1], sol.stages[i].flow);
  sol.flow = sol.stages.front().flow;

  // A vertex with no inflow that sends less than its jump is not blocked by
  // any path, but then no Scarf point dominates the flow. Pivoting on the
  // input gives a flow that is stable in both senses.
  std::optional<Network> bounded;
  if (!(rr.stall && top == 0) && idle_below_jump(n, sol.flow) && (bounded = scarf_network(n))) {
    ScarfInstance inst = build_scarf(*bounded);
    if (!check_dominance(inst, flow_to_scarf(*bounded, sol.flow)).all()) {
      const char* why = "zero-inflow vertex below its jump";
      sol.report.method = "pivot";
      if (sol.report.pivot_reason.empty()) sol.report.pivot_reason = why;
      sol.report.pivot_stage = sol.stages.front().name;
      sol.flow = sol.stages.front().flow = pivot_flow(*bounded, why);
    }
  }

  StabilityReport check = is_stable(n, sol.flow);
  sol.report.verdict = check.verdict;
  if (!check.stable())
    throw std::logic_error(std::string("solver output is ") + to_string(check.verdict) + "\n" +
                           format_trace(sol.stages.back().net, sol.trace));
  return sol;
}

std::string format_report(const Solution& s) {
  std::ostringstream os;
  for (const Stage& st : s.stages)
    os << "stage " << st.name << " vertices " << st.net.vertex_count() << " edges " << st.net.edge_count() << '\n';
  os << "segments " << s.report.segments << '\n';
  os << "method " << s.report.method << '\n';
  if (!s.report.pivot_reason.empty())
    os << "pivot-reason " << s.report.pivot_reason << "\npivot-stage " << s.report.pivot_stage << '\n';
  os << "iterations " << s.report.iterations << '\n';
  os << "longest-path " << s.report.longest_path << '\n';
  os << "verdict " << to_string(s.report.verdict) << '\n';
  return os.str();
}

ComplexityStats complexity_probe(const Network& n) {
  Solution sol = solve(n);
  ComplexityStats c;
  c.vertices = n.vertex_count();
  c.edges = n.edge_count();
  c.segments = sol.report.segments;
  c.reduced_vertices = sol.stages.back().net.vertex_count();
  c.reduced_edges = sol.stages.back().net.edge_count();
  c.iterations = sol.report.iterations;
  c.longest_path = sol.report.longest_path;
  c.within_bound = c.iterations <= 2 * c.reduced_edges;
  return c;
}

}  // namespace sflow
