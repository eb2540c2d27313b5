#include "sflow/reduction.hpp"

#include <deque>

namespace sflow {

const char* to_string(ReductionKind k) {
  return k == ReductionKind::MplmToLm ? "mplm-to-lm" : "cyclic-to-acyclic";
}

Reduction mplm_to_lm(const Network& n) {
  n.validate();
  Reduction red;
  Network& out = red.net;
  red.map.kind = ReductionKind::MplmToLm;
  red.map.original_edges = n.edge_count();
  red.map.gadgets.resize(n.vertex_count());

  std::vector<VertexId> v_in(n.vertex_count()), v_out(n.vertex_count());
  std::vector<std::vector<VertexId>> parts(n.vertex_count());
  for (VertexId v = 0; v < n.vertex_count(); ++v) {
    const std::string& name = n.name(v);
    if (n.is_terminal(v)) {
      VertexId id = out.add_vertex(name);
      out.set_vertex_origin(id, name);
      v_in[v] = v_out[v] = id;
      red.map.gadgets[v] = {id};
      continue;
    }
    const Mapping& m = n.mapping(v);
    if (m.segments() > 1 && n.in_capacity(v).is_infinite())
      throw ModelError("vertex '" + name + "' has unbounded inflow and several segments");
    v_in[v] = out.add_vertex(name + ".in");
    out.set_vertex_origin(v_in[v], name);
    red.map.gadgets[v].push_back(v_in[v]);
    for (std::size_t i = 0; i < m.segments(); ++i) {
      VertexId p = out.add_vertex(name + "." + std::to_string(i + 1), Mapping::linear(m.slopes[i]));
      out.set_vertex_origin(p, name);
      parts[v].push_back(p);
      red.map.gadgets[v].push_back(p);
    }
    v_out[v] = out.add_vertex(name + ".out", Mapping::linear(1, m.pseudo_start));
    out.set_vertex_origin(v_out[v], name);
    red.map.gadgets[v].push_back(v_out[v]);
  }
  if (n.source() < n.vertex_count()) out.set_source(v_out[n.source()]);
  if (n.sink() < n.vertex_count()) out.set_sink(v_in[n.sink()]);

  red.map.edge_map.resize(n.edge_count());
  for (EdgeId e = 0; e < n.edge_count(); ++e) {
    const Edge& ed = n.edge_at(e);
    red.map.edge_map[e] = out.add_edge(v_out[ed.tail], v_in[ed.head], ed.cap);
    out.set_edge_origin(red.map.edge_map[e], n.name(ed.tail) + " " + n.name(ed.head));
  }
  for (VertexId v : n.inner_vertices()) {
    const Mapping& m = n.mapping(v);
    const std::size_t k = m.segments();
    for (std::size_t i = 0; i < k; ++i) {
      Capacity width;
      if (i + 1 < k) {
        width = Capacity(Rational(m.breakpoints[i] - m.segment_start(i)));
      } else {
        Capacity total = n.in_capacity(v);
        if (total.is_infinite()) {
          width = total;
        } else {
          Rational rest = total.value() - m.segment_start(i);
          width = Capacity(rest > 0 ? rest : Rational(0));
        }
      }
      out.add_edge(v_in[v], parts[v][i], width);
      out.add_edge(parts[v][i], v_out[v], width * m.slopes[i]);
    }
    std::vector<EdgeId> in, outs;
    for (EdgeId e : n.in_pref(v)) in.push_back(red.map.edge_map[e]);
    for (EdgeId e : n.out_pref(v)) outs.push_back(red.map.edge_map[e]);
    if (n.has_explicit_in_pref(v)) out.set_in_pref(v_in[v], std::move(in));
    if (n.has_explicit_out_pref(v)) out.set_out_pref(v_out[v], std::move(outs));
  }
  red.map.reduced_edges = out.edge_count();
  out.validate();
  return red;
}

Reduction cyclic_to_acyclic(const Network& n) {
  n.validate();
  if (!n.all_lm()) throw ModelError("cyclic_to_acyclic needs an LM network; reduce to LM first");
  if (!n.all_finite()) throw ModelError("cyclic_to_acyclic needs finite capacities");
  ScarfInstance inst = build_scarf(n);
  LayeredNetwork ln = scarf_to_network(inst);
  Reduction red;
  red.map.kind = ReductionKind::CyclicToAcyclic;
  red.map.original_edges = n.edge_count();
  red.map.edge_map = ln.out_m;
  red.map.gadgets.resize(n.vertex_count());
  const Network& net = ln.net;
  red.map.gadgets[n.source()] = {net.source(), net.vertex(n.name(n.source()) + ".out")};
  red.map.gadgets[n.sink()] = {net.vertex(n.name(n.sink()) + ".in"), net.sink()};
  for (VertexId v : n.inner_vertices()) {
    const std::string& name = n.name(v);
    red.map.gadgets[v] = {net.vertex(name + ".out"), net.vertex("m1." + name), net.vertex("m2." + name),
                          net.vertex(name + ".in")};
  }
  red.map.reduced_edges = net.edge_count();
  red.net = std::move(ln.net);
  return red;
}

Flow pullback(const ReductionMap& rm, const Flow& reduced) {
  if (reduced.size() != rm.reduced_edges) throw ModelError("flow does not match the reduced network");
  Flow f(rm.original_edges);
  for (EdgeId e = 0; e < rm.original_edges; ++e) f[e] = reduced[rm.edge_map[e]];
  return f;
}

std::vector<VertexId> topological_order(const Network& n) {
  std::vector<std::size_t> indeg(n.vertex_count(), 0);
  for (const Edge& e : n.edges()) ++indeg[e.head];
  std::deque<VertexId> ready;
  for (VertexId v = 0; v < n.vertex_count(); ++v)
    if (indeg[v] == 0) ready.push_back(v);
  std::vector<VertexId> order;
  while (!ready.empty()) {
    VertexId v = ready.front();
    ready.pop_front();
    order.push_back(v);
    for (EdgeId e : n.out_edges(v))
      if (--indeg[n.edge_at(e).head] == 0) ready.push_back(n.edge_at(e).head);
  }
  if (order.size() != n.vertex_count()) return {};
  return order;
}

bool detect_cycles(const Network& n) { return n.vertex_count() > 0 && topological_order(n).empty(); }

}  // namespace sflow
