#include "sflow/scarf.hpp"

#include <algorithm>
#include <unordered_map>

namespace sflow {

std::size_t ScarfInstance::segment_row(std::size_t v, std::size_t i) const { return first_row_.at(v) + i; }

std::size_t ScarfInstance::out_row(std::size_t v) const {
  std::size_t r = first_row_.at(v);
  while (rows[r].kind != RowKind::Out) ++r;
  return r;
}

std::size_t ScarfInstance::segment_count(std::size_t v) const { return out_row(v) - first_row_.at(v); }

std::optional<std::size_t> ScarfInstance::vertex_index(const std::string& name) const {
  auto it = std::find(vertices.begin(), vertices.end(), name);
  if (it == vertices.end()) return std::nullopt;
  return static_cast<std::size_t>(it - vertices.begin());
}

std::string ScarfInstance::row_label(std::size_t r) const {
  const ScarfRow& row = rows[r];
  switch (row.kind) {
    case RowKind::Edge: return "e:" + edges[row.index].first + ":" + edges[row.index].second;
    case RowKind::Segment: return "v:" + vertices[row.index] + ":" + std::to_string(row.segment + 1);
    case RowKind::Out: return "out:" + vertices[row.index];
  }
  return "?";
}

std::string ScarfInstance::col_label(std::size_t c) const {
  const ScarfCol& col = cols[c];
  switch (col.kind) {
    case ColKind::Edge: return "x:" + edges[col.index].first + ":" + edges[col.index].second;
    case ColKind::Slack1: return "x1:" + vertices[col.index];
    case ColKind::Slack2: return "x2:" + vertices[col.index];
  }
  return "?";
}

Rational ScarfInstance::entry(std::size_t r, std::size_t c) const {
  for (const auto& [col, val] : rows[r].entries)
    if (col == c) return val;
  return 0;
}

void ScarfInstance::index() {
  first_row_.assign(vertices.size(), rows.size());
  for (std::size_t r = rows.size(); r-- > 0;)
    if (rows[r].kind != RowKind::Edge) first_row_[rows[r].index] = r;
}

bool operator==(const ScarfInstance& a, const ScarfInstance& b) {
  if (a.source != b.source || a.sink != b.sink || a.vertices != b.vertices || a.edges != b.edges ||
      a.q != b.q || a.rows.size() != b.rows.size() || a.cols.size() != b.cols.size())
    return false;
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    const auto& x = a.rows[r];
    const auto& y = b.rows[r];
    if (x.kind != y.kind || x.index != y.index || x.segment != y.segment || x.b != y.b ||
        x.entries != y.entries || x.pref != y.pref)
      return false;
  }
  for (std::size_t c = 0; c < a.cols.size(); ++c)
    if (a.cols[c].kind != b.cols[c].kind || a.cols[c].index != b.cols[c].index) return false;
  return true;
}

namespace {

Rational padding(const Network& n, VertexId v) {
  Rational q = n.in_capacity(v).value();
  q = max(q, n.out_capacity(v).value());
  q = max(q, n.mapping(v).pseudo_start);
  return q + 1;
}

}  // namespace

ScarfInstance build_scarf(const Network& n) {
  n.validate();
  if (!n.all_finite()) throw ModelError("scarf instance needs finite capacities");
  ScarfInstance inst;
  inst.source = n.name(n.source());
  inst.sink = n.name(n.sink());
  std::vector<VertexId> inner = n.inner_vertices();
  std::unordered_map<VertexId, std::size_t> pos;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    VertexId v = inner[i];
    if (n.mapping(v).classify() == MappingClass::MPLM)
      throw ModelError("vertex '" + n.name(v) + "' has a non-convex mapping");
    pos[v] = i;
    inst.vertices.push_back(n.name(v));
    inst.q.push_back(padding(n, v));
  }
  const std::size_t E = n.edge_count();
  for (EdgeId e = 0; e < E; ++e) {
    const Edge& ed = n.edge_at(e);
    inst.edges.emplace_back(n.name(ed.tail), n.name(ed.head));
    inst.cols.push_back({ColKind::Edge, e});
  }
  for (std::size_t i = 0; i < inner.size(); ++i) {
    inst.cols.push_back({ColKind::Slack1, i});
    inst.cols.push_back({ColKind::Slack2, i});
  }
  for (EdgeId e = 0; e < E; ++e) {
    ScarfRow row{RowKind::Edge, e, 0, n.edge_at(e).cap.value(), {{e, 1}}, {e}};
    inst.rows.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < inner.size(); ++i) {
    VertexId v = inner[i];
    const Mapping& m = n.mapping(v);
    auto lines = m.segment_lines();
    for (std::size_t k = 0; k < lines.size(); ++k) {
      ScarfRow row{RowKind::Segment, i, k, inst.q[i] - lines[k].offset, {}, {}};
      for (EdgeId e : n.in_edges(v)) row.entries.emplace_back(e, lines[k].slope);
      row.entries.emplace_back(inst.slack1_col(i), 1);
      row.entries.emplace_back(inst.slack2_col(i), 1);
      row.pref.push_back(inst.slack1_col(i));
      for (EdgeId e : n.in_pref(v)) row.pref.push_back(e);
      row.pref.push_back(inst.slack2_col(i));
      inst.rows.push_back(std::move(row));
    }
    ScarfRow out{RowKind::Out, i, 0, inst.q[i], {}, {}};
    for (EdgeId e : n.out_edges(v)) out.entries.emplace_back(e, 1);
    out.entries.emplace_back(inst.slack1_col(i), 1);
    out.entries.emplace_back(inst.slack2_col(i), 1);
    out.pref.push_back(inst.slack2_col(i));
    for (EdgeId e : n.out_pref(v)) out.pref.push_back(e);
    out.pref.push_back(inst.slack1_col(i));
    inst.rows.push_back(std::move(out));
  }
  inst.index();
  return inst;
}

std::vector<Rational> row_activity(const ScarfInstance& inst, const ScarfPoint& x) {
  if (x.size() != inst.cols.size()) throw ModelError("point has wrong dimension");
  std::vector<Rational> act(inst.rows.size(), Rational(0));
  for (std::size_t r = 0; r < inst.rows.size(); ++r)
    for (const auto& [c, a] : inst.rows[r].entries) act[r] += a * x[c];
  return act;
}

bool in_polytope(const ScarfInstance& inst, const ScarfPoint& x) {
  if (x.size() != inst.cols.size()) return false;
  for (const auto& v : x)
    if (v < 0) return false;
  auto act = row_activity(inst, x);
  for (std::size_t r = 0; r < inst.rows.size(); ++r)
    if (act[r] > inst.rows[r].b) return false;
  return true;
}

namespace {

std::optional<std::size_t> dominating_row(const ScarfInstance& inst, const ScarfPoint& x,
                                          const std::vector<Rational>& act, std::size_t col) {
  for (std::size_t r = 0; r < inst.rows.size(); ++r) {
    const ScarfRow& row = inst.rows[r];
    if (act[r] != row.b) continue;
    auto me = std::find(row.pref.begin(), row.pref.end(), col);
    if (me == row.pref.end()) continue;
    bool ok = true;
    for (auto it = me + 1; it != row.pref.end(); ++it)
      if (x[*it] > 0) ok = false;
    if (ok) return r;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::size_t> dominates(const ScarfInstance& inst, const ScarfPoint& x, std::size_t col) {
  if (!in_polytope(inst, x)) throw ModelError("point is outside the polytope");
  return dominating_row(inst, x, row_activity(inst, x), col);
}

bool DominanceReport::all() const {
  return std::all_of(witness.begin(), witness.end(), [](const auto& w) { return w.has_value(); });
}

DominanceReport check_dominance(const ScarfInstance& inst, const ScarfPoint& x) {
  if (!in_polytope(inst, x)) throw ModelError("point is outside the polytope");
  auto act = row_activity(inst, x);
  DominanceReport rep;
  for (std::size_t c = 0; c < inst.cols.size(); ++c) rep.witness.push_back(dominating_row(inst, x, act, c));
  return rep;
}

Flow scarf_to_flow(const ScarfInstance& inst, const ScarfPoint& x, const Network& n) {
  if (inst.edges.size() != n.edge_count()) throw ModelError("instance does not match network");
  Flow f(n.edge_count());
  for (EdgeId e = 0; e < n.edge_count(); ++e) f[e] = x[inst.edge_col(e)];
  return f;
}

namespace {

bool tail_wants(const Network& n, const Flow& f, EdgeId e) {
  VertexId u = n.edge_at(e).tail;
  if (u == n.source()) return true;
  for (EdgeId o : n.out_edges(u))
    if (f[o] > 0 && n.prefers(u, e, o)) return true;
  return false;
}

bool head_wants(const Network& n, const Flow& f, EdgeId e) {
  VertexId w = n.edge_at(e).head;
  if (w == n.sink()) return true;
  for (EdgeId o : n.in_edges(w))
    if (f[o] > 0 && n.prefers(w, e, o)) return true;
  return false;
}

bool unsaturated(const Network& n, const Flow& f, EdgeId e) { return f[e] < n.edge_at(e).cap; }

}  // namespace

ScarfPoint flow_to_scarf(const Network& n, const Flow& f) {
  ScarfInstance inst = build_scarf(n);
  ScarfPoint x(inst.cols.size(), Rational(0));
  for (EdgeId e = 0; e < n.edge_count(); ++e) x[inst.edge_col(e)] = f[e];
  std::vector<VertexId> inner = n.inner_vertices();
  std::vector<std::size_t> pos(n.vertex_count(), inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) pos[inner[i]] = i;

  enum class Side { One, Two, Free };
  std::vector<Side> side(inner.size(), Side::Free);
  std::vector<bool> wanted_in(inner.size(), false), jump(inner.size(), false);
  for (std::size_t i = 0; i < inner.size(); ++i) {
    VertexId v = inner[i];
    for (EdgeId e : n.in_edges(v))
      if (unsaturated(n, f, e) && tail_wants(n, f, e)) wanted_in[i] = true;
    bool wanted_out = false;
    for (EdgeId e : n.out_edges(v))
      if (unsaturated(n, f, e) && head_wants(n, f, e)) wanted_out = true;
    jump[i] = !wanted_in[i] && !wanted_out && inflow(n, f, v) == 0 && outflow(n, f, v) < n.mapping(v).pseudo_start;
    if (wanted_in[i] || jump[i]) side[i] = Side::One;
    else if (wanted_out) side[i] = Side::Two;
  }

  // An unsaturated edge uv wanted by neither end is dominated by row u' only
  // if x1_u = 0, or by a segment row of v only if x2_v = 0. Slack of the
  // remaining vertices goes to x2 when that is forced from downstream, x1
  // otherwise.
  std::vector<std::size_t> work;
  for (std::size_t i = 0; i < inner.size(); ++i)
    if (side[i] == Side::Two) work.push_back(i);
  while (!work.empty()) {
    VertexId w = inner[work.back()];
    work.pop_back();
    for (EdgeId e : n.in_edges(w)) {
      std::size_t u = pos[n.edge_at(e).tail];
      if (u == inner.size() || side[u] != Side::Free) continue;
      if (!unsaturated(n, f, e) || tail_wants(n, f, e) || head_wants(n, f, e)) continue;
      side[u] = Side::Two;
      work.push_back(u);
    }
  }

  for (std::size_t i = 0; i < inner.size(); ++i) {
    VertexId v = inner[i];
    const Mapping& m = n.mapping(v);
    const Rational& q = inst.q[i];
    Rational fin = inflow(n, f, v);
    Rational& x1 = x[inst.slack1_col(i)];
    Rational& x2 = x[inst.slack2_col(i)];
    if (wanted_in[i]) {
      // Smallest segment whose line attains the maximum at fin.
      auto lines = m.segment_lines();
      std::size_t best = 0;
      for (std::size_t k = 1; k < lines.size(); ++k)
        if (lines[k].at(fin) > lines[best].at(fin)) best = k;
      x1 = q - lines[best].at(fin);
    } else {
      // Below the jump at zero inflow only the first segment row can bind.
      Rational used = outflow(n, f, v);
      if (fin == 0 && used < m.pseudo_start) used = m.pseudo_start;
      (side[i] == Side::Two ? x2 : x1) = q - used;
    }
  }
  return x;
}

LayeredNetwork scarf_to_network(const ScarfInstance& inst) {
  const std::size_t V = inst.vertices.size();
  const std::size_t E = inst.edges.size();
  for (std::size_t v = 0; v < V; ++v)
    if (inst.segment_count(v) != 1)
      throw ModelError("vertex '" + inst.vertices[v] + "' has more than one segment row");

  LayeredNetwork ln;
  Network& net = ln.net;
  auto named = [&](const std::string& name, const std::string& origin) {
    VertexId id = net.add_vertex(name);
    net.set_vertex_origin(id, origin);
    return id;
  };
  VertexId s = named(inst.source, inst.source);
  VertexId s_out = named(inst.source + ".out", inst.source);
  std::vector<VertexId> v_out(V), v_in(V), m1(V), m2(V), m_e(E);
  for (std::size_t v = 0; v < V; ++v) v_out[v] = named(inst.vertices[v] + ".out", inst.vertices[v]);
  for (std::size_t e = 0; e < E; ++e)
    m_e[e] = named("m." + inst.edges[e].first + "." + inst.edges[e].second,
                   inst.edges[e].first + " " + inst.edges[e].second);
  for (std::size_t v = 0; v < V; ++v) {
    m1[v] = named("m1." + inst.vertices[v], inst.vertices[v]);
    m2[v] = named("m2." + inst.vertices[v], inst.vertices[v]);
  }
  VertexId t_in = named(inst.sink + ".in", inst.sink);
  for (std::size_t v = 0; v < V; ++v) v_in[v] = named(inst.vertices[v] + ".in", inst.vertices[v]);
  VertexId t = named(inst.sink, inst.sink);
  net.set_source(s);
  net.set_sink(t);

  auto first_layer = [&](const std::string& name) {
    if (name == inst.source) return s_out;
    return v_out[*inst.vertex_index(name)];
  };
  auto third_layer = [&](const std::string& name) {
    if (name == inst.sink) return t_in;
    return v_in[*inst.vertex_index(name)];
  };

  ln.s_sout = net.add_edge(s, s_out, Capacity::infinite());
  ln.s_out.resize(V);
  for (std::size_t v = 0; v < V; ++v) ln.s_out[v] = net.add_edge(s, v_out[v], inst.rows[inst.out_row(v)].b);

  ln.out_m.resize(E);
  ln.m_in.resize(E);
  for (std::size_t e = 0; e < E; ++e) {
    const auto& [tail, head] = inst.edges[e];
    Rational be = inst.rows[inst.edge_row(e)].b;
    Rational a = 1;
    if (head != inst.sink) {
      std::size_t hv = *inst.vertex_index(head);
      a = inst.entry(inst.segment_row(hv, 0), inst.edge_col(e));
      net.set_mapping(m_e[e], Mapping::linear(a));
    }
    ln.out_m[e] = net.add_edge(first_layer(tail), m_e[e], be);
    net.set_edge_origin(ln.out_m[e], tail + " " + head);
    ln.m_in[e] = net.add_edge(m_e[e], third_layer(head), Rational(a * be));
  }

  ln.out_m1.resize(V);
  ln.m1_in.resize(V);
  ln.out_m2.resize(V);
  ln.m2_in.resize(V);
  for (std::size_t v = 0; v < V; ++v) {
    Rational bq = inst.rows[inst.out_row(v)].b;
    ln.out_m1[v] = net.add_edge(v_out[v], m1[v], bq);
    ln.m1_in[v] = net.add_edge(m1[v], v_in[v], bq);
    ln.out_m2[v] = net.add_edge(v_out[v], m2[v], bq);
    ln.m2_in[v] = net.add_edge(m2[v], v_in[v], bq);
  }
  ln.tin_t = net.add_edge(t_in, t, Capacity::infinite());
  ln.in_t.resize(V);
  for (std::size_t v = 0; v < V; ++v) ln.in_t[v] = net.add_edge(v_in[v], t, inst.rows[inst.segment_row(v, 0)].b);

  // Middle of each ranking follows the vertex's rows.
  for (std::size_t v = 0; v < V; ++v) {
    std::vector<EdgeId> out{ln.out_m2[v]};
    for (std::size_t c : inst.rows[inst.out_row(v)].pref)
      if (inst.cols[c].kind == ColKind::Edge) out.push_back(ln.out_m[inst.cols[c].index]);
    out.push_back(ln.out_m1[v]);
    net.set_out_pref(v_out[v], std::move(out));

    std::vector<EdgeId> in{ln.m1_in[v]};
    for (std::size_t c : inst.rows[inst.segment_row(v, 0)].pref)
      if (inst.cols[c].kind == ColKind::Edge) in.push_back(ln.m_in[inst.cols[c].index]);
    in.push_back(ln.m2_in[v]);
    net.set_in_pref(v_in[v], std::move(in));
  }
  net.validate();
  return ln;
}

ScarfPoint layered_flow_to_scarf(const LayeredNetwork& ln, const Flow& f) {
  const std::size_t E = ln.out_m.size();
  const std::size_t V = ln.s_out.size();
  ScarfPoint x(E + 2 * V);
  for (std::size_t e = 0; e < E; ++e) x[e] = f[ln.out_m[e]];
  for (std::size_t v = 0; v < V; ++v) {
    x[E + 2 * v] = f[ln.m1_in[v]];
    x[E + 2 * v + 1] = f[ln.out_m2[v]];
  }
  return x;
}

Flow scarf_to_layered_flow(const ScarfInstance& inst, const LayeredNetwork& ln, const ScarfPoint& x) {
  const std::size_t E = inst.edges.size();
  const std::size_t V = inst.vertices.size();
  Flow f = zero_flow(ln.net);
  std::vector<Rational> out_sum(V, Rational(0)), in_sum(V, Rational(0));
  for (std::size_t e = 0; e < E; ++e) {
    const auto& [tail, head] = inst.edges[e];
    Rational xe = x[inst.edge_col(e)];
    Rational a = 1;
    if (head != inst.sink) {
      std::size_t hv = *inst.vertex_index(head);
      a = inst.entry(inst.segment_row(hv, 0), inst.edge_col(e));
      in_sum[hv] += a * xe;
    } else {
      f[ln.tin_t] += xe;
    }
    if (tail != inst.source)
      out_sum[*inst.vertex_index(tail)] += xe;
    else
      f[ln.s_sout] += xe;
    f[ln.out_m[e]] = xe;
    f[ln.m_in[e]] = a * xe;
  }
  for (std::size_t v = 0; v < V; ++v) {
    const Rational& x1 = x[inst.slack1_col(v)];
    const Rational& x2 = x[inst.slack2_col(v)];
    f[ln.out_m1[v]] = x1;
    f[ln.m1_in[v]] = x1;
    f[ln.out_m2[v]] = x2;
    f[ln.m2_in[v]] = x2;
    f[ln.s_out[v]] = out_sum[v] + x1 + x2;
    f[ln.in_t[v]] = in_sum[v] + x1 + x2;
  }
  return f;
}

}  // namespace sflow
