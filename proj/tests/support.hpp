#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "sflow/io.hpp"
#include "sflow/model.hpp"

namespace testing_support {

using namespace sflow;

inline Rational q(long p, long d = 1) { return make_rational(p, d); }

inline std::string data_path(const std::string& name) { return std::string(SFLOW_DATA_DIR) + "/" + name; }

inline Network load(const std::string& name) { return parse_network(read_file(data_path(name))); }

struct EdgeValue {
  std::string tail, head;
  Rational value;
};

inline Flow flow_of(const Network& n, const std::vector<EdgeValue>& values) {
  Flow f = zero_flow(n);
  for (const auto& ev : values) f[n.edge(ev.tail, ev.head)] = ev.value;
  return f;
}

inline Rational at(const Network& n, const Flow& f, const std::string& a, const std::string& b) {
  return f[n.edge(a, b)];
}

// s -> v -> t with a single mapping on v.
inline Network chain(const Mapping& m, Capacity c1, Capacity c2) {
  Network n;
  VertexId s = n.add_vertex("s");
  VertexId v = n.add_vertex("v", m);
  VertexId t = n.add_vertex("t");
  n.set_source(s);
  n.set_sink(t);
  n.add_edge(s, v, c1);
  n.add_edge(v, t, c2);
  return n;
}

inline Network single_edge(Capacity c) {
  Network n;
  VertexId s = n.add_vertex("s");
  VertexId t = n.add_vertex("t");
  n.set_source(s);
  n.set_sink(t);
  n.add_edge(s, t, c);
  return n;
}

// s -> v1 -> {v2, v3}, v2 -> v3 -> t; v2 halves its inflow.
inline Network halving_network() {
  Network n;
  VertexId s = n.add_vertex("s");
  VertexId v1 = n.add_vertex("v1");
  VertexId v2 = n.add_vertex("v2", Mapping::linear(q(1, 2)));
  VertexId v3 = n.add_vertex("v3");
  VertexId t = n.add_vertex("t");
  n.set_source(s);
  n.set_sink(t);
  n.add_edge(s, v1, Rational(10));
  EdgeId v1v2 = n.add_edge(v1, v2, Rational(4));
  EdgeId v1v3 = n.add_edge(v1, v3, Rational(9));
  EdgeId v2v3 = n.add_edge(v2, v3, Rational(4));
  n.add_edge(v3, t, Rational(9));
  n.set_out_pref(v1, {v1v3, v1v2});
  n.set_in_pref(v3, {v2v3, v1v3});
  return n;
}

}  // namespace testing_support
