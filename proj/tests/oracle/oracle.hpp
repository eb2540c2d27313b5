// Test-side reference computations, written independently of the library
// internals: straightforward formulas and exhaustive enumeration.
#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "sflow/model.hpp"

namespace oracle {

using sflow::Capacity;
using sflow::EdgeId;
using sflow::Flow;
using sflow::Mapping;
using sflow::Network;
using sflow::Rational;
using sflow::VertexId;

// g(x) as the pseudo start plus the contribution of each segment clipped to
// its interval. At x = 0 this is the top of the admissible interval.
inline Rational seg_eval(const Mapping& m, const Rational& x) {
  Rational y = m.pseudo_start;
  Rational lo = 0;
  for (std::size_t i = 0; i < m.slopes.size(); ++i) {
    Rational part = x - lo;
    if (i < m.breakpoints.size()) part = std::min(part, Rational(m.breakpoints[i] - lo));
    if (part > 0) y += m.slopes[i] * part;
    if (i < m.breakpoints.size()) lo = m.breakpoints[i];
  }
  return y;
}

inline Rational sum_in(const Network& n, const Flow& f, VertexId v) {
  Rational s = 0;
  for (EdgeId e = 0; e < n.edge_count(); ++e)
    if (n.edge_at(e).head == v) s += f[e];
  return s;
}

inline Rational sum_out(const Network& n, const Flow& f, VertexId v) {
  Rational s = 0;
  for (EdgeId e = 0; e < n.edge_count(); ++e)
    if (n.edge_at(e).tail == v) s += f[e];
  return s;
}

inline bool feasible(const Network& n, const Flow& f) {
  if (f.size() != n.edge_count()) return false;
  for (EdgeId e = 0; e < n.edge_count(); ++e) {
    if (f[e] < 0) return false;
    const Capacity& c = n.edge_at(e).cap;
    if (c.is_finite() && f[e] > c.value()) return false;
  }
  for (VertexId v = 0; v < n.vertex_count(); ++v) {
    if (v == n.source() || v == n.sink()) continue;
    Rational in = sum_in(n, f, v), out = sum_out(n, f, v);
    const Mapping& m = n.mapping(v);
    if (in == 0) {
      if (out < 0 || out > m.pseudo_start) return false;
    } else if (out != seg_eval(m, in)) {
      return false;
    }
  }
  return true;
}

inline std::size_t rank_of(const std::vector<EdgeId>& order, EdgeId e) {
  return std::find(order.begin(), order.end(), e) - order.begin();
}

// Exhaustive search for a simple blocking path with at most max_len vertices, using
// the concrete first amount r_1 = eps. Intermediate amounts follow the vertex
// mappings evaluated against the unchanged flow.
inline std::optional<std::vector<VertexId>> simple_blocking_path(const Network& n, const Flow& f, std::size_t max_len,
                                                                 const Rational& eps = sflow::make_rational(1, 1000000000000L)) {
  const std::size_t V = n.vertex_count();
  std::vector<Rational> fin(V), fout(V);
  for (VertexId v = 0; v < V; ++v) {
    fin[v] = sum_in(n, f, v);
    fout[v] = sum_out(n, f, v);
  }
  auto room = [&](EdgeId e, const Rational& r) {
    const Capacity& c = n.edge_at(e).cap;
    return c.is_infinite() || r <= c.value() - f[e];
  };
  auto ends_here = [&](VertexId w, EdgeId via) {
    if (w == n.sink()) return true;
    const auto& order = n.in_pref(w);
    for (EdgeId e : n.in_edges(w))
      if (e != via && f[e] > 0 && rank_of(order, via) < rank_of(order, e)) return true;
    return false;
  };
  std::vector<VertexId> walk;
  std::optional<std::vector<VertexId>> hit;
  std::function<void(VertexId, EdgeId, Rational)> go = [&](VertexId w, EdgeId via, Rational r) {
    if (hit) return;
    walk.push_back(w);
    if (ends_here(w, via)) {
      hit = walk;
    } else if (w != n.sink() && walk.size() < max_len) {
      Rational next = seg_eval(n.mapping(w), fin[w] + r) - fout[w];
      if (next > 0)
        for (EdgeId e : n.out_edges(w))
          if (room(e, next) && std::find(walk.begin(), walk.end(), n.edge_at(e).head) == walk.end())
            go(n.edge_at(e).head, e, next);
    }
    walk.pop_back();
  };
  for (VertexId v = 0; v < V && !hit; ++v) {
    if (v == n.sink()) continue;
    const auto& order = n.out_pref(v);
    for (EdgeId e : n.out_edges(v)) {
      bool start = v == n.source();
      if (!start)
        for (EdgeId d : n.out_edges(v))
          if (d != e && f[d] > 0 && rank_of(order, e) < rank_of(order, d)) start = true;
      if (!start || !room(e, eps) || n.edge_at(e).head == v) continue;
      walk = {v};
      go(n.edge_at(e).head, e, eps);
      if (hit) break;
    }
  }
  return hit;
}

// Random rational p/q with q in 1..4 and value in [lo, hi].
inline Rational rational_in(std::mt19937& rng, int lo, int hi) {
  int q = std::uniform_int_distribution<int>(1, 4)(rng);
  int p = std::uniform_int_distribution<int>(lo * q, hi * q)(rng);
  return sflow::make_rational(p, q);
}

inline Rational positive_rational(std::mt19937& rng, int hi) {
  Rational r;
  do r = rational_in(rng, 0, hi);
  while (r <= 0);
  return r;
}

inline bool coin(std::mt19937& rng, double p) { return std::bernoulli_distribution(p)(rng); }

// k segments; convex when `convex` (slopes strictly increasing).
inline Mapping random_mapping(std::mt19937& rng, std::size_t k, bool convex, bool offset) {
  Mapping m;
  m.pseudo_start = offset && coin(rng, 0.5) ? rational_in(rng, 0, 2) : Rational(0);
  Rational c = 0;
  for (std::size_t i = 0; i < k; ++i) {
    Rational a = positive_rational(rng, 3);
    if (convex && i > 0) a = m.slopes.back() + positive_rational(rng, 2);
    m.slopes.push_back(a);
    if (i + 1 < k) {
      c += positive_rational(rng, 3);
      m.breakpoints.push_back(c);
    }
  }
  return m;
}

template <class T>
void shuffle_list(std::mt19937& rng, std::vector<T>& v) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[std::uniform_int_distribution<std::size_t>(0, i - 1)(rng)]);
}

struct NetSpec {
  std::size_t max_inner = 8;
  std::size_t max_segments = 1;
  bool convex = false;
  bool offsets = true;
  bool cycles = false;
  bool infinite = false;  // allow inf capacities
  double density = 0.35;
};

// Random network; inner vertices are numbered in an order that edges follow
// unless cycles are allowed. Every inner vertex gets at least one out-edge.
inline Network random_network(std::mt19937& rng, const NetSpec& spec) {
  Network n;
  std::size_t k = std::uniform_int_distribution<std::size_t>(1, spec.max_inner)(rng);
  VertexId s = n.add_vertex("s");
  std::vector<VertexId> inner;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t segs = std::uniform_int_distribution<std::size_t>(1, spec.max_segments)(rng);
    inner.push_back(n.add_vertex("v" + std::to_string(i + 1), random_mapping(rng, segs, spec.convex, spec.offsets)));
  }
  VertexId t = n.add_vertex("t");
  n.set_source(s);
  n.set_sink(t);
  auto cap = [&]() -> Capacity {
    if (spec.infinite && coin(rng, 0.1)) return Capacity::infinite();
    return coin(rng, 0.05) ? Rational(0) : positive_rational(rng, 6);
  };
  for (std::size_t i = 0; i < k; ++i)
    if (i == 0 || coin(rng, 0.5)) n.add_edge(s, inner[i], cap());
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j || (!spec.cycles && j < i)) continue;
      if (coin(rng, spec.density)) n.add_edge(inner[i], inner[j], cap());
    }
    if (n.out_edges(inner[i]).empty() || coin(rng, 0.5)) n.add_edge(inner[i], t, cap());
  }
  for (VertexId v : inner) {
    auto in = n.in_edges(v);
    auto out = n.out_edges(v);
    shuffle_list(rng, in);
    shuffle_list(rng, out);
    if (!in.empty()) n.set_in_pref(v, in);
    n.set_out_pref(v, out);
  }
  n.validate();
  return n;
}

}  // namespace oracle
