#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "sflow/rational.hpp"

namespace sflow {

using VertexId = std::size_t;
using EdgeId = std::size_t;

// Thrown for malformed networks, flows and instances. `line` is 0 when the
// problem did not come from a parsed document.
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& what, std::size_t line = 0);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class MappingClass { LM, CMPLM, MPLM };

const char* to_string(MappingClass c);

struct Line {
  Rational slope;
  Rational offset;
  Rational at(const Rational& x) const { return slope * x + offset; }
};

// Monotone piecewise-linear vertex mapping. Segment i covers
// (breakpoints[i-1], breakpoints[i]] with implicit 0 and +inf at the ends.
// At inflow 0 the admissible outflow is the interval [0, pseudo_start].
struct Mapping {
  std::vector<Rational> slopes;
  Rational pseudo_start{0};
  std::vector<Rational> breakpoints;

  static Mapping identity();
  static Mapping linear(const Rational& slope, const Rational& offset = 0);

  std::size_t segments() const { return slopes.size(); }

  // Throws ModelError when the spec is malformed.
  void validate() const;

  // g(0) is reported as pseudo_start, the top of the admissible interval.
  Rational eval(const Rational& x) const;

  // 0 when y <= pseudo_start, otherwise the unique x > 0 with eval(x) = y.
  Rational inverse(const Rational& y) const;

  MappingClass classify() const;

  // g_i(x) = slopes[i] * x + offsets[i], the extension of segment i.
  std::vector<Line> segment_lines() const;

  // Index of the segment that holds (x, x + eps] for small eps > 0.
  std::size_t right_segment(const Rational& x) const;

  // Lower end of segment i (0 for the first one).
  Rational segment_start(std::size_t i) const;

  bool admits(const Rational& in, const Rational& out) const;

  friend bool operator==(const Mapping&, const Mapping&) = default;
};

struct Edge {
  VertexId tail;
  VertexId head;
  Capacity cap;
};

// Directed network with a distinguished source and sink. Vertex ids index
// `names`; s and t are ordinary ids whose mappings are ignored.
class Network {
 public:
  VertexId add_vertex(const std::string& name, Mapping m = Mapping::identity());
  EdgeId add_edge(VertexId tail, VertexId head, Capacity cap);
  void set_capacity(EdgeId e, Capacity cap) { edges_[e].cap = std::move(cap); }
  void set_source(VertexId v) { s_ = v; }
  void set_sink(VertexId v) { t_ = v; }

  // Lists run from most to least preferred. Edges absent from an explicit
  // list make validate() fail; a missing list means declaration order.
  void set_in_pref(VertexId v, std::vector<EdgeId> order);
  void set_out_pref(VertexId v, std::vector<EdgeId> order);

  // Free-form provenance note kept through serialization.
  void set_vertex_origin(VertexId v, std::string text) { vertex_origin_[v] = std::move(text); }
  void set_edge_origin(EdgeId e, std::string text) { edge_origin_[e] = std::move(text); }
  const std::string& vertex_origin(VertexId v) const { return vertex_origin_[v]; }
  const std::string& edge_origin(EdgeId e) const { return edge_origin_[e]; }

  std::size_t vertex_count() const { return names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  VertexId source() const { return s_; }
  VertexId sink() const { return t_; }
  bool is_terminal(VertexId v) const { return v == s_ || v == t_; }

  const std::string& name(VertexId v) const { return names_[v]; }
  std::optional<VertexId> find_vertex(const std::string& name) const;
  VertexId vertex(const std::string& name) const;
  std::optional<EdgeId> find_edge(VertexId tail, VertexId head) const;
  EdgeId edge(const std::string& tail, const std::string& head) const;

  const Edge& edge_at(EdgeId e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Mapping& mapping(VertexId v) const { return mappings_[v]; }
  void set_mapping(VertexId v, Mapping m) { mappings_[v] = std::move(m); }

  // Incident edges in declaration order.
  const std::vector<EdgeId>& out_edges(VertexId v) const { return out_[v]; }
  const std::vector<EdgeId>& in_edges(VertexId v) const { return in_[v]; }

  // Preference views, most preferred first.
  const std::vector<EdgeId>& in_pref(VertexId v) const;
  const std::vector<EdgeId>& out_pref(VertexId v) const;
  bool has_explicit_in_pref(VertexId v) const { return !in_pref_[v].empty(); }
  bool has_explicit_out_pref(VertexId v) const { return !out_pref_[v].empty(); }

  // True when v ranks a strictly above b. Both must be incident to v on the
  // same side.
  bool prefers(VertexId v, EdgeId a, EdgeId b) const;

  // Vertices other than s and t, in id order.
  std::vector<VertexId> inner_vertices() const;

  Capacity in_capacity(VertexId v) const;
  Capacity out_capacity(VertexId v) const;

  bool all_finite() const;
  bool all_lm() const;

  // Structural checks: terminals set, no self-loops or parallel edges,
  // s without in-edges, t without out-edges, nonnegative capacities,
  // valid mappings and preference permutations.
  void validate() const;

  friend bool operator==(const Network& a, const Network& b);

 private:
  void ensure_rank() const;

  std::vector<std::string> names_;
  std::unordered_map<std::string, VertexId> by_name_;
  std::vector<Mapping> mappings_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_, in_;
  std::vector<std::vector<EdgeId>> in_pref_, out_pref_;
  std::vector<std::string> vertex_origin_, edge_origin_;
  VertexId s_ = static_cast<VertexId>(-1);
  VertexId t_ = static_cast<VertexId>(-1);
  std::unordered_map<std::size_t, std::size_t> edge_index_;
  mutable std::vector<std::size_t> in_rank_, out_rank_;
  mutable bool rank_valid_ = false;
};

// Flow value per edge id.
using Flow = std::vector<Rational>;

Flow zero_flow(const Network& n);
Rational inflow(const Network& n, const Flow& f, VertexId v);
Rational outflow(const Network& n, const Flow& f, VertexId v);

struct EdgeViolation {
  EdgeId edge;
  Rational value;
};

struct VertexViolation {
  VertexId vertex;
  Rational in;
  Rational out;
  Rational expected;  // g(in); for in == 0 the upper bound of the interval
};

struct FeasibilityReport {
  std::vector<EdgeViolation> capacity;
  std::vector<VertexViolation> balance;
  bool feasible() const { return capacity.empty() && balance.empty(); }
};

// Throws ModelError if f does not assign exactly the edges of n.
FeasibilityReport check_flow(const Network& n, const Flow& f);

}  // namespace sflow
