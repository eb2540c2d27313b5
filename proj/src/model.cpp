#include "sflow/model.hpp"

#include <algorithm>

namespace sflow {

ModelError::ModelError(const std::string& what, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

const char* to_string(MappingClass c) {
  switch (c) {
    case MappingClass::LM: return "LM";
    case MappingClass::CMPLM: return "CMPLM";
    case MappingClass::MPLM: return "MPLM";
  }
  return "?";
}

Mapping Mapping::identity() { return linear(1, 0); }

Mapping Mapping::linear(const Rational& slope, const Rational& offset) {
  Mapping m;
  m.slopes = {slope};
  m.pseudo_start = offset;
  return m;
}

void Mapping::validate() const {
  if (slopes.empty()) throw ModelError("mapping needs at least one segment");
  if (breakpoints.size() + 1 != slopes.size())
    throw ModelError("mapping with " + std::to_string(slopes.size()) + " segments needs " +
                     std::to_string(slopes.size() - 1) + " breakpoints");
  for (const auto& a : slopes)
    if (a <= 0) throw ModelError("slope must be positive");
  if (pseudo_start < 0) throw ModelError("pseudo start must be nonnegative");
  Rational prev = 0;
  for (const auto& c : breakpoints) {
    if (c <= prev) throw ModelError("breakpoints must be positive and strictly increasing");
    prev = c;
  }
}

Rational Mapping::eval(const Rational& x) const {
  Rational value = pseudo_start;
  Rational prev = 0;
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    if (i == breakpoints.size() || x <= breakpoints[i]) return value + slopes[i] * (x - prev);
    value += slopes[i] * (breakpoints[i] - prev);
    prev = breakpoints[i];
  }
  return value;  // unreachable for a valid mapping
}

Rational Mapping::inverse(const Rational& y) const {
  if (y <= pseudo_start) return 0;
  Rational value = pseudo_start;
  Rational prev = 0;
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    if (i < breakpoints.size()) {
      Rational end_value = value + slopes[i] * (breakpoints[i] - prev);
      if (y > end_value) {
        value = end_value;
        prev = breakpoints[i];
        continue;
      }
    }
    return prev + (y - value) / slopes[i];
  }
  return prev;
}

MappingClass Mapping::classify() const {
  if (slopes.size() == 1) return MappingClass::LM;
  for (std::size_t i = 1; i < slopes.size(); ++i)
    if (slopes[i] <= slopes[i - 1]) return MappingClass::MPLM;
  return MappingClass::CMPLM;
}

std::vector<Line> Mapping::segment_lines() const {
  std::vector<Line> lines;
  lines.reserve(slopes.size());
  Rational offset = pseudo_start;
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    if (i > 0) offset -= (slopes[i] - slopes[i - 1]) * breakpoints[i - 1];
    lines.push_back({slopes[i], offset});
  }
  return lines;
}

std::size_t Mapping::right_segment(const Rational& x) const {
  std::size_t i = 0;
  while (i < breakpoints.size() && breakpoints[i] <= x) ++i;
  return i;
}

Rational Mapping::segment_start(std::size_t i) const { return i == 0 ? Rational(0) : breakpoints[i - 1]; }

bool Mapping::admits(const Rational& in, const Rational& out) const {
  if (in == 0) return out >= 0 && out <= pseudo_start;
  return out == eval(in);
}

namespace {

std::size_t edge_key(VertexId tail, VertexId head) { return (tail << 32) ^ head; }

}  // namespace

VertexId Network::add_vertex(const std::string& name, Mapping m) {
  if (name.empty()) throw ModelError("empty vertex id");
  if (by_name_.count(name)) throw ModelError("duplicate vertex id '" + name + "'");
  VertexId id = names_.size();
  names_.push_back(name);
  by_name_[name] = id;
  mappings_.push_back(std::move(m));
  out_.emplace_back();
  in_.emplace_back();
  in_pref_.emplace_back();
  out_pref_.emplace_back();
  vertex_origin_.emplace_back();
  rank_valid_ = false;
  return id;
}

EdgeId Network::add_edge(VertexId tail, VertexId head, Capacity cap) {
  if (tail >= names_.size() || head >= names_.size()) throw ModelError("edge endpoint out of range");
  if (tail == head) throw ModelError("self-loop on '" + names_[tail] + "'");
  auto key = edge_key(tail, head);
  if (edge_index_.count(key))
    throw ModelError("parallel edge " + names_[tail] + " -> " + names_[head]);
  EdgeId id = edges_.size();
  edges_.push_back({tail, head, cap});
  edge_index_[key] = id;
  out_[tail].push_back(id);
  in_[head].push_back(id);
  edge_origin_.emplace_back();
  rank_valid_ = false;
  return id;
}

void Network::set_in_pref(VertexId v, std::vector<EdgeId> order) {
  in_pref_[v] = std::move(order);
  rank_valid_ = false;
}

void Network::set_out_pref(VertexId v, std::vector<EdgeId> order) {
  out_pref_[v] = std::move(order);
  rank_valid_ = false;
}

std::optional<VertexId> Network::find_vertex(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

VertexId Network::vertex(const std::string& name) const {
  auto v = find_vertex(name);
  if (!v) throw ModelError("unknown vertex '" + name + "'");
  return *v;
}

std::optional<EdgeId> Network::find_edge(VertexId tail, VertexId head) const {
  auto it = edge_index_.find(edge_key(tail, head));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

EdgeId Network::edge(const std::string& tail, const std::string& head) const {
  auto e = find_edge(vertex(tail), vertex(head));
  if (!e) throw ModelError("unknown edge " + tail + " -> " + head);
  return *e;
}

const std::vector<EdgeId>& Network::in_pref(VertexId v) const {
  return in_pref_[v].empty() ? in_[v] : in_pref_[v];
}

const std::vector<EdgeId>& Network::out_pref(VertexId v) const {
  return out_pref_[v].empty() ? out_[v] : out_pref_[v];
}

void Network::ensure_rank() const {
  if (rank_valid_) return;
  in_rank_.assign(edges_.size(), 0);
  out_rank_.assign(edges_.size(), 0);
  for (VertexId v = 0; v < names_.size(); ++v) {
    const auto& ip = in_pref(v);
    for (std::size_t i = 0; i < ip.size(); ++i) in_rank_[ip[i]] = i;
    const auto& op = out_pref(v);
    for (std::size_t i = 0; i < op.size(); ++i) out_rank_[op[i]] = i;
  }
  rank_valid_ = true;
}

bool Network::prefers(VertexId v, EdgeId a, EdgeId b) const {
  ensure_rank();
  const Edge& ea = edges_[a];
  const Edge& eb = edges_[b];
  if (ea.head == v && eb.head == v) return in_rank_[a] < in_rank_[b];
  if (ea.tail == v && eb.tail == v) return out_rank_[a] < out_rank_[b];
  throw std::logic_error("prefers() on edges not on the same side of " + names_[v]);
}

std::vector<VertexId> Network::inner_vertices() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < names_.size(); ++v)
    if (!is_terminal(v)) out.push_back(v);
  return out;
}

Capacity Network::in_capacity(VertexId v) const {
  Capacity sum(0);
  for (EdgeId e : in_[v]) sum = sum + edges_[e].cap;
  return sum;
}

Capacity Network::out_capacity(VertexId v) const {
  Capacity sum(0);
  for (EdgeId e : out_[v]) sum = sum + edges_[e].cap;
  return sum;
}

bool Network::all_finite() const {
  return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.cap.is_finite(); });
}

bool Network::all_lm() const {
  for (VertexId v : inner_vertices())
    if (mappings_[v].segments() != 1) return false;
  return true;
}

namespace {

void check_permutation(const Network& n, VertexId v, const std::vector<EdgeId>& given,
                       const std::vector<EdgeId>& incident, const char* side) {
  if (given.empty()) return;
  auto a = given;
  auto b = incident;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b)
    throw ModelError(std::string(side) + " preference of '" + n.name(v) +
                     "' is not a permutation of its " + side + "coming edges");
}

}  // namespace

void Network::validate() const {
  if (s_ >= names_.size()) throw ModelError("source not set");
  if (t_ >= names_.size()) throw ModelError("sink not set");
  if (s_ == t_) throw ModelError("source and sink coincide");
  if (!in_[s_].empty()) throw ModelError("source has incoming edges");
  if (!out_[t_].empty()) throw ModelError("sink has outgoing edges");
  for (const auto& e : edges_)
    if (e.cap.is_finite() && e.cap.value() < 0)
      throw ModelError("negative capacity on " + names_[e.tail] + " -> " + names_[e.head]);
  for (VertexId v = 0; v < names_.size(); ++v) {
    if (is_terminal(v)) {
      if (!in_pref_[v].empty() || !out_pref_[v].empty())
        throw ModelError("terminal '" + names_[v] + "' cannot rank its edges");
      continue;
    }
    try {
      mappings_[v].validate();
    } catch (const ModelError& err) {
      throw ModelError("vertex '" + names_[v] + "': " + err.what());
    }
    check_permutation(*this, v, in_pref_[v], in_[v], "in");
    check_permutation(*this, v, out_pref_[v], out_[v], "out");
  }
}

bool operator==(const Network& a, const Network& b) {
  if (a.names_ != b.names_ || a.s_ != b.s_ || a.t_ != b.t_) return false;
  if (a.edges_.size() != b.edges_.size()) return false;
  for (std::size_t i = 0; i < a.edges_.size(); ++i) {
    const auto& x = a.edges_[i];
    const auto& y = b.edges_[i];
    if (x.tail != y.tail || x.head != y.head || !(x.cap == y.cap)) return false;
  }
  for (VertexId v = 0; v < a.names_.size(); ++v) {
    if (!a.is_terminal(v) && !(a.mappings_[v] == b.mappings_[v])) return false;
    if (a.in_pref(v) != b.in_pref(v) || a.out_pref(v) != b.out_pref(v)) return false;
  }
  return a.vertex_origin_ == b.vertex_origin_ && a.edge_origin_ == b.edge_origin_;
}

Flow zero_flow(const Network& n) { return Flow(n.edge_count(), Rational(0)); }

Rational inflow(const Network& n, const Flow& f, VertexId v) {
  Rational sum = 0;
  for (EdgeId e : n.in_edges(v)) sum += f[e];
  return sum;
}

Rational outflow(const Network& n, const Flow& f, VertexId v) {
  Rational sum = 0;
  for (EdgeId e : n.out_edges(v)) sum += f[e];
  return sum;
}

FeasibilityReport check_flow(const Network& n, const Flow& f) {
  if (f.size() != n.edge_count())
    throw ModelError("flow assigns " + std::to_string(f.size()) + " edges, network has " +
                     std::to_string(n.edge_count()));
  FeasibilityReport rep;
  for (EdgeId e = 0; e < n.edge_count(); ++e)
    if (f[e] < 0 || f[e] > n.edge_at(e).cap) rep.capacity.push_back({e, f[e]});
  for (VertexId v : n.inner_vertices()) {
    Rational in = inflow(n, f, v);
    Rational out = outflow(n, f, v);
    const Mapping& m = n.mapping(v);
    if (!m.admits(in, out)) rep.balance.push_back({v, in, out, m.eval(in)});
  }
  return rep;
}

}  // namespace sflow
