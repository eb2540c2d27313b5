#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sflow/model.hpp"

namespace sflow {

enum class RowKind { Edge, Segment, Out };
enum class ColKind { Edge, Slack1, Slack2 };

struct ScarfRow {
  RowKind kind;
  std::size_t index;        // edge index for Edge rows, vertex index otherwise
  std::size_t segment = 0;  // 0-based segment for Segment rows
  Rational b;
  std::vector<std::pair<std::size_t, Rational>> entries;  // (column, A value), A > 0
  std::vector<std::size_t> pref;                          // columns, most preferred first
};

struct ScarfCol {
  ColKind kind;
  std::size_t index;  // edge index or vertex index
};

// Rows are: one per edge (edge order), then for each vertex its segment rows
// followed by its out row. Columns are: one per edge, then x1, x2 per vertex.
struct ScarfInstance {
  std::string source, sink;
  std::vector<std::string> vertices;                       // network vertices other than s, t
  std::vector<std::pair<std::string, std::string>> edges;  // tail, head ids
  std::vector<ScarfRow> rows;
  std::vector<ScarfCol> cols;
  std::vector<Rational> q;  // per vertex

  std::size_t edge_col(std::size_t e) const { return e; }
  std::size_t slack1_col(std::size_t v) const { return edges.size() + 2 * v; }
  std::size_t slack2_col(std::size_t v) const { return edges.size() + 2 * v + 1; }
  std::size_t edge_row(std::size_t e) const { return e; }
  // First segment row and out row of vertex v.
  std::size_t segment_row(std::size_t v, std::size_t i) const;
  std::size_t out_row(std::size_t v) const;
  std::size_t segment_count(std::size_t v) const;

  std::optional<std::size_t> vertex_index(const std::string& name) const;

  std::string row_label(std::size_t r) const;
  std::string col_label(std::size_t c) const;
  Rational entry(std::size_t r, std::size_t c) const;

  // Rebuilds the row/vertex lookup tables; called after rows change.
  void index();

  friend bool operator==(const ScarfInstance& a, const ScarfInstance& b);

 private:
  std::vector<std::size_t> first_row_;  // per vertex
};

// x indexed by column.
using ScarfPoint = std::vector<Rational>;

// Requires every mapping to be LM or CMPLM and all capacities finite.
ScarfInstance build_scarf(const Network& n);

std::vector<Rational> row_activity(const ScarfInstance& inst, const ScarfPoint& x);
bool in_polytope(const ScarfInstance& inst, const ScarfPoint& x);

// Witness row, or nullopt. Throws ModelError if x lies outside the polytope.
std::optional<std::size_t> dominates(const ScarfInstance& inst, const ScarfPoint& x, std::size_t col);

struct DominanceReport {
  std::vector<std::optional<std::size_t>> witness;  // per column
  bool all() const;
};

DominanceReport check_dominance(const ScarfInstance& inst, const ScarfPoint& x);

// Scarf's pivoting algorithm: a point of the polytope that dominates every
// column, or nullopt if `max_pivots` runs out first.
std::optional<ScarfPoint> scarf_pivot(const ScarfInstance& inst, std::size_t max_pivots = 100000);

Flow scarf_to_flow(const ScarfInstance& inst, const ScarfPoint& x, const Network& n);

// Slack columns follow the case split of the correspondence proof. Where it
// leaves the split free, the slack goes to x1 unless an unsaturated edge that
// neither end wants forces it onto x2. Always a point of the polytope.
ScarfPoint flow_to_scarf(const Network& n, const Flow& f);

// The three-layer acyclic LM network built from an instance whose vertices all
// have one segment, plus the edges that carry each column.
struct LayeredNetwork {
  Network net;
  std::vector<EdgeId> out_m;   // per instance edge: u_out -> m_e
  std::vector<EdgeId> m_in;    // per instance edge: m_e -> v_in
  std::vector<EdgeId> s_out;   // per vertex: s -> v_out
  std::vector<EdgeId> in_t;    // per vertex: v_in -> t
  std::vector<EdgeId> out_m1, m1_in, out_m2, m2_in;  // per vertex
  EdgeId s_sout = 0;
  EdgeId tin_t = 0;
};

LayeredNetwork scarf_to_network(const ScarfInstance& inst);

ScarfPoint layered_flow_to_scarf(const LayeredNetwork& ln, const Flow& f);
Flow scarf_to_layered_flow(const ScarfInstance& inst, const LayeredNetwork& ln, const ScarfPoint& x);

}  // namespace sflow
