#pragma once

#include <vector>

#include "sflow/model.hpp"
#include "sflow/scarf.hpp"

namespace sflow {

enum class ReductionKind { MplmToLm, CyclicToAcyclic };

const char* to_string(ReductionKind k);

struct ReductionMap {
  ReductionKind kind;
  std::size_t original_edges = 0;
  std::size_t reduced_edges = 0;
  std::vector<EdgeId> edge_map;                 // original edge -> representative reduced edge
  std::vector<std::vector<VertexId>> gadgets;   // original vertex -> reduced vertices built for it
};

struct Reduction {
  Network net;
  ReductionMap map;
};

// Splits every inner vertex into v_in -> v_1..v_k -> v_out, one LM vertex per
// segment. Rejects an infinite inflow bound on a vertex with k > 1.
Reduction mplm_to_lm(const Network& n);

// Layered acyclic LM network equivalent to an LM network (cycles allowed).
Reduction cyclic_to_acyclic(const Network& n);

Flow pullback(const ReductionMap& rm, const Flow& reduced);

bool detect_cycles(const Network& n);

// Kahn order; empty when the network has a cycle.
std::vector<VertexId> topological_order(const Network& n);

}  // namespace sflow
