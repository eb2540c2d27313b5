#pragma once

#include <string>
#include <vector>

#include "sflow/model.hpp"
#include "sflow/solver.hpp"
#include "sflow/stability.hpp"

namespace sflow {

// One network in the chain from the input down to the network the solver ran
// on, with the flow it carries after solving.
struct Stage {
  std::string name;  // "input", "lm", "acyclic"
  Network net;
  Flow flow;
};

struct SolveReport {
  std::size_t segments = 0;  // K, summed over inner vertices
  std::size_t iterations = 0;
  std::size_t longest_path = 0;
  Verdict verdict = Verdict::Stable;
  // "augment", or "pivot" when the flow came from Scarf pivoting on
  // `pivot_stage`: either the augmenting solver stalled, or its flow leaves a
  // zero-inflow vertex below its jump with no dominating Scarf point.
  std::string method = "augment";
  std::string pivot_reason;
  std::string pivot_stage;
};

struct Solution {
  Flow flow;                        // on the input network
  std::vector<Stage> stages;        // input first, solved network last; stages
                                    // below pivot_stage keep the augmenting flow
  std::vector<IterationRecord> trace;  // refers to stages.back().net
  SolveReport report;
};

// Stable flow on any valid network. Throws ModelError on invalid input or
// when s reaches t along infinite capacities (then no stable flow exists),
// and std::logic_error if the solver stalls with no stage to pivot on or the
// result fails its own stability check. Infinite capacities are bounded by
// what a feasible flow can carry before pivoting.
Solution solve(const Network& n);

std::string format_report(const Solution& s);

struct ComplexityStats {
  std::size_t vertices = 0, edges = 0, segments = 0;
  std::size_t reduced_vertices = 0, reduced_edges = 0;
  std::size_t iterations = 0, longest_path = 0;
  bool within_bound = false;  // iterations <= 2 * reduced_edges
};

ComplexityStats complexity_probe(const Network& n);

}  // namespace sflow
