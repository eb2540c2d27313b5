#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sflow/model.hpp"

namespace sflow {

enum class VState { Propose, Reject, Done };

const char* to_string(VState s);

struct VertexState {
  VState state = VState::Propose;
  std::optional<EdgeId> edge;
};

// Mutable solver state over an acyclic LM network. The auxiliary graph H is
// implicit: every non-done vertex owns exactly one H-edge.
class SolverState {
 public:
  explicit SolverState(const Network& n);

  const Network& network() const { return *n_; }
  const Flow& flow() const { return f_; }
  Flow& flow() { return f_; }
  const VertexState& state(VertexId v) const { return vs_[v]; }
  VertexState& state(VertexId v) { return vs_[v]; }

  // Next vertex along v's H-edge, or nullopt for t and done vertices.
  std::optional<VertexId> h_next(VertexId v) const;
  // c - f on a proposing edge, f on a rejected one.
  Capacity residual(VertexId v) const;

  Rational fin(VertexId v) const { return inflow(*n_, f_, v); }
  Rational fout(VertexId v) const { return outflow(*n_, f_, v); }

  // Whether `e`, offered by its tail, would be taken by its head right now.
  bool accepted(EdgeId e) const;

 private:
  const Network* n_;
  Flow f_;
  std::vector<VertexState> vs_;
};

// Fresh state: every vertex proposes along its favourite out-edge, f = 0.
// Throws ModelError for cyclic or non-LM input and for inner vertices
// without out-edges.
SolverState init_state(const Network& n);

// Walk along H-edges from s until t or a repeated vertex.
std::vector<VertexId> find_path(const SolverState& st);

// Per step of the walk: the original edge touched and the signed change of
// its flow. `path` repeats its join vertex at the end for sigma-cycles.
struct AugmentPlan {
  std::vector<VertexId> path;
  std::vector<EdgeId> edges;
  std::vector<Rational> amounts;  // magnitudes along H, signed on a reversed stem
  std::vector<Rational> deltas;   // change of f on `edges`
  bool cycle = false;
  std::size_t join = 0;  // j: position of the repeated vertex
};

struct PlanResult {
  std::optional<AugmentPlan> plan;
  std::string error;
  // For an infeasible sigma-cycle: the stem-to-cycle ratio the vertex balance
  // at the join would need (d_0 = ratio * d_j in the amounts' convention).
  std::optional<Rational> stem_ratio;
};

AugmentPlan plan_st_path(const SolverState& st, const std::vector<VertexId>& path);
PlanResult plan_sigma_cycle(const SolverState& st, const std::vector<VertexId>& path);

struct Transition {
  VertexId vertex;
  VState from, to;
  std::optional<EdgeId> from_edge, to_edge;
};

struct IterationRecord {
  std::size_t index = 0;
  AugmentPlan plan;
  std::vector<EdgeId> saturated;  // original edges of H-edges whose residual hit 0
  std::vector<Transition> transitions;
};

// Applies the plan, then updates the tails of H-edges whose residual is now
// zero. Returns the record of what changed.
IterationRecord apply_and_update(SolverState& st, const AugmentPlan& plan);

struct RunResult {
  Flow flow;
  std::vector<IterationRecord> trace;
  std::size_t iterations = 0;
  std::size_t longest_path = 0;
  // Set when the walk in H offered no augmentation that saturates an H-edge,
  // e.g. a sigma-cycle whose stem would have to shed more than it carries.
  // `flow` is then the feasible flow reached so far.
  std::optional<std::string> stall;
};

// Throws std::logic_error when an internal invariant fails.
RunResult run(const Network& n);

std::string format_trace(const Network& n, const std::vector<IterationRecord>& trace);

}  // namespace sflow
