#pragma once

#include <optional>
#include <vector>

#include "sflow/model.hpp"

namespace sflow {

// r = alpha * eps + beta for small eps > 0.
struct Germ {
  Rational alpha;
  Rational beta;
  bool is_zero() const { return alpha == 0 && beta == 0; }
  friend bool operator==(const Germ&, const Germ&) = default;
};

// Simple path v_1..v_k, edges v_i v_{i+1}, and the germ of r_i on each edge.
struct BlockingPath {
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;
  std::vector<Germ> germs;
};

struct SearchOptions {
  // Maximum number of vertices on a path; 0 picks default_max_len().
  std::size_t max_len = 0;
  // Read V_P > 0 as "nonnegative and not all zero" instead of
  // componentwise positive.
  bool allow_zero_components = false;
};

std::size_t default_max_len(const Network& n);

enum class SearchOutcome { Found, None, Inconclusive };

struct SearchResult {
  SearchOutcome outcome = SearchOutcome::None;
  std::optional<BlockingPath> path;
};

// Breadth-first over (edge, germ) states, plus the visited set when the
// network has a cycle, so a returned path is a shortest one. Precondition:
// f is feasible.
SearchResult find_blocking_path(const Network& n, const Flow& f, const SearchOptions& opt = {});

enum class Verdict { Stable, Unstable, Infeasible, Inconclusive };

const char* to_string(Verdict v);

struct StabilityReport {
  Verdict verdict = Verdict::Stable;
  FeasibilityReport feasibility;
  std::optional<BlockingPath> path;
  bool stable() const { return verdict == Verdict::Stable; }
};

StabilityReport is_stable(const Network& n, const Flow& f, const SearchOptions& opt = {});

// A concrete V_P for the path: picks eps small enough that every r_i stays
// in its residual and on the segment its germ was computed from.
std::vector<Rational> realize(const Network& n, const Flow& f, const BlockingPath& p);

}  // namespace sflow
