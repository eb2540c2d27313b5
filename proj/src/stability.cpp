#include "sflow/stability.hpp"

#include <set>
#include <tuple>

#include "sflow/reduction.hpp"

namespace sflow {

std::size_t default_max_len(const Network& n) { return 2 * n.vertex_count(); }

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "stable";
    case Verdict::Unstable: return "unstable";
    case Verdict::Infeasible: return "infeasible";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

constexpr EdgeId kNoEdge = static_cast<EdgeId>(-1);

struct Node {
  VertexId v;
  EdgeId via;  // edge used to arrive at v, kNoEdge for v_1
  Germ germ;   // germ on `via`
  bool any_positive;
  long parent;
  std::size_t depth;  // vertices on the path so far
  std::vector<bool> on_path;  // only tracked when the network has a cycle
};

struct Key {
  EdgeId e;
  bool zero;
  bool any_positive;
  Rational beta;
  std::vector<bool> on_path;
  bool operator<(const Key& o) const {
    if (on_path != o.on_path) return on_path < o.on_path;
    if (e != o.e) return e < o.e;
    if (zero != o.zero) return zero < o.zero;
    if (any_positive != o.any_positive) return any_positive < o.any_positive;
    return beta < o.beta;
  }
};

class Search {
 public:
  Search(const Network& n, const Flow& f, const SearchOptions& opt)
      : n_(n), f_(f), allow_zero_(opt.allow_zero_components),
        max_len_(opt.max_len ? opt.max_len : default_max_len(n)), cyclic_(detect_cycles(n)) {
    fin_.resize(n.vertex_count());
    fout_.resize(n.vertex_count());
    for (VertexId v = 0; v < n.vertex_count(); ++v) {
      fin_[v] = inflow(n, f, v);
      fout_[v] = outflow(n, f, v);
    }
  }

  SearchResult run() {
    seed();
    std::size_t head = 0;
    bool open = false;
    while (head < nodes_.size()) {
      const Node node = nodes_[head];
      long id = static_cast<long>(head++);
      if (node.via != kNoEdge && accepts(node)) return found(id);
      if (node.v == n_.sink()) continue;
      for (const auto& [e, g, pos] : continuations(node)) {
        VertexId w = n_.edge_at(e).head;
        if (cyclic_ && node.on_path[w]) continue;
        std::vector<bool> on = node.on_path;
        if (cyclic_) on[w] = true;
        if (node.depth >= max_len_) {
          if (!seen(e, g, pos, on)) open = true;
          continue;
        }
        push(w, e, g, pos, id, node.depth + 1, std::move(on));
      }
    }
    SearchResult r;
    r.outcome = open ? SearchOutcome::Inconclusive : SearchOutcome::None;
    return r;
  }

 private:
  Capacity residual(EdgeId e) const { return n_.edge_at(e).cap - f_[e]; }

  bool fits(const Germ& g, EdgeId e) const {
    Capacity rho = residual(e);
    if (g.is_zero()) return true;
    return g.beta < rho;
  }

  bool seen(EdgeId e, const Germ& g, bool pos, const std::vector<bool>& on) const {
    return visited_.count(Key{e, g.is_zero(), pos, g.beta, on}) > 0;
  }

  void push(VertexId v, EdgeId e, const Germ& g, bool pos, long parent, std::size_t depth, std::vector<bool> on) {
    Key k{e, g.is_zero(), pos, g.beta, on};
    if (!visited_.insert(k).second) return;
    nodes_.push_back({v, e, g, pos, parent, depth, std::move(on)});
  }

  std::vector<bool> start_set(VertexId v, VertexId w) const {
    if (!cyclic_) return {};
    std::vector<bool> on(n_.vertex_count(), false);
    on[v] = on[w] = true;
    return on;
  }

  // Candidate first vertices and their first edges.
  void seed() {
    const Germ unit{1, 0};
    const Germ zero{0, 0};
    for (VertexId v = 0; v < n_.vertex_count(); ++v) {
      if (v == n_.sink()) continue;
      std::vector<EdgeId> positive;
      if (v != n_.source()) {
        for (EdgeId e : n_.out_edges(v))
          if (f_[e] > 0) positive.push_back(e);
        if (positive.empty()) continue;
      }
      for (EdgeId e : n_.out_pref(v)) {
        if (v != n_.source()) {
          bool better = false;
          for (EdgeId p : positive)
            if (n_.prefers(v, e, p)) better = true;
          if (!better) continue;
        }
        VertexId w = n_.edge_at(e).head;
        if (w == v) continue;
        if (fits(unit, e)) push(w, e, unit, true, -1, 2, start_set(v, w));
        if (allow_zero_) push(w, e, zero, false, -1, 2, start_set(v, w));
      }
    }
  }

  bool accepts(const Node& node) const {
    if (allow_zero_ && !node.any_positive) return false;
    VertexId w = node.v;
    if (w == n_.sink()) return true;
    for (EdgeId e : n_.in_edges(w))
      if (e != node.via && f_[e] > 0 && n_.prefers(w, node.via, e)) return true;
    return false;
  }

  // Germ of the outflow change at node.v, then every admissible next edge.
  std::vector<std::tuple<EdgeId, Germ, bool>> continuations(const Node& node) const {
    std::vector<std::tuple<EdgeId, Germ, bool>> out;
    VertexId w = node.v;
    const Mapping& m = n_.mapping(w);
    std::vector<Germ> options;
    if (!node.germ.is_zero()) {
      Rational x0 = fin_[w] + node.germ.beta;
      if (x0 > 0) {
        std::size_t seg = m.right_segment(x0);
        options.push_back({m.slopes[seg] * node.germ.alpha, m.eval(x0) - fout_[w]});
      } else {
        options.push_back({m.slopes[0] * node.germ.alpha, m.pseudo_start - fout_[w]});
      }
    } else {
      options.push_back({0, 0});
      if (fin_[w] == 0 && fout_[w] < m.pseudo_start) options.push_back({1, 0});
    }
    for (const Germ& g : options) {
      bool pos = node.any_positive || !g.is_zero();
      for (EdgeId e : n_.out_edges(w))
        if (fits(g, e)) out.emplace_back(e, g, pos);
    }
    return out;
  }

  SearchResult found(long id) const {
    BlockingPath p;
    std::vector<long> chain;
    for (long cur = id; cur != -1; cur = nodes_[cur].parent) chain.push_back(cur);
    VertexId first = n_.edge_at(nodes_[chain.back()].via).tail;
    p.vertices.push_back(first);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      const Node& nd = nodes_[*it];
      p.vertices.push_back(nd.v);
      p.edges.push_back(nd.via);
      p.germs.push_back(nd.germ);
    }
    SearchResult r;
    r.outcome = SearchOutcome::Found;
    r.path = std::move(p);
    return r;
  }

  const Network& n_;
  const Flow& f_;
  bool allow_zero_;
  std::size_t max_len_;
  bool cyclic_;
  std::vector<Rational> fin_, fout_;
  std::vector<Node> nodes_;
  std::set<Key> visited_;
};

}  // namespace

SearchResult find_blocking_path(const Network& n, const Flow& f, const SearchOptions& opt) {
  if (f.size() != n.edge_count()) throw ModelError("flow does not match network");
  return Search(n, f, opt).run();
}

StabilityReport is_stable(const Network& n, const Flow& f, const SearchOptions& opt) {
  StabilityReport rep;
  rep.feasibility = check_flow(n, f);
  if (!rep.feasibility.feasible()) {
    rep.verdict = Verdict::Infeasible;
    return rep;
  }
  auto res = find_blocking_path(n, f, opt);
  switch (res.outcome) {
    case SearchOutcome::Found:
      rep.verdict = Verdict::Unstable;
      rep.path = std::move(res.path);
      break;
    case SearchOutcome::None: rep.verdict = Verdict::Stable; break;
    case SearchOutcome::Inconclusive: rep.verdict = Verdict::Inconclusive; break;
  }
  return rep;
}

std::vector<Rational> realize(const Network& n, const Flow& f, const BlockingPath& p) {
  std::optional<Rational> eps;
  auto bound = [&](const Rational& b) {
    if (!eps || b < *eps) eps = b;
  };
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    const Germ& g = p.germs[i];
    if (g.alpha <= 0) continue;
    Capacity rho = n.edge_at(p.edges[i]).cap - f[p.edges[i]];
    if (rho.is_finite()) bound((rho.value() - g.beta) / g.alpha);
    if (i + 1 < p.edges.size()) {
      VertexId w = p.vertices[i + 1];
      const Mapping& m = n.mapping(w);
      Rational x0 = inflow(n, f, w) + g.beta;
      std::size_t seg = m.right_segment(x0);
      if (seg < m.breakpoints.size()) bound((m.breakpoints[seg] - x0) / g.alpha);
    }
  }
  Rational e = eps ? Rational(*eps / 2) : Rational(1);
  std::vector<Rational> r;
  r.reserve(p.germs.size());
  for (const Germ& g : p.germs) r.push_back(g.alpha * e + g.beta);
  return r;
}

}  // namespace sflow
