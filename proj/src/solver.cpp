#include "sflow/solver.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "sflow/reduction.hpp"

namespace sflow {

const char* to_string(VState s) {
  switch (s) {
    case VState::Propose: return "propose";
    case VState::Reject: return "reject";
    case VState::Done: return "done";
  }
  return "?";
}

SolverState::SolverState(const Network& n) : n_(&n), f_(zero_flow(n)), vs_(n.vertex_count()) {}

std::optional<VertexId> SolverState::h_next(VertexId v) const {
  const VertexState& s = vs_[v];
  if (v == n_->sink() || s.state == VState::Done || !s.edge) return std::nullopt;
  const Edge& e = n_->edge_at(*s.edge);
  return s.state == VState::Propose ? e.head : e.tail;
}

Capacity SolverState::residual(VertexId v) const {
  const VertexState& s = vs_[v];
  if (!s.edge) return Capacity(0);
  if (s.state == VState::Propose) return n_->edge_at(*s.edge).cap - f_[*s.edge];
  return Capacity(f_[*s.edge]);
}

bool SolverState::accepted(EdgeId e) const {
  VertexId h = n_->edge_at(e).head;
  if (h == n_->sink()) return true;
  const VertexState& s = vs_[h];
  switch (s.state) {
    case VState::Propose: return true;
    case VState::Reject: return s.edge && n_->prefers(h, e, *s.edge);
    case VState::Done: return false;
  }
  return false;
}

namespace {

class Updater {
 public:
  Updater(SolverState& st, std::vector<Transition>* log) : st_(st), n_(st.network()), log_(log) {}

  // Brings u back to a consistent state: a proposer keeps an edge with room
  // that its head still takes, a rejecter holds its least preferred positive
  // in-edge. Proposers left without a taker are repaired recursively.
  void update(VertexId u) {
    if (u == n_.sink()) return;
    VertexState& s = st_.state(u);
    VertexState before = s;
    if (s.state == VState::Propose) {
      if (s.edge && has_room(*s.edge) && st_.accepted(*s.edge)) return;
      const auto& order = n_.out_pref(u);
      auto it = order.begin();
      if (s.edge) it = std::find(order.begin(), order.end(), *s.edge) + 1;
      for (; it != order.end(); ++it) {
        if (has_room(*it) && st_.accepted(*it)) {
          s.edge = *it;
          note(u, before);
          return;
        }
      }
      s.state = VState::Reject;
      s.edge.reset();
      if (u == n_.source()) {
        note(u, before);
        return;
      }
    }
    if (s.state == VState::Reject) {
      std::optional<EdgeId> least;
      for (EdgeId e : n_.in_pref(u))
        if (st_.flow()[e] > 0) least = e;
      if (!least) {
        s.state = VState::Done;
        s.edge.reset();
      } else {
        s.edge = least;
      }
      note(u, before);
      for (EdgeId e : n_.in_edges(u)) {
        VertexId w = n_.edge_at(e).tail;
        const VertexState& ws = st_.state(w);
        if (ws.state == VState::Propose && ws.edge == e && !st_.accepted(e)) update(w);
      }
    }
  }

 private:
  bool has_room(EdgeId e) const { return st_.flow()[e] < n_.edge_at(e).cap; }

  void note(VertexId u, const VertexState& before) {
    const VertexState& now = st_.state(u);
    if (log_ && (before.state != now.state || before.edge != now.edge))
      log_->push_back({u, before.state, now.state, before.edge, now.edge});
  }

  SolverState& st_;
  const Network& n_;
  std::vector<Transition>* log_;
};

enum class Step { Push, Redirect, Remove };

// Vertex-local transfer rules. Forward maps the amount arriving along H to
// the most that can leave; backward maps an amount leaving to what must arrive.
struct Transfer {
  Step step;
  const Mapping* g;
  Rational in, out;

  Rational forward(const Rational& d) const {
    switch (step) {
      case Step::Push: return g->eval(in + d) - out;
      case Step::Redirect: return d;
      case Step::Remove: return in - g->inverse(out - d);
    }
    return d;
  }

  Capacity forward(const Capacity& d) const {
    if (d.is_finite()) return Capacity(forward(d.value()));
    if (step == Step::Remove) return Capacity(in);
    return d;
  }

  Rational backward(const Rational& d) const {
    switch (step) {
      case Step::Push: {
        Rational y = out + d;
        return (y <= g->pseudo_start ? Rational(0) : g->inverse(y)) - in;
      }
      case Step::Redirect: return d;
      case Step::Remove: {
        Rational x = in - d;
        return out - (x > 0 ? g->eval(x) : g->pseudo_start);
      }
    }
    return d;
  }
};

class Planner {
 public:
  Planner(const SolverState& st, const std::vector<VertexId>& path) : st_(st), n_(st.network()), path_(path) {
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      VertexId v = path[i];
      const VertexState& s = st.state(v);
      if (!s.edge) throw std::logic_error("vertex on the walk has no H-edge");
      edges_.push_back(*s.edge);
      forward_dir_.push_back(s.state == VState::Propose);
      rho_.push_back(st.residual(v));
    }
  }

  std::size_t size() const { return edges_.size(); }

  // Rule at path_[i] between H-edges i-1 and i.
  Transfer transfer(std::size_t i) const {
    bool prev = forward_dir_[i - 1];
    bool mine = forward_dir_[i];
    Step step = prev && mine ? Step::Push : (!prev && !mine ? Step::Remove : Step::Redirect);
    VertexId v = path_[i];
    return {step, &n_.mapping(v), st_.fin(v), st_.fout(v)};
  }

  // Amount bounds on H-edge i: the original flow must stay in [0, c].
  std::optional<Rational> upper(std::size_t i) const {
    const Rational& f = st_.flow()[edges_[i]];
    const Capacity& c = n_.edge_at(edges_[i]).cap;
    if (forward_dir_[i]) return c.is_finite() ? std::optional<Rational>(c.value() - f) : std::nullopt;
    return f;
  }

  std::optional<Rational> lower(std::size_t i) const {
    const Rational& f = st_.flow()[edges_[i]];
    const Capacity& c = n_.edge_at(edges_[i]).cap;
    if (forward_dir_[i]) return Rational(-f);
    return c.is_finite() ? std::optional<Rational>(f - c.value()) : std::nullopt;
  }

  bool within(std::size_t i, const Rational& m) const {
    auto lo = lower(i);
    auto hi = upper(i);
    return (!lo || m >= *lo) && (!hi || m <= *hi);
  }

  // Capped forward pass over H-edges [from, to], starting at the residual of
  // `from`, followed by the backward fix.
  std::vector<Rational> saturate(std::size_t from, std::size_t to) const {
    std::vector<Capacity> cap(to - from + 1);
    cap[0] = rho_[from];
    for (std::size_t i = from + 1; i <= to; ++i) cap[i - from] = min(transfer(i).forward(cap[i - from - 1]), rho_[i]);
    if (cap.back().is_infinite()) throw std::logic_error("augmenting walk has no finite bottleneck");
    std::vector<Rational> m(cap.size());
    m.back() = cap.back().value();
    for (std::size_t i = to; i > from; --i) m[i - from - 1] = transfer(i).backward(m[i - from]);
    return m;
  }

  // Uncapped forward pass over [from, to] from a given first amount.
  std::vector<Rational> propagate(std::size_t from, std::size_t to, const Rational& first) const {
    std::vector<Rational> m(to - from + 1);
    m[0] = first;
    for (std::size_t i = from + 1; i <= to; ++i) m[i - from] = transfer(i).forward(m[i - from - 1]);
    return m;
  }

  // Backward pass over H-edges [0, last] given the amount on `last`.
  std::vector<Rational> pull(std::size_t last, const Rational& amount) const {
    std::vector<Rational> m(last + 1);
    m[last] = amount;
    for (std::size_t i = last; i > 0; --i) m[i - 1] = transfer(i).backward(m[i]);
    return m;
  }

  AugmentPlan finish(std::vector<Rational> amounts, bool cycle, std::size_t join) const {
    AugmentPlan p;
    p.path = path_;
    p.edges = edges_;
    p.cycle = cycle;
    p.join = join;
    for (std::size_t i = 0; i < amounts.size(); ++i) {
      if (!within(i, amounts[i])) throw std::logic_error("augmentation leaves an edge outside [0, c]");
      p.deltas.push_back(forward_dir_[i] ? amounts[i] : Rational(-amounts[i]));
    }
    p.amounts = std::move(amounts);
    return p;
  }

  // Stem amount the join vertex needs for cycle amounts z (leaving it) and
  // y (returning to it).
  Rational join_need(std::size_t j, const Rational& z, const Rational& y) const {
    const std::size_t k = size();
    VertexId J = path_[j];
    bool stem_push = forward_dir_[j - 1];
    bool back_push = forward_dir_[k - 1];
    bool j_push = forward_dir_[j];
    Rational in = st_.fin(J) + (back_push ? y : Rational(0)) - (j_push ? Rational(0) : z);
    Rational out = st_.fout(J) + (j_push ? z : Rational(0)) - (back_push ? Rational(0) : y);
    const Mapping& g = n_.mapping(J);
    if (stem_push) return g.inverse(out) - in;
    if (in > 0) return out - g.eval(in);
    Rational spare = out - g.pseudo_start;
    return spare > 0 ? spare : Rational(0);
  }

  // Every amount on the sigma-cycle as a function of the amount z leaving the
  // join vertex.
  std::vector<Rational> full(std::size_t j, const Rational& z) const {
    const std::size_t k = size();
    auto cyc = propagate(j, k - 1, z);
    Rational x = join_need(j, z, cyc.back());
    auto stem = pull(j - 1, x);
    stem.insert(stem.end(), cyc.begin(), cyc.end());
    return stem;
  }

  bool all_within(const std::vector<Rational>& m) const {
    for (std::size_t i = 0; i < m.size(); ++i)
      if (!within(i, m[i])) return false;
    return true;
  }

 private:
  const SolverState& st_;
  const Network& n_;
  const std::vector<VertexId>& path_;
  std::vector<EdgeId> edges_;
  std::vector<bool> forward_dir_;
  std::vector<Capacity> rho_;
};

}  // namespace

SolverState init_state(const Network& n) {
  n.validate();
  if (detect_cycles(n)) throw ModelError("solver needs an acyclic network");
  if (!n.all_lm()) throw ModelError("solver needs an LM network");
  for (VertexId v : n.inner_vertices())
    if (n.out_edges(v).empty()) throw ModelError("vertex '" + n.name(v) + "' has no outgoing edges");
  SolverState st(n);
  for (VertexId v = 0; v < n.vertex_count(); ++v) {
    if (v == n.sink()) continue;
    const auto& order = n.out_pref(v);
    if (!order.empty()) st.state(v).edge = order.front();
  }
  Updater up(st, nullptr);
  for (VertexId v = 0; v < n.vertex_count(); ++v)
    if (v != n.sink() && st.residual(v) == Capacity(0)) up.update(v);
  return st;
}

std::vector<VertexId> find_path(const SolverState& st) {
  const Network& n = st.network();
  std::vector<VertexId> path{n.source()};
  std::vector<bool> seen(n.vertex_count(), false);
  seen[n.source()] = true;
  VertexId cur = n.source();
  while (cur != n.sink()) {
    auto next = st.h_next(cur);
    if (!next) {
      // A done vertex can still shed outflow it holds without inflow.
      if (st.state(cur).state == VState::Done && path.size() > 1 &&
          st.state(path[path.size() - 2]).state == VState::Reject)
        break;
      throw std::logic_error("walk in H stopped at '" + n.name(cur) + "'");
    }
    path.push_back(*next);
    if (seen[*next]) break;
    seen[*next] = true;
    cur = *next;
  }
  return path;
}

AugmentPlan plan_st_path(const SolverState& st, const std::vector<VertexId>& path) {
  Planner pl(st, path);
  return pl.finish(pl.saturate(0, pl.size() - 1), false, 0);
}

PlanResult plan_sigma_cycle(const SolverState& st, const std::vector<VertexId>& path) {
  PlanResult res;
  Planner pl(st, path);
  const std::size_t k = pl.size();
  const VertexId last = path.back();
  std::size_t j = std::find(path.begin(), path.end(), last) - path.begin();
  if (j >= k) throw std::logic_error("walk is not a sigma-cycle");

  auto cyc = pl.saturate(j, k - 1);
  if (j == 0) {
    res.plan = pl.finish(std::move(cyc), true, 0);
    return res;
  }
  const Rational z_max = cyc.front();
  const Rational lambda = pl.join_need(j, z_max, cyc.back());
  if (z_max <= 0) {
    // Nothing leaves the join vertex; the cycle only moves output that a
    // vertex holds without inflow. The stem follows whatever the join needs.
    if (cyc.back() <= 0) {
      res.error = "sigma-cycle carries nothing";
      return res;
    }
    auto amounts = pl.pull(j - 1, lambda);
    amounts.insert(amounts.end(), cyc.begin(), cyc.end());
    if (!pl.all_within(amounts)) {
      res.error = "sigma-cycle cannot be augmented: stem cannot follow a jump-only cycle";
      return res;
    }
    res.plan = pl.finish(std::move(amounts), true, j);
    return res;
  }

  std::vector<Rational> amounts;
  if (lambda >= 0) {
    auto stem_cap = pl.saturate(0, j - 1);
    Rational reach = stem_cap.back();
    if (reach >= lambda) {
      amounts = pl.pull(j - 1, lambda);
      amounts.insert(amounts.end(), cyc.begin(), cyc.end());
    } else {
      // The stem is the bottleneck: shrink the cycle until the join vertex
      // needs exactly what the stem delivers. Need is affine in z below z_max.
      Rational half = z_max / 2;
      Rational hi = pl.join_need(j, z_max, pl.propagate(j, k - 1, z_max).back());
      Rational lo = pl.join_need(j, half, pl.propagate(j, k - 1, half).back());
      Rational slope = (hi - lo) / half;
      if (slope <= 0) {
        res.error = "join vertex need does not grow with the cycle amount";
        return res;
      }
      Rational z = (reach - (hi - slope * z_max)) / slope;
      amounts = pl.pull(j - 1, reach);
      auto c2 = pl.propagate(j, k - 1, z);
      amounts.insert(amounts.end(), c2.begin(), c2.end());
    }
  } else {
    amounts = pl.full(j, z_max);
  }

  if (!pl.all_within(amounts)) {
    // Fit every amount as an affine function of z and take the largest z that
    // keeps all of them within bounds.
    Rational half = z_max / 2;
    auto a1 = pl.full(j, z_max);
    auto a2 = pl.full(j, half);
    Rational z = z_max;
    for (std::size_t i = 0; i < k; ++i) {
      Rational slope = (a1[i] - a2[i]) / half;
      Rational base = a1[i] - slope * z_max;
      if (slope > 0) {
        if (auto hi = pl.upper(i)) z = min(z, Rational((*hi - base) / slope));
      } else if (slope < 0) {
        if (auto lo = pl.lower(i)) z = min(z, Rational((*lo - base) / slope));
      }
    }
    if (z <= 0) {
      Rational s0 = (a1[0] - a2[0]) / half;
      res.stem_ratio = s0;
      res.error = "sigma-cycle cannot be augmented: stem would carry " + to_string(s0) +
                  " times the cycle amount";
      return res;
    }
    amounts = pl.full(j, z);
  }
  try {
    res.plan = pl.finish(std::move(amounts), true, j);
  } catch (const std::logic_error& e) {
    res.error = e.what();
  }
  return res;
}

IterationRecord apply_and_update(SolverState& st, const AugmentPlan& plan) {
  IterationRecord rec;
  rec.plan = plan;
  Flow& f = st.flow();
  for (std::size_t i = 0; i < plan.edges.size(); ++i) f[plan.edges[i]] += plan.deltas[i];
  std::vector<VertexId> owners;
  for (std::size_t i = 0; i + 1 < plan.path.size(); ++i) {
    VertexId u = plan.path[i];
    if (st.residual(u) == Capacity(0) && std::find(owners.begin(), owners.end(), u) == owners.end()) {
      owners.push_back(u);
      rec.saturated.push_back(plan.edges[i]);
    }
  }
  Updater up(st, &rec.transitions);
  for (VertexId u : owners) up.update(u);
  return rec;
}

RunResult run(const Network& n) {
  SolverState st = init_state(n);
  RunResult out;
  const std::size_t limit = 4 * n.edge_count() + 16;
  const VertexId s = n.source();
  while (st.state(s).state == VState::Propose) {
    if (out.iterations >= limit) throw std::logic_error("solver exceeded its iteration limit");
    auto path = find_path(st);
    bool cycle = path.back() != n.sink() && std::count(path.begin(), path.end(), path.back()) > 1;
    AugmentPlan plan;
    if (cycle) {
      auto res = plan_sigma_cycle(st, path);
      if (!res.plan) {
        out.stall = res.error;
        break;
      }
      plan = std::move(*res.plan);
    } else {
      plan = plan_st_path(st, path);
    }
    out.longest_path = std::max(out.longest_path, path.size());
    auto rec = apply_and_update(st, plan);
    rec.index = ++out.iterations;
    if (!check_flow(n, st.flow()).feasible()) throw std::logic_error("augmentation broke feasibility");
    bool stuck = rec.saturated.empty();
    out.trace.push_back(std::move(rec));
    if (stuck) {
      out.stall = "augmentation saturated no H-edge";
      break;
    }
  }
  out.flow = st.flow();
  return out;
}

std::string format_trace(const Network& n, const std::vector<IterationRecord>& trace) {
  std::ostringstream os;
  auto edge = [&](EdgeId e) { return n.name(n.edge_at(e).tail) + ">" + n.name(n.edge_at(e).head); };
  auto held = [&](const std::optional<EdgeId>& e) { return e ? edge(*e) : std::string("-"); };
  for (const auto& rec : trace) {
    os << "iter " << rec.index << (rec.plan.cycle ? " cycle" : " path");
    for (VertexId v : rec.plan.path) os << ' ' << n.name(v);
    os << '\n';
    for (std::size_t i = 0; i < rec.plan.edges.size(); ++i)
      os << "  delta " << edge(rec.plan.edges[i]) << ' ' << to_string(rec.plan.deltas[i]) << '\n';
    for (EdgeId e : rec.saturated) os << "  saturated " << edge(e) << '\n';
    for (const auto& t : rec.transitions)
      os << "  state " << n.name(t.vertex) << ' ' << to_string(t.from) << ':' << held(t.from_edge) << " -> "
         << to_string(t.to) << ':' << held(t.to_edge) << '\n';
  }
  return os.str();
}

}  // namespace sflow
