#include "sflow/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace sflow {

namespace {

struct TextLine {
  std::size_t number;
  std::vector<std::string> tok;
};

std::vector<TextLine> tokenize(std::string_view text) {
  std::vector<TextLine> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::istringstream is{std::string(text.substr(pos, end - pos))};
    TextLine l{number, {}};
    std::string t;
    while (is >> t) {
      if (t[0] == '#') break;
      l.tok.push_back(t);
    }
    if (!l.tok.empty()) out.push_back(std::move(l));
    pos = end + 1;
  }
  return out;
}

Rational rational_at(const std::string& s, std::size_t line) {
  auto r = parse_rational(s);
  if (!r) throw ModelError("expected a rational, got '" + s + "'", line);
  return *r;
}

std::string join(const std::vector<std::string>& tok, std::size_t from) {
  std::string s;
  for (std::size_t i = from; i < tok.size(); ++i) {
    if (i > from) s += ' ';
    s += tok[i];
  }
  return s;
}

void need(const TextLine& l, std::size_t n, const char* usage) {
  if (l.tok.size() < n) throw ModelError(std::string("expected: ") + usage, l.number);
}

VertexId vertex_at(const Network& n, const std::string& id, std::size_t line) {
  auto v = n.find_vertex(id);
  if (!v) throw ModelError("unknown vertex '" + id + "'", line);
  return *v;
}

EdgeId edge_at(const Network& n, const std::string& a, const std::string& b, std::size_t line) {
  auto e = n.find_edge(vertex_at(n, a, line), vertex_at(n, b, line));
  if (!e) throw ModelError("unknown edge " + a + " -> " + b, line);
  return *e;
}

Mapping parse_mapping(const TextLine& l) {
  Mapping m = Mapping::identity();
  if (l.tok.size() == 2) return m;
  m.slopes.clear();
  std::vector<Rational>* into = nullptr;
  bool start_seen = false;
  for (std::size_t i = 2; i < l.tok.size(); ++i) {
    const std::string& t = l.tok[i];
    if (t == "slopes") {
      into = &m.slopes;
    } else if (t == "breaks") {
      into = &m.breakpoints;
    } else if (t == "start") {
      if (start_seen || i + 1 >= l.tok.size()) throw ModelError("'start' takes one value", l.number);
      m.pseudo_start = rational_at(l.tok[++i], l.number);
      start_seen = true;
      into = nullptr;
    } else if (into) {
      into->push_back(rational_at(t, l.number));
    } else {
      throw ModelError("unexpected '" + t + "' in vertex line", l.number);
    }
  }
  try {
    m.validate();
  } catch (const ModelError& e) {
    throw ModelError(e.what(), l.number);
  }
  return m;
}

void add_named_vertex(Network& n, const std::string& id, Mapping m, std::size_t line) {
  if (n.find_vertex(id)) throw ModelError("duplicate vertex '" + id + "'", line);
  n.add_vertex(id, std::move(m));
}

}  // namespace

Network parse_network(std::string_view text) {
  Network n;
  struct Pref {
    std::size_t line;
    bool in;
    VertexId v;
    std::vector<std::string> ids;
  };
  std::vector<Pref> prefs;
  bool have_s = false, have_t = false;
  for (const TextLine& l : tokenize(text)) {
    const std::string& kw = l.tok[0];
    if (kw == "source" || kw == "sink") {
      need(l, 2, "source|sink <id>");
      if (l.tok.size() > 2) throw ModelError("trailing tokens after " + kw, l.number);
      bool& have = kw == "source" ? have_s : have_t;
      if (have) throw ModelError("second " + kw + " declaration", l.number);
      add_named_vertex(n, l.tok[1], Mapping::identity(), l.number);
      VertexId v = n.vertex(l.tok[1]);
      kw == "source" ? n.set_source(v) : n.set_sink(v);
      have = true;
    } else if (kw == "vertex") {
      need(l, 2, "vertex <id> [slopes ...]");
      add_named_vertex(n, l.tok[1], parse_mapping(l), l.number);
    } else if (kw == "edge") {
      need(l, 4, "edge <tail> <head> <capacity>");
      if (l.tok.size() > 4) throw ModelError("trailing tokens after edge", l.number);
      VertexId a = vertex_at(n, l.tok[1], l.number);
      VertexId b = vertex_at(n, l.tok[2], l.number);
      auto cap = parse_capacity(l.tok[3]);
      if (!cap) throw ModelError("bad capacity '" + l.tok[3] + "'", l.number);
      if (cap->is_finite() && cap->value() < 0) throw ModelError("capacity must be nonnegative", l.number);
      try {
        n.add_edge(a, b, *cap);
      } catch (const ModelError& e) {
        throw ModelError(e.what(), l.number);
      }
    } else if (kw == "in" || kw == "out") {
      need(l, 2, "in|out <v> <id>...");
      VertexId v = vertex_at(n, l.tok[1], l.number);
      prefs.push_back({l.number, kw == "in", v, {l.tok.begin() + 2, l.tok.end()}});
    } else if (kw == "provenance") {
      need(l, 3, "provenance vertex|edge ...");
      if (l.tok[1] == "vertex") {
        n.set_vertex_origin(vertex_at(n, l.tok[2], l.number), join(l.tok, 3));
      } else if (l.tok[1] == "edge") {
        need(l, 4, "provenance edge <tail> <head> <text>");
        n.set_edge_origin(edge_at(n, l.tok[2], l.tok[3], l.number), join(l.tok, 4));
      } else {
        throw ModelError("provenance applies to 'vertex' or 'edge'", l.number);
      }
    } else {
      throw ModelError("unknown keyword '" + kw + "'", l.number);
    }
  }
  if (!have_s) throw ModelError("no source declared");
  if (!have_t) throw ModelError("no sink declared");

  std::map<std::pair<VertexId, bool>, std::size_t> seen;
  for (const Pref& p : prefs) {
    if (!seen.emplace(std::make_pair(p.v, p.in), p.line).second)
      throw ModelError("second " + std::string(p.in ? "in" : "out") + " list for '" + n.name(p.v) + "'", p.line);
    if (n.is_terminal(p.v)) throw ModelError("terminal '" + n.name(p.v) + "' cannot rank its edges", p.line);
    const auto& incident = p.in ? n.in_edges(p.v) : n.out_edges(p.v);
    std::vector<EdgeId> order;
    for (const std::string& id : p.ids) {
      EdgeId e = p.in ? edge_at(n, id, n.name(p.v), p.line) : edge_at(n, n.name(p.v), id, p.line);
      for (EdgeId d : order)
        if (d == e) throw ModelError("'" + id + "' listed twice", p.line);
      order.push_back(e);
    }
    if (order.size() != incident.size())
      throw ModelError("preference list for '" + n.name(p.v) + "' must name all " +
                           std::to_string(incident.size()) + " " + (p.in ? "incoming" : "outgoing") + " edges",
                       p.line);
    p.in ? n.set_in_pref(p.v, std::move(order)) : n.set_out_pref(p.v, std::move(order));
  }
  n.validate();
  return n;
}

std::string write_network(const Network& n) {
  std::ostringstream os;
  for (VertexId v = 0; v < n.vertex_count(); ++v) {
    if (v == n.source()) {
      os << "source " << n.name(v) << '\n';
    } else if (v == n.sink()) {
      os << "sink " << n.name(v) << '\n';
    } else {
      const Mapping& m = n.mapping(v);
      os << "vertex " << n.name(v);
      if (!(m == Mapping::identity())) {
        os << " slopes";
        for (const auto& a : m.slopes) os << ' ' << to_string(a);
        if (m.pseudo_start != 0) os << " start " << to_string(m.pseudo_start);
        if (!m.breakpoints.empty()) {
          os << " breaks";
          for (const auto& c : m.breakpoints) os << ' ' << to_string(c);
        }
      }
      os << '\n';
    }
  }
  for (const Edge& e : n.edges()) os << "edge " << n.name(e.tail) << ' ' << n.name(e.head) << ' ' << to_string(e.cap) << '\n';
  for (VertexId v = 0; v < n.vertex_count(); ++v) {
    if (n.has_explicit_in_pref(v)) {
      os << "in " << n.name(v);
      for (EdgeId e : n.in_pref(v)) os << ' ' << n.name(n.edge_at(e).tail);
      os << '\n';
    }
    if (n.has_explicit_out_pref(v)) {
      os << "out " << n.name(v);
      for (EdgeId e : n.out_pref(v)) os << ' ' << n.name(n.edge_at(e).head);
      os << '\n';
    }
  }
  for (VertexId v = 0; v < n.vertex_count(); ++v)
    if (!n.vertex_origin(v).empty()) os << "provenance vertex " << n.name(v) << ' ' << n.vertex_origin(v) << '\n';
  for (EdgeId e = 0; e < n.edge_count(); ++e)
    if (!n.edge_origin(e).empty())
      os << "provenance edge " << n.name(n.edge_at(e).tail) << ' ' << n.name(n.edge_at(e).head) << ' '
         << n.edge_origin(e) << '\n';
  return os.str();
}

Flow parse_flow(std::string_view text, const Network& n) {
  Flow f = zero_flow(n);
  std::vector<bool> set(n.edge_count(), false);
  for (const TextLine& l : tokenize(text)) {
    if (l.tok.size() != 3) throw ModelError("expected: <tail> <head> <value>", l.number);
    EdgeId e = edge_at(n, l.tok[0], l.tok[1], l.number);
    if (set[e]) throw ModelError("edge " + l.tok[0] + " -> " + l.tok[1] + " given twice", l.number);
    f[e] = rational_at(l.tok[2], l.number);
    set[e] = true;
  }
  return f;
}

std::string write_flow(const Network& n, const Flow& f) {
  if (f.size() != n.edge_count()) throw ModelError("flow does not match the network");
  std::ostringstream os;
  for (EdgeId e = 0; e < n.edge_count(); ++e)
    os << n.name(n.edge_at(e).tail) << ' ' << n.name(n.edge_at(e).head) << ' ' << to_string(f[e]) << '\n';
  return os.str();
}

ScarfInstance parse_instance(std::string_view text) {
  ScarfInstance inst;
  std::map<std::string, std::size_t> vidx;
  std::map<std::string, std::size_t> col_of;
  std::map<std::string, std::size_t> edge_of;
  bool cols_built = false;
  auto build_cols = [&] {
    if (cols_built) return;
    for (std::size_t e = 0; e < inst.edges.size(); ++e) inst.cols.push_back({ColKind::Edge, e});
    for (std::size_t v = 0; v < inst.vertices.size(); ++v) {
      inst.cols.push_back({ColKind::Slack1, v});
      inst.cols.push_back({ColKind::Slack2, v});
    }
    for (std::size_t c = 0; c < inst.cols.size(); ++c) col_of[inst.col_label(c)] = c;
    cols_built = true;
  };
  auto column = [&](const std::string& label, std::size_t line) {
    auto it = col_of.find(label);
    if (it == col_of.end()) throw ModelError("unknown column '" + label + "'", line);
    return it->second;
  };
  std::size_t next_edge_row = 0;
  std::size_t cur_vertex = 0;
  std::size_t next_segment = 0;

  for (const TextLine& l : tokenize(text)) {
    const std::string& kw = l.tok[0];
    if (kw == "row") {
      need(l, 4, "row <label> b <r> entries ... rank ...");
      build_cols();
      ScarfRow row{RowKind::Edge, 0, 0, 0, {}, {}};
      const std::string& label = l.tok[1];
      std::size_t c1 = label.find(':');
      std::string kind = label.substr(0, c1);
      if (kind == "e") {
        auto it = edge_of.find(label.substr(c1 + 1));
        if (it == edge_of.end()) throw ModelError("unknown edge row '" + label + "'", l.number);
        if (it->second != next_edge_row) throw ModelError("edge rows must follow edge order", l.number);
        row.index = next_edge_row++;
      } else if (kind == "v" || kind == "out") {
        if (next_edge_row != inst.edges.size()) throw ModelError("vertex rows must follow all edge rows", l.number);
        std::string rest = label.substr(c1 + 1);
        std::string name = kind == "v" ? rest.substr(0, rest.rfind(':')) : rest;
        auto it = vidx.find(name);
        if (it == vidx.end()) throw ModelError("unknown vertex in row '" + label + "'", l.number);
        if (it->second != cur_vertex) throw ModelError("vertex rows must follow vertex order", l.number);
        row.index = cur_vertex;
        if (kind == "v") {
          row.kind = RowKind::Segment;
          row.segment = next_segment++;
          if (label != "v:" + name + ":" + std::to_string(row.segment + 1))
            throw ModelError("segment rows must be numbered 1, 2, ...", l.number);
        } else {
          if (next_segment == 0) throw ModelError("vertex '" + name + "' has no segment rows", l.number);
          row.kind = RowKind::Out;
          ++cur_vertex;
          next_segment = 0;
        }
      } else {
        throw ModelError("unknown row label '" + label + "'", l.number);
      }
      if (l.tok[2] != "b") throw ModelError("expected 'b' after the row label", l.number);
      row.b = rational_at(l.tok[3], l.number);
      std::size_t i = 4;
      if (i < l.tok.size() && l.tok[i] == "entries") {
        for (++i; i < l.tok.size() && l.tok[i] != "rank"; i += 2) {
          if (i + 1 >= l.tok.size()) throw ModelError("entry without a value", l.number);
          Rational a = rational_at(l.tok[i + 1], l.number);
          if (a <= 0) throw ModelError("entries must be positive", l.number);
          row.entries.emplace_back(column(l.tok[i], l.number), a);
        }
      }
      if (i < l.tok.size()) {
        if (l.tok[i] != "rank") throw ModelError("expected 'rank'", l.number);
        for (++i; i < l.tok.size(); ++i) row.pref.push_back(column(l.tok[i], l.number));
      }
      std::vector<std::size_t> a, b;
      for (const auto& [c, v] : row.entries) a.push_back(c);
      b = row.pref;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a != b || std::adjacent_find(a.begin(), a.end()) != a.end())
        throw ModelError("rank must list each entry column exactly once", l.number);
      inst.rows.push_back(std::move(row));
    } else if (cols_built) {
      throw ModelError("'" + kw + "' must come before the first row", l.number);
    } else if (kw == "source" || kw == "sink") {
      need(l, 2, "source|sink <id>");
      (kw == "source" ? inst.source : inst.sink) = l.tok[1];
    } else if (kw == "vertex") {
      if (l.tok.size() != 4 || l.tok[2] != "q") throw ModelError("expected: vertex <id> q <r>", l.number);
      if (!vidx.emplace(l.tok[1], inst.vertices.size()).second)
        throw ModelError("duplicate vertex '" + l.tok[1] + "'", l.number);
      inst.vertices.push_back(l.tok[1]);
      inst.q.push_back(rational_at(l.tok[3], l.number));
    } else if (kw == "edge") {
      if (l.tok.size() != 3) throw ModelError("expected: edge <tail> <head>", l.number);
      if (!edge_of.emplace(l.tok[1] + ":" + l.tok[2], inst.edges.size()).second)
        throw ModelError("duplicate edge", l.number);
      inst.edges.emplace_back(l.tok[1], l.tok[2]);
    } else {
      throw ModelError("unknown keyword '" + kw + "'", l.number);
    }
  }
  build_cols();
  if (next_edge_row != inst.edges.size() || cur_vertex != inst.vertices.size() || next_segment != 0)
    throw ModelError("instance is missing rows");
  inst.index();
  return inst;
}

std::string write_instance(const ScarfInstance& inst) {
  std::ostringstream os;
  os << "source " << inst.source << '\n' << "sink " << inst.sink << '\n';
  for (std::size_t v = 0; v < inst.vertices.size(); ++v)
    os << "vertex " << inst.vertices[v] << " q " << to_string(inst.q[v]) << '\n';
  for (const auto& [a, b] : inst.edges) os << "edge " << a << ' ' << b << '\n';
  for (std::size_t r = 0; r < inst.rows.size(); ++r) {
    const ScarfRow& row = inst.rows[r];
    os << "row " << inst.row_label(r) << " b " << to_string(row.b) << " entries";
    for (const auto& [c, a] : row.entries) os << ' ' << inst.col_label(c) << ' ' << to_string(a);
    os << " rank";
    for (std::size_t c : row.pref) os << ' ' << inst.col_label(c);
    os << '\n';
  }
  return os.str();
}

ScarfPoint parse_point(std::string_view text, const ScarfInstance& inst) {
  std::map<std::string, std::size_t> col_of;
  for (std::size_t c = 0; c < inst.cols.size(); ++c) col_of[inst.col_label(c)] = c;
  ScarfPoint x(inst.cols.size(), Rational(0));
  std::vector<bool> set(inst.cols.size(), false);
  for (const TextLine& l : tokenize(text)) {
    if (l.tok.size() != 3 || l.tok[0] != "x") throw ModelError("expected: x <column> <value>", l.number);
    auto it = col_of.find(l.tok[1]);
    if (it == col_of.end()) throw ModelError("unknown column '" + l.tok[1] + "'", l.number);
    if (set[it->second]) throw ModelError("column given twice", l.number);
    x[it->second] = rational_at(l.tok[2], l.number);
    set[it->second] = true;
  }
  return x;
}

std::string write_point(const ScarfInstance& inst, const ScarfPoint& x) {
  std::ostringstream os;
  for (std::size_t c = 0; c < inst.cols.size(); ++c) os << "x " << inst.col_label(c) << ' ' << to_string(x[c]) << '\n';
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelError("cannot write '" + path + "'");
  out << text;
}

}  // namespace sflow
