// Command-line front end: solve, verify, reduce, scarf build/check.
#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "sflow/io.hpp"
#include "sflow/pipeline.hpp"
#include "sflow/reduction.hpp"
#include "sflow/scarf.hpp"
#include "sflow/stability.hpp"

using namespace sflow;

namespace {

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_file(path, text);
}

std::string path_text(const Network& n, const BlockingPath& p) {
  std::string s;
  for (std::size_t i = 0; i < p.vertices.size(); ++i) s += (i ? " " : "") + n.name(p.vertices[i]);
  return s;
}

int cmd_verify(const std::string& net_path, const std::string& flow_path, std::size_t max_len, bool nonneg) {
  Network n = parse_network(read_file(net_path));
  Flow f = parse_flow(read_file(flow_path), n);
  SearchOptions opt;
  opt.max_len = max_len;
  opt.allow_zero_components = nonneg;
  StabilityReport r = is_stable(n, f, opt);
  switch (r.verdict) {
    case Verdict::Stable:
      std::cout << "stable\n";
      return 0;
    case Verdict::Unstable: {
      std::cout << "unstable\nblocking path: " << path_text(n, *r.path) << '\n';
      auto amounts = realize(n, f, *r.path);
      for (std::size_t i = 0; i < r.path->edges.size(); ++i) {
        const Edge& e = n.edge_at(r.path->edges[i]);
        std::cout << "  " << n.name(e.tail) << ' ' << n.name(e.head) << " +" << to_string(amounts[i]) << '\n';
      }
      return 2;
    }
    case Verdict::Infeasible:
      std::cout << "infeasible\n";
      for (const auto& c : r.feasibility.capacity) {
        const Edge& e = n.edge_at(c.edge);
        std::cout << "  capacity " << n.name(e.tail) << ' ' << n.name(e.head) << ' ' << to_string(c.value) << '\n';
      }
      for (const auto& b : r.feasibility.balance)
        std::cout << "  balance " << n.name(b.vertex) << " in " << to_string(b.in) << " out " << to_string(b.out)
                  << '\n';
      return 3;
    case Verdict::Inconclusive:
      std::cout << "inconclusive: no blocking path up to the length limit\n";
      return 4;
  }
  return 1;
}

int cmd_scarf_check(const std::string& inst_path, const std::string& point_path) {
  ScarfInstance inst = parse_instance(read_file(inst_path));
  ScarfPoint x = parse_point(read_file(point_path), inst);
  if (!in_polytope(inst, x)) {
    std::cout << "point violates A x <= b or x >= 0\n";
    return 3;
  }
  DominanceReport rep = check_dominance(inst, x);
  for (std::size_t c = 0; c < inst.cols.size(); ++c) {
    std::cout << inst.col_label(c) << ' ';
    if (rep.witness[c])
      std::cout << "dominated-by " << inst.row_label(*rep.witness[c]) << '\n';
    else
      std::cout << "not-dominated\n";
  }
  return rep.all() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stable flows in networks with monotone piecewise-linear vertex mappings"};
  app.require_subcommand(1);
  unsigned long seed = 0;
  app.add_option("--seed", seed, "Accepted and ignored; every command is deterministic");

  std::string net, flow, out, trace, report, target, inst, point;
  std::size_t max_len = 0;
  bool nonneg = false;

  auto* solve_cmd = app.add_subcommand("solve", "Compute a stable flow");
  solve_cmd->add_option("net", net, "Network document")->required();
  solve_cmd->add_option("-o,--out", out, "Flow output (default stdout)");
  solve_cmd->add_option("--trace", trace, "Write the solver trace here");
  solve_cmd->add_option("--report", report, "Write the stage report here");

  auto* verify_cmd = app.add_subcommand("verify", "Check a flow for feasibility and stability");
  verify_cmd->add_option("net", net, "Network document")->required();
  verify_cmd->add_option("flow", flow, "Flow document")->required();
  verify_cmd->add_option("--max-len", max_len, "Longest path searched, in vertices (default 2|V|)");
  verify_cmd->add_flag("--nonneg", nonneg, "Allow zero entries in the augmentation vector");

  auto* reduce_cmd = app.add_subcommand("reduce", "Write a reduced network");
  reduce_cmd->add_option("net", net, "Network document")->required();
  reduce_cmd->add_option("--to", target, "lm or acyclic")->required()->check(CLI::IsMember({"lm", "acyclic"}));
  reduce_cmd->add_option("-o,--out", out, "Output (default stdout)");

  auto* scarf_cmd = app.add_subcommand("scarf", "Scarf instance tools");
  scarf_cmd->require_subcommand(1);
  auto* build_cmd = scarf_cmd->add_subcommand("build", "Instance document for a network");
  build_cmd->add_option("net", net, "Network document")->required();
  build_cmd->add_option("-o,--out", out, "Output (default stdout)");
  auto* check_cmd = scarf_cmd->add_subcommand("check", "Dominance verdict per column");
  check_cmd->add_option("inst", inst, "Instance document")->required();
  check_cmd->add_option("point", point, "Point document")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) {
      Network n = parse_network(read_file(net));
      Solution sol = solve(n);
      std::string head = "# solve " + net + "\n# method " + sol.report.method;
      if (!sol.report.pivot_stage.empty()) head += " on " + sol.report.pivot_stage + " (" + sol.report.pivot_reason + ")";
      emit(out, head + "\n" + write_flow(n, sol.flow));
      if (!trace.empty()) write_file(trace, format_trace(sol.stages.back().net, sol.trace));
      if (!report.empty()) write_file(report, format_report(sol));
      return 0;
    }
    if (*verify_cmd) return cmd_verify(net, flow, max_len, nonneg);
    if (*reduce_cmd) {
      Network n = parse_network(read_file(net));
      if (!n.all_lm()) n = mplm_to_lm(n).net;
      if (target == "acyclic") n = cyclic_to_acyclic(n).net;
      emit(out, write_network(n));
      return 0;
    }
    if (*build_cmd) {
      emit(out, write_instance(build_scarf(parse_network(read_file(net)))));
      return 0;
    }
    if (*check_cmd) return cmd_scarf_check(inst, point);
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
