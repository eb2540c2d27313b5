#pragma once

#include <string>
#include <string_view>

#include "sflow/model.hpp"
#include "sflow/scarf.hpp"

namespace sflow {

// Line-oriented text formats. Blank lines and '#' comments are ignored; all
// parse errors are ModelError carrying the 1-based line number.
//
// Network:
//   source <id> | sink <id>
//   vertex <id> [slopes <r>... [start <r>] [breaks <r>...]]
//   edge <tail> <head> <capacity|inf>
//   in <v> <tail>...      most preferred first
//   out <v> <head>...
//   provenance vertex <id> <text>
//   provenance edge <tail> <head> <text>
Network parse_network(std::string_view text);
std::string write_network(const Network& n);

// One "tail head value" line per edge; edges left out carry 0.
Flow parse_flow(std::string_view text, const Network& n);
std::string write_flow(const Network& n, const Flow& f);

// Instance:
//   source <id> | sink <id>
//   vertex <id> q <r>
//   edge <tail> <head>
//   row <label> b <r> entries (<col> <r>)... rank <col>...
ScarfInstance parse_instance(std::string_view text);
std::string write_instance(const ScarfInstance& inst);

// One "x <col> <value>" line per column; columns left out carry 0.
ScarfPoint parse_point(std::string_view text, const ScarfInstance& inst);
std::string write_point(const ScarfInstance& inst, const ScarfPoint& x);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace sflow
