#pragma once

#include <string>

#include "twd/graph.hpp"

namespace twd {

class ParseError : public Error {
public:
  ParseError(const std::string &msg, int line)
      : Error("line " + std::to_string(line) + ": " + msg), line_number(line) {}
  int line_number;
};

enum class GraphFormat { dimacs, edgelist };

/// DIMACS: "p edge <n> <m>" then "e <u> <v>" (1-indexed), "c" comments.
/// Edgelist: "<n> <m>" header then one "<u> <v>" per line; 1-indexed unless
/// zero_indexed. Duplicate edge lines keep their multiplicity.
Graph parse_graph(const std::string &text, GraphFormat fmt,
                  bool zero_indexed = false);

/// Deterministic writer: vertices renumbered by sorted id, edges sorted.
/// parse(write(g)) reproduces ids 1..n (or 0..n-1) graphs exactly.
std::string write_graph(const Graph &g, GraphFormat fmt,
                        bool zero_indexed = false);

Graph load_graph_file(const std::string &path);  // format by extension
GraphFormat format_for_path(const std::string &path);

}  // namespace twd
