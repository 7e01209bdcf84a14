#pragma once

#include <iosfwd>
#include <string>

#include "mlnet/graph.hpp"

namespace mlnet {

// Line-oriented text format:
//
//   N_W N_L N_I
//   id kind capacity [x y]      one line per node, ascending id
//   u v kind [weight]           one line per link, link-id order
//
// Blank lines and lines starting with '#' are ignored. Numbers are written in
// shortest round-trip form so files are byte-stable and diffable.

void write_graph(std::ostream& os, const MultilayerGraph& g);
/// Same as write_graph with a trailing weight column on each link line.
void write_weighted_graph(std::ostream& os, const MultilayerGraph& g, const WeightState& w);

struct ParsedGraph {
  MultilayerGraph graph;
  WeightState weights;  // all-zero unless the file carries a weight column
};

ParsedGraph read_graph(std::istream& is);
ParsedGraph read_graph_file(const std::string& path);
void write_graph_file(const std::string& path, const MultilayerGraph& g);

std::string format_double(double x);

}  // namespace mlnet
