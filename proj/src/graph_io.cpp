#include "mlnet/graph_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "mlnet/error.hpp"

namespace mlnet {

std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

namespace {

void write_impl(std::ostream& os, const MultilayerGraph& g, const WeightState* w) {
  os << g.wired_layer_size() << ' ' << g.wireless_layer_size() << ' ' << g.interfacing_count()
     << '\n';
  for (NodeId v = 0; v < g.size(); ++v) {
    os << v << ' ' << to_string(g.kind(v)) << ' ' << format_double(g.capacity(v));
    if (const auto& p = g.position(v)) os << ' ' << format_double(p->x) << ' ' << format_double(p->y);
    os << '\n';
  }
  for (LinkId e = 0; e < g.num_links(); ++e) {
    const LinkSpec& l = g.link(e);
    os << l.u << ' ' << l.v << ' ' << to_string(l.kind);
    if (w) os << ' ' << format_double(w->weight(e));
    os << '\n';
  }
}

double parse_number(const std::string& tok, int line_no) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad number '" + tok + "'");
  return x;
}

long parse_int(const std::string& tok, int line_no) {
  long x = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad integer '" + tok + "'");
  return x;
}

}  // namespace

void write_graph(std::ostream& os, const MultilayerGraph& g) { write_impl(os, g, nullptr); }

void write_weighted_graph(std::ostream& os, const MultilayerGraph& g, const WeightState& w) {
  write_impl(os, g, &w);
}

ParsedGraph read_graph(std::istream& is) {
  std::string line;
  int line_no = 0;
  bool have_header = false;
  long nw = 0, nl = 0, ni = 0, expected_nodes = 0;
  std::vector<NodeSpec> nodes;
  std::vector<LinkSpec> links;
  std::vector<std::uint32_t> half_units;

  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty() || tok[0][0] == '#') continue;

    if (!have_header) {
      if (tok.size() != 3) throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 'N_W N_L N_I'");
      nw = parse_int(tok[0], line_no);
      nl = parse_int(tok[1], line_no);
      ni = parse_int(tok[2], line_no);
      expected_nodes = nw + nl - ni;
      if (nw < 0 || nl < 0 || ni < 0 || expected_nodes < 0)
        throw Error(ErrorCode::ParseError, "negative layer sizes in header");
      have_header = true;
      continue;
    }

    if (static_cast<long>(nodes.size()) < expected_nodes) {
      if (tok.size() != 3 && tok.size() != 5)
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 'id kind capacity [x y]'");
      NodeSpec s;
      s.id = static_cast<NodeId>(parse_int(tok[0], line_no));
      s.kind = parse_node_kind(tok[1]);
      s.capacity = parse_number(tok[2], line_no);
      if (tok.size() == 5) s.position = Point{parse_number(tok[3], line_no), parse_number(tok[4], line_no)};
      nodes.push_back(s);
      continue;
    }

    if (tok.size() != 3 && tok.size() != 4)
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 'u v kind [weight]'");
    LinkSpec l;
    l.u = static_cast<NodeId>(parse_int(tok[0], line_no));
    l.v = static_cast<NodeId>(parse_int(tok[1], line_no));
    l.kind = parse_link_kind(tok[2]);
    links.push_back(l);
    std::uint32_t k = 0;
    if (tok.size() == 4) {
      const double w = parse_number(tok[3], line_no);
      const double doubled = 2.0 * (w - 1.0);
      if (w < 1.0 || std::abs(doubled - std::round(doubled)) > 1e-9)
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": weight must be 1 + k/2");
      k = static_cast<std::uint32_t>(std::llround(doubled));
    }
    half_units.push_back(k);
  }
  if (!have_header) throw Error(ErrorCode::ParseError, "missing header");
  if (static_cast<long>(nodes.size()) != expected_nodes)
    throw Error(ErrorCode::ParseError, "expected " + std::to_string(expected_nodes) + " node lines");

  MultilayerGraph g = MultilayerGraph::build(std::move(nodes), std::move(links));
  if (g.wired_layer_size() != nw || g.wireless_layer_size() != nl || g.interfacing_count() != ni)
    throw Error(ErrorCode::ParseError, "header layer counts disagree with node kinds");
  return ParsedGraph{std::move(g), WeightState(std::move(half_units))};
}

ParsedGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return read_graph(in);
}

void write_graph_file(const std::string& path, const MultilayerGraph& g) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  write_graph(out, g);
}

}  // namespace mlnet
