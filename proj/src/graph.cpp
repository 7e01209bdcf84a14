#include "mlnet/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_set>

#include "mlnet/error.hpp"

namespace mlnet {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateLink: return "DuplicateLink";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::LayerViolation: return "LayerViolation";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::NonpositiveCapacity: return "NonpositiveCapacity";
    case ErrorCode::MissingPosition: return "MissingPosition";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::ConnectivityRetriesExhausted: return "ConnectivityRetriesExhausted";
    case ErrorCode::TooManyInterfaces: return "TooManyInterfaces";
    case ErrorCode::MergeCreatedDuplicateLink: return "MergeCreatedDuplicateLink";
    case ErrorCode::DisconnectedPair: return "DisconnectedPair";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::InvalidN: return "InvalidN";
    case ErrorCode::NotEnoughNodes: return "NotEnoughNodes";
    case ErrorCode::InvalidArgs: return "InvalidArgs";
    case ErrorCode::NoWirelessPairs: return "NoWirelessPairs";
    case ErrorCode::InsufficientRecords: return "InsufficientRecords";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Wired: return "wired";
    case NodeKind::Wireless: return "wireless";
    case NodeKind::Interfacing: return "interfacing";
  }
  return "?";
}

std::string_view to_string(LinkKind kind) {
  return kind == LinkKind::Wired ? "wired" : "wireless";
}

NodeKind parse_node_kind(std::string_view text) {
  if (text == "wired") return NodeKind::Wired;
  if (text == "wireless") return NodeKind::Wireless;
  if (text == "interfacing") return NodeKind::Interfacing;
  throw Error(ErrorCode::ParseError, "unknown node kind '" + std::string(text) + "'");
}

LinkKind parse_link_kind(std::string_view text) {
  if (text == "wired") return LinkKind::Wired;
  if (text == "wireless") return LinkKind::Wireless;
  throw Error(ErrorCode::ParseError, "unknown link kind '" + std::string(text) + "'");
}

std::uint64_t WeightState::total_half_units() const {
  return std::accumulate(half_units_.begin(), half_units_.end(), std::uint64_t{0});
}

NodeId MultilayerGraph::check(NodeId v) const {
  if (v < 0 || v >= static_cast<NodeId>(kinds_.size()))
    throw Error(ErrorCode::UnknownNode, "node " + std::to_string(v));
  return v;
}

std::vector<NodeId> MultilayerGraph::nodes_of_kind(NodeKind kind) const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < size(); ++v)
    if (kinds_[v] == kind) out.push_back(v);
  return out;
}

MultilayerGraph MultilayerGraph::build(std::vector<NodeSpec> nodes, std::vector<LinkSpec> links) {
  const auto n = static_cast<NodeId>(nodes.size());
  std::sort(nodes.begin(), nodes.end(),
            [](const NodeSpec& a, const NodeSpec& b) { return a.id < b.id; });
  for (NodeId i = 0; i < n; ++i) {
    if (nodes[i].id != i)
      throw Error(ErrorCode::UnknownNode,
                  "node ids must be unique and dense in [0, n); saw " + std::to_string(nodes[i].id));
  }

  MultilayerGraph g;
  g.kinds_.reserve(n);
  g.capacities_.reserve(n);
  g.positions_.reserve(n);
  for (const NodeSpec& s : nodes) {
    if (!(s.capacity > 0.0))
      throw Error(ErrorCode::NonpositiveCapacity, "node " + std::to_string(s.id));
    if (in_wireless_layer(s.kind)) {
      if (!s.position)
        throw Error(ErrorCode::MissingPosition, "wireless-layer node " + std::to_string(s.id));
      const Point p = *s.position;
      if (p.x < 0.0 || p.x > 1.0 || p.y < 0.0 || p.y > 1.0)
        throw Error(ErrorCode::OutOfBounds, "node " + std::to_string(s.id) + " outside unit square");
    }
    g.kinds_.push_back(s.kind);
    g.capacities_.push_back(s.capacity);
    g.positions_.push_back(s.position);
    if (in_wired_layer(s.kind)) ++g.n_wired_layer_;
    if (in_wireless_layer(s.kind)) ++g.n_wireless_layer_;
    if (s.kind == NodeKind::Interfacing) ++g.n_interfacing_;
  }

  std::unordered_set<std::uint64_t> seen;
  seen.reserve(links.size() * 2);
  std::vector<std::size_t> degree(n, 0);
  for (LinkSpec& l : links) {
    if (l.u < 0 || l.u >= n || l.v < 0 || l.v >= n)
      throw Error(ErrorCode::UnknownNode,
                  "link " + std::to_string(l.u) + "-" + std::to_string(l.v));
    if (l.u == l.v) throw Error(ErrorCode::SelfLoop, "node " + std::to_string(l.u));
    if (l.u > l.v) std::swap(l.u, l.v);
    const auto key = (static_cast<std::uint64_t>(l.u) << 32) | static_cast<std::uint32_t>(l.v);
    if (!seen.insert(key).second)
      throw Error(ErrorCode::DuplicateLink,
                  "link " + std::to_string(l.u) + "-" + std::to_string(l.v));
    const bool ok = l.kind == LinkKind::Wired
                        ? in_wired_layer(g.kinds_[l.u]) && in_wired_layer(g.kinds_[l.v])
                        : in_wireless_layer(g.kinds_[l.u]) && in_wireless_layer(g.kinds_[l.v]);
    if (!ok)
      throw Error(ErrorCode::LayerViolation,
                  std::string(to_string(l.kind)) + " link " + std::to_string(l.u) + "-" +
                      std::to_string(l.v) + " joins " + std::string(to_string(g.kinds_[l.u])) +
                      " and " + std::string(to_string(g.kinds_[l.v])));
    ++degree[l.u];
    ++degree[l.v];
  }
  g.links_ = std::move(links);

  g.offsets_.assign(n + 1, 0);
  for (NodeId v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + degree[v];
  g.arcs_.resize(g.offsets_[n]);
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (LinkId e = 0; e < static_cast<LinkId>(g.links_.size()); ++e) {
    const LinkSpec& l = g.links_[e];
    g.arcs_[fill[l.u]++] = Arc{l.v, e};
    g.arcs_[fill[l.v]++] = Arc{l.u, e};
  }
  for (NodeId v = 0; v < n; ++v) {
    std::sort(g.arcs_.begin() + g.offsets_[v], g.arcs_.begin() + g.offsets_[v + 1],
              [](const Arc& a, const Arc& b) { return a.to < b.to; });
  }

  g.wl_offsets_.assign(n + 1, 0);
  for (NodeId v = 0; v < n; ++v) {
    for (auto a = g.arcs_begin(v); a != g.arcs_end(v); ++a)
      if (g.links_[a->link].kind == LinkKind::Wireless) g.wl_nbrs_.push_back(a->to);
    g.wl_offsets_[v + 1] = g.wl_nbrs_.size();
  }

  // Connectivity.
  if (n > 0) {
    std::vector<char> mark(n, 0);
    std::vector<NodeId> stack{0};
    mark[0] = 1;
    NodeId reached = 1;
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (auto a = g.arcs_begin(v); a != g.arcs_end(v); ++a) {
        if (!mark[a->to]) {
          mark[a->to] = 1;
          ++reached;
          stack.push_back(a->to);
        }
      }
    }
    if (reached != n)
      throw Error(ErrorCode::Disconnected,
                  "only " + std::to_string(reached) + " of " + std::to_string(n) + " nodes reachable");
  }
  return g;
}

}  // namespace mlnet
