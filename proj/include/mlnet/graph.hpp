#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace mlnet {

using NodeId = std::int32_t;
using LinkId = std::int32_t;

enum class NodeKind : std::uint8_t { Wired, Wireless, Interfacing };
enum class LinkKind : std::uint8_t { Wired, Wireless };

std::string_view to_string(NodeKind kind);
std::string_view to_string(LinkKind kind);
NodeKind parse_node_kind(std::string_view text);
LinkKind parse_link_kind(std::string_view text);

constexpr bool in_wired_layer(NodeKind k) { return k != NodeKind::Wireless; }
constexpr bool in_wireless_layer(NodeKind k) { return k != NodeKind::Wired; }

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct NodeSpec {
  NodeId id = 0;
  NodeKind kind = NodeKind::Wired;
  double capacity = 1.0;
  std::optional<Point> position;
};

struct LinkSpec {
  NodeId u = 0;
  NodeId v = 0;
  LinkKind kind = LinkKind::Wired;
};

/// One direction of an undirected link as seen from its tail.
struct Arc {
  NodeId to;
  LinkId link;
};

/// Validated, immutable two-layer graph with CSR adjacency.
///
/// Node ids are dense in [0, size()). Links are undirected and simple: at most
/// one link of any kind joins a pair. Wireless-layer nodes (Wireless and
/// Interfacing) carry a position in the unit square.
class MultilayerGraph {
 public:
  /// Validates and indexes the input. Throws Error with DuplicateLink,
  /// SelfLoop, LayerViolation, Disconnected, NonpositiveCapacity,
  /// MissingPosition, OutOfBounds or UnknownNode.
  static MultilayerGraph build(std::vector<NodeSpec> nodes, std::vector<LinkSpec> links);

  NodeId size() const { return static_cast<NodeId>(kinds_.size()); }
  LinkId num_links() const { return static_cast<LinkId>(links_.size()); }

  NodeKind kind(NodeId v) const { return kinds_[check(v)]; }
  double capacity(NodeId v) const { return capacities_[check(v)]; }
  const std::optional<Point>& position(NodeId v) const { return positions_[check(v)]; }
  const LinkSpec& link(LinkId e) const { return links_[e]; }
  std::span<const LinkSpec> links() const { return links_; }

  std::span<const Arc> arcs(NodeId v) const {
    check(v);
    return {arcs_.data() + offsets_[v], arcs_.data() + offsets_[v + 1]};
  }
  // Unchecked variants for inner loops.
  const Arc* arcs_begin(NodeId v) const { return arcs_.data() + offsets_[v]; }
  const Arc* arcs_end(NodeId v) const { return arcs_.data() + offsets_[v + 1]; }

  std::size_t degree(NodeId v) const { return arcs(v).size(); }

  /// Nodes joined to v by a WirelessLink, ascending. Empty for wired nodes.
  std::span<const NodeId> wireless_neighbors(NodeId v) const {
    check(v);
    return {wl_nbrs_.data() + wl_offsets_[v], wl_nbrs_.data() + wl_offsets_[v + 1]};
  }

  int wired_layer_size() const { return n_wired_layer_; }       // N_W
  int wireless_layer_size() const { return n_wireless_layer_; }  // N_L
  int interfacing_count() const { return n_interfacing_; }       // N_I

  std::vector<NodeId> nodes_of_kind(NodeKind kind) const;

  std::span<const NodeKind> kinds() const { return kinds_; }
  std::span<const double> capacities() const { return capacities_; }

 private:
  MultilayerGraph() = default;
  NodeId check(NodeId v) const;

  std::vector<NodeKind> kinds_;
  std::vector<double> capacities_;
  std::vector<std::optional<Point>> positions_;
  std::vector<LinkSpec> links_;
  std::vector<std::size_t> offsets_;
  std::vector<Arc> arcs_;
  std::vector<std::size_t> wl_offsets_;
  std::vector<NodeId> wl_nbrs_;
  int n_wired_layer_ = 0;
  int n_wireless_layer_ = 0;
  int n_interfacing_ = 0;
};

/// Per-link routing weight stored as a count of half-units: w = 1 + 0.5 k.
/// Path lengths are compared as sums of `doubled(e)` = 2 + k, which keeps
/// tie detection exact.
class WeightState {
 public:
  WeightState() = default;
  explicit WeightState(LinkId num_links) : half_units_(static_cast<std::size_t>(num_links), 0) {}
  explicit WeightState(std::vector<std::uint32_t> half_units) : half_units_(std::move(half_units)) {}

  LinkId size() const { return static_cast<LinkId>(half_units_.size()); }
  std::uint32_t half_units(LinkId e) const { return half_units_[e]; }
  std::int64_t doubled(LinkId e) const { return 2 + static_cast<std::int64_t>(half_units_[e]); }
  double weight(LinkId e) const { return 1.0 + 0.5 * half_units_[e]; }

  void increment(LinkId e, std::uint32_t by = 1) { half_units_[e] += by; }
  std::uint64_t total_half_units() const;

  std::span<const std::uint32_t> raw() const { return half_units_; }

  friend bool operator==(const WeightState&, const WeightState&) = default;

 private:
  std::vector<std::uint32_t> half_units_;
};

}  // namespace mlnet
