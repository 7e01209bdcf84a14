#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mlnet/graph.hpp"

namespace mlnet {

enum class ChannelMode { SingleChannel, MultiChannel };

std::string_view to_string(ChannelMode mode);
ChannelMode parse_channel_mode(std::string_view text);

/// Minimum-weight path DAG from one source. `dist` is in doubled units
/// (sum of 2 + k_e), `sigma[v]` counts minimum-weight source->v paths and
/// `order` lists nodes by nondecreasing distance.
struct ShortestPathDag {
  NodeId source = -1;
  std::vector<std::int64_t> dist;
  std::vector<double> sigma;
  std::vector<NodeId> order;
};

/// Reusable single-source solver (bucket queue over integer distances).
/// Not thread-safe; give each worker its own instance.
class DagBuilder {
 public:
  explicit DagBuilder(const MultilayerGraph& g);

  const ShortestPathDag& run(const WeightState& w, NodeId source);
  /// Same, with the largest doubled link weight precomputed by the caller.
  const ShortestPathDag& run(const WeightState& w, NodeId source, std::int64_t max_doubled);

  /// Adds this source's dependency delta_s(v) to `acc[v]` for every v != s.
  /// Must follow run() for the same weights.
  void accumulate_dependencies(const WeightState& w, std::span<double> acc);

  /// Expected hop count to every node under uniform choice among minimum
  /// weight routes. Must follow run() for the same weights.
  std::vector<double> expected_hops(const WeightState& w) const;

 private:
  const MultilayerGraph* g_;
  ShortestPathDag dag_;
  std::vector<double> delta_;
  std::vector<std::vector<NodeId>> buckets_;
  std::vector<char> settled_;
};

/// All-pairs node betweenness over ordered pairs (s, t), s != t, with ties
/// split equally and endpoints excluded. OpenMP-parallel over sources; the
/// per-source contributions are reduced in a fixed order, so the result is
/// bit-identical for any thread count.
std::vector<double> betweenness(const MultilayerGraph& g, const WeightState& w);

/// Largest doubled link weight (at least 2).
std::int64_t max_doubled(const WeightState& w);

/// Single-threaded textbook reference (binary heap + predecessor lists).
std::vector<double> betweenness_serial(const MultilayerGraph& g, const WeightState& w);

struct BetweennessReport {
  ChannelMode mode = ChannelMode::MultiChannel;
  std::vector<double> betweenness;
  std::vector<double> ratio;      // B_i / C_i
  std::vector<double> eff_ratio;  // ratio plus wireless neighbours' ratios (single channel)
  double max_eff = 0.0;
  NodeId argmax = -1;  // lowest id among ties
};

BetweennessReport effective_ratios(const MultilayerGraph& g, std::span<const double> b,
                                   ChannelMode mode);

inline BetweennessReport compute_report(const MultilayerGraph& g, const WeightState& w,
                                        ChannelMode mode) {
  return effective_ratios(g, betweenness(g, w), mode);
}

nlohmann::json to_json(const BetweennessReport& r);

double expected_hop_distance(const MultilayerGraph& g, const WeightState& w, NodeId s, NodeId t);

}  // namespace mlnet
