#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mlnet/graph.hpp"
#include "mlnet/paths.hpp"
#include "mlnet/rng.hpp"

namespace mlnet {

struct NextHop {
  NodeId next;
  LinkId link;
  double prob;
};

/// Per (node, destination) next-hop distribution over minimum-weight routes;
/// a hop's probability is proportional to the number of minimum-weight
/// routes that continue through it, so per-hop sampling reproduces uniform
/// choice among whole routes.
class RoutingTables {
 public:
  NodeId size() const { return n_; }
  std::span<const NextHop> next_hops(NodeId node, NodeId dest) const {
    const std::size_t k = static_cast<std::size_t>(dest) * static_cast<std::size_t>(n_) + node;
    return {hops_.data() + offsets_[k], hops_.data() + offsets_[k + 1]};
  }
  const NextHop& sample(NodeId node, NodeId dest, Rng& rng) const;
  const WeightState& weights() const { return weights_; }

 private:
  friend RoutingTables build_routing_tables(const MultilayerGraph& g, const WeightState& w);
  NodeId n_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<NextHop> hops_;
  WeightState weights_;
};

RoutingTables build_routing_tables(const MultilayerGraph& g, const WeightState& w);

struct SimConfig {
  double rate = 0.0;  // mean packets injected per step, network-wide (Poisson)
  int steps = 3000;
  int warmup = 500;
  ChannelMode mode = ChannelMode::MultiChannel;
  std::uint64_t seed = 1;
  bool audit = false;  // verify the broadcast rule on every step
  std::int64_t queue_cap = 2'000'000;  // stop early once this many packets are queued
};

struct SimResult {
  std::vector<std::int64_t> queue;      // total queued packets after each step
  std::vector<std::int64_t> delivered;  // cumulative deliveries after each step
  std::int64_t injected = 0;
  double eta = 0.0;  // queue growth rate over the post-warmup window / rate, clamped to [0, 1]
  bool conserved = true;
  bool audit_ok = true;
  std::int64_t wireless_transmissions = 0;
  std::int64_t blocked_attempts = 0;
};

/// Discrete-time simulation. Each step: Poisson(rate) packets are injected
/// at uniform (s, t), s != t; nodes are visited in a fresh random order and
/// each sends up to C_i packets. Wired traffic is first-in-first-out. In
/// single-channel mode a wireless send u->v requires neither endpoint to be
/// blocked and then blocks wireless send/receive at u, v and all of their
/// wireless neighbours for the rest of the step; a sender skips blocked
/// packets and tries the next one in its queue. Packets move one hop per
/// step and leave the network at their destination. Throws InvalidConfig.
SimResult simulate(const MultilayerGraph& g, const RoutingTables& tables, const SimConfig& cfg);

/// Least-squares slope of `series` over [from, end).
double queue_slope(std::span<const std::int64_t> series, std::size_t from);

struct ThresholdOptions {
  int steps = 3000;
  int warmup = 500;
  double eta_threshold = 0.02;
  double rel_tolerance = 0.02;  // stop bisecting when (hi - lo) / hi falls below this
  int max_bisections = 16;
  std::uint64_t seed = 1;
};

struct ThresholdResult {
  double measured = 0.0;   // R_c from bisection
  double predicted = 0.0;  // N (N - 1) / (B/C)^eff_max under the tables' weights
  double lo = 0.0, hi = 0.0;
  int simulations = 0;
};

/// Throws NoConvergence if no congested rate is found below 64x the
/// prediction.
ThresholdResult congestion_threshold(const MultilayerGraph& g, const RoutingTables& tables,
                                     ChannelMode mode, const ThresholdOptions& opts = {});

/// `step,total_queue,delivered`
void write_queue_csv(std::ostream& os, const SimResult& r);
nlohmann::json to_json(const SimResult& r, const SimConfig& cfg);

}  // namespace mlnet
