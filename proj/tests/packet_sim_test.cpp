#include <cmath>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "mlnet/error.hpp"
#include "mlnet/experiment.hpp"
#include "mlnet/packet_sim.hpp"
#include "oracles.hpp"

using namespace mlnet;
using namespace mlnet::testing;

namespace {

MultilayerGraph desk_graph(ChannelMode mode, std::uint64_t seed) {
  ExperimentConfig cfg = make_preset("custom");
  cfg.mode = mode;
  cfg.k_min = 6;
  return realize_graph(cfg, {30, 60, 3}, Variant{}, seed);
}

}  // namespace

TEST(RoutingTables, PathHasSingleNextHop) {
  const MultilayerGraph g = wired_graph(3, {{0, 1}, {1, 2}});
  const RoutingTables t = build_routing_tables(g, WeightState(g.num_links()));
  const auto hops = t.next_hops(0, 2);
  ASSERT_EQ(hops.size(), 1u);
  EXPECT_EQ(hops[0].next, 1);
  EXPECT_DOUBLE_EQ(hops[0].prob, 1.0);
  EXPECT_TRUE(t.next_hops(2, 2).empty());
}

TEST(RoutingTables, FourCycleSplitsEvenly) {
  const MultilayerGraph g = wired_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  const RoutingTables t = build_routing_tables(g, WeightState(g.num_links()));
  const auto hops = t.next_hops(0, 2);
  ASSERT_EQ(hops.size(), 2u);
  EXPECT_DOUBLE_EQ(hops[0].prob, 0.5);
  EXPECT_DOUBLE_EQ(hops[1].prob, 0.5);
}

TEST(RoutingTables, ProbabilitiesFollowDownstreamRouteCounts) {
  Rng rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    const MultilayerGraph g = random_connected_graph(9, 0.35, rng);
    const WeightState w = random_weights(g.num_links(), rng, 3);
    const RoutingTables t = build_routing_tables(g, w);
    for (NodeId u = 0; u < g.size(); ++u) {
      for (NodeId d = 0; d < g.size(); ++d) {
        if (u == d) continue;
        const auto paths = minimum_weight_paths(g, w, u, d);
        double total = 0.0;
        for (const NextHop& h : t.next_hops(u, d)) {
          int through = 0;
          for (const auto& p : paths) through += p.nodes[1] == h.next;
          EXPECT_NEAR(h.prob, static_cast<double>(through) / paths.size(), 1e-12);
          total += h.prob;
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
      }
    }
  }
}

TEST(Simulate, ZeroRateKeepsQueuesEmpty) {
  const MultilayerGraph g = desk_graph(ChannelMode::SingleChannel, 1);
  const RoutingTables t = build_routing_tables(g, WeightState(g.num_links()));
  SimConfig cfg;
  cfg.rate = 0.0;
  cfg.steps = 200;
  cfg.warmup = 50;
  const SimResult r = simulate(g, t, cfg);
  for (auto q : r.queue) EXPECT_EQ(q, 0);
  EXPECT_EQ(r.eta, 0.0);
  EXPECT_EQ(r.injected, 0);
}

TEST(Simulate, BlockingRuleAndConservationAudit) {
  const MultilayerGraph g = desk_graph(ChannelMode::SingleChannel, 2);
  const RoutingTables t = build_routing_tables(g, WeightState(g.num_links()));
  const double predicted = g.size() * (g.size() - 1.0) /
                           compute_report(g, t.weights(), ChannelMode::SingleChannel).max_eff;
  SimConfig cfg;
  cfg.mode = ChannelMode::SingleChannel;
  cfg.rate = 1.5 * predicted;
  cfg.steps = 600;
  cfg.warmup = 100;
  cfg.audit = true;
  const SimResult r = simulate(g, t, cfg);
  EXPECT_TRUE(r.audit_ok);
  EXPECT_TRUE(r.conserved);
  EXPECT_GT(r.wireless_transmissions, 0);
  EXPECT_GT(r.blocked_attempts, 0);
  EXPECT_EQ(r.injected, r.delivered.back() + r.queue.back());
}

TEST(Simulate, AllWiredGraphIgnoresMode) {
  Rng rng(72);
  const MultilayerGraph g = random_connected_graph(30, 0.1, rng, false);
  const RoutingTables t = build_routing_tables(g, WeightState(g.num_links()));
  SimConfig cfg;
  cfg.rate = 3.0;
  cfg.steps = 400;
  cfg.warmup = 100;
  cfg.seed = 5;
  cfg.mode = ChannelMode::SingleChannel;
  const SimResult single = simulate(g, t, cfg);
  cfg.mode = ChannelMode::MultiChannel;
  const SimResult multi = simulate(g, t, cfg);
  EXPECT_EQ(single.queue, multi.queue);
  EXPECT_EQ(single.delivered, multi.delivered);
}

TEST(Simulate, FreeFlowFarBelowThreshold) {
  const MultilayerGraph g = desk_graph(ChannelMode::MultiChannel, 3);
  const RoutingTables t = build_routing_tables(g, WeightState(g.num_links()));
  const double predicted = g.size() * (g.size() - 1.0) /
                           compute_report(g, t.weights(), ChannelMode::MultiChannel).max_eff;
  SimConfig cfg;
  cfg.rate = 0.3 * predicted;
  cfg.steps = 5000;
  cfg.warmup = 500;
  const SimResult r = simulate(g, t, cfg);
  EXPECT_LT(r.eta, 0.01);
}

TEST(Simulate, CongestedAtTwicePrediction) {
  for (ChannelMode mode : {ChannelMode::MultiChannel, ChannelMode::SingleChannel}) {
    const MultilayerGraph g = desk_graph(mode, 4);
    const RoutingTables t = build_routing_tables(g, WeightState(g.num_links()));
    const double predicted = g.size() * (g.size() - 1.0) / compute_report(g, t.weights(), mode).max_eff;
    SimConfig cfg;
    cfg.mode = mode;
    cfg.rate = 2.0 * predicted;
    cfg.steps = 3000;
    cfg.warmup = 500;
    const SimResult r = simulate(g, t, cfg);
    EXPECT_GT(r.eta, 0.1) << to_string(mode);
  }
}

TEST(Simulate, Deterministic) {
  const MultilayerGraph g = desk_graph(ChannelMode::SingleChannel, 5);
  const RoutingTables t = build_routing_tables(g, WeightState(g.num_links()));
  SimConfig cfg;
  cfg.mode = ChannelMode::SingleChannel;
  cfg.rate = 2.0;
  cfg.steps = 300;
  cfg.warmup = 50;
  EXPECT_EQ(simulate(g, t, cfg).queue, simulate(g, t, cfg).queue);
}

TEST(Simulate, InvalidConfig) {
  const MultilayerGraph g = wired_graph(2, {{0, 1}});
  const RoutingTables t = build_routing_tables(g, WeightState(g.num_links()));
  SimConfig cfg;
  cfg.steps = 10;
  cfg.warmup = 10;
  try {
    simulate(g, t, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidConfig);
  }
  cfg.warmup = 2;
  cfg.rate = -1.0;
  EXPECT_THROW(simulate(g, t, cfg), Error);
}

TEST(QueueSlope, LinearSeries) {
  std::vector<std::int64_t> s(20);
  std::iota(s.begin(), s.end(), 0);
  for (auto& x : s) x *= 3;
  EXPECT_NEAR(queue_slope(s, 5), 3.0, 1e-12);
}

TEST(Threshold, MultiChannelExceedsSingleChannel) {
  const MultilayerGraph g = desk_graph(ChannelMode::SingleChannel, 6);
  const RoutingTables t = build_routing_tables(g, WeightState(g.num_links()));
  const ThresholdResult single = congestion_threshold(g, t, ChannelMode::SingleChannel);
  const ThresholdResult multi = congestion_threshold(g, t, ChannelMode::MultiChannel);
  EXPECT_GT(multi.measured, single.measured);
  EXPECT_GT(multi.predicted, single.predicted);
  EXPECT_LE(single.lo, single.measured);
  EXPECT_GE(single.hi, single.measured);
}

TEST(QueueCsv, Header) {
  const MultilayerGraph g = wired_graph(2, {{0, 1}});
  const RoutingTables t = build_routing_tables(g, WeightState(g.num_links()));
  SimConfig cfg;
  cfg.rate = 0.5;
  cfg.steps = 5;
  cfg.warmup = 1;
  std::ostringstream os;
  write_queue_csv(os, simulate(g, t, cfg));
  EXPECT_EQ(os.str().rfind("step,total_queue,delivered\n0,", 0), 0u);
}
