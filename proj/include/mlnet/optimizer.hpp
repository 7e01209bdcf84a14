#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "mlnet/graph.hpp"
#include "mlnet/paths.hpp"

namespace mlnet {

struct OptSchedule {
  int max_iterations = 1;
  int patience = 1;  // stop after this many iterations without a new best
  ChannelMode mode = ChannelMode::MultiChannel;
  // Single channel, interfacing argmax: also raise the node's own wired links.
  bool include_interfacing_wired_links = true;

  /// patience = 2N, max_iterations = 40N.
  static OptSchedule defaults_for(const MultilayerGraph& g, ChannelMode mode);
};

struct TraceEntry {
  double max_eff = 0.0;
  NodeId argmax = -1;
  NodeKind argmax_kind = NodeKind::Wired;
};

enum class StopReason { MaxIterations, Stalled };
std::string_view to_string(StopReason reason);

struct OptimizationResult {
  WeightState best_weights;
  double best_value = 0.0;
  int best_iteration = 0;
  std::vector<TraceEntry> trace;  // trace[t] evaluated before the t-th update
  StopReason stop = StopReason::MaxIterations;
  std::uint64_t increments_applied = 0;
  WeightState final_weights;
};

/// Links whose weight is raised when v is the bottleneck. Multi channel:
/// links incident to v. Single channel: links incident to v or to any
/// wireless neighbour of v (each link once, ascending). With
/// include_interfacing_wired_links = false an interfacing v contributes only
/// its wireless links.
std::vector<LinkId> influence_set(const MultilayerGraph& g, NodeId v, ChannelMode mode,
                                  bool include_interfacing_wired_links = true);

struct StepResult {
  WeightState weights;       // after the increment
  BetweennessReport report;  // evaluated on the input weights
};

/// One round: evaluate, then add half a unit to every link in the argmax's
/// influence set.
StepResult step(const MultilayerGraph& g, const WeightState& w, ChannelMode mode,
                bool include_interfacing_wired_links = true);

/// Iterates `step` from unit weights and returns the best state seen.
OptimizationResult optimize(const MultilayerGraph& g, const OptSchedule& schedule);

/// `iter,max_eff,argmax,argmax_kind`
void write_trace_csv(std::ostream& os, const OptimizationResult& result);

}  // namespace mlnet
