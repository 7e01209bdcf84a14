#include "mlnet/optimizer.hpp"

#include <algorithm>
#include <ostream>

#include "mlnet/error.hpp"
#include "mlnet/graph_io.hpp"

namespace mlnet {

OptSchedule OptSchedule::defaults_for(const MultilayerGraph& g, ChannelMode mode) {
  OptSchedule s;
  s.mode = mode;
  s.patience = std::max(1, 2 * g.size());
  s.max_iterations = std::max(1, 40 * g.size());
  return s;
}

std::string_view to_string(StopReason reason) {
  return reason == StopReason::MaxIterations ? "max_iterations" : "stalled";
}

std::vector<LinkId> influence_set(const MultilayerGraph& g, NodeId v, ChannelMode mode,
                                  bool include_interfacing_wired_links) {
  std::vector<LinkId> out;
  const bool skip_wired =
      mode == ChannelMode::SingleChannel && !include_interfacing_wired_links &&
      g.kind(v) == NodeKind::Interfacing;
  for (const Arc& a : g.arcs(v))
    if (!(skip_wired && g.link(a.link).kind == LinkKind::Wired)) out.push_back(a.link);
  if (mode == ChannelMode::SingleChannel) {
    for (NodeId u : g.wireless_neighbors(v))
      for (const Arc& a : g.arcs(u)) out.push_back(a.link);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

StepResult step(const MultilayerGraph& g, const WeightState& w, ChannelMode mode,
                bool include_interfacing_wired_links) {
  if (w.size() != g.num_links()) throw Error(ErrorCode::InvalidArgs, "weight state does not match graph");
  StepResult r{w, compute_report(g, w, mode)};
  for (LinkId e : influence_set(g, r.report.argmax, mode, include_interfacing_wired_links))
    r.weights.increment(e);
  return r;
}

OptimizationResult optimize(const MultilayerGraph& g, const OptSchedule& schedule) {
  if (schedule.max_iterations < 1 || schedule.patience < 1)
    throw Error(ErrorCode::InvalidParams, "max_iterations and patience must be >= 1");

  OptimizationResult res;
  WeightState w(g.num_links());
  res.best_weights = w;
  int since_best = 0;
  res.stop = StopReason::MaxIterations;

  for (int t = 0; t < schedule.max_iterations; ++t) {
    const BetweennessReport rep = compute_report(g, w, schedule.mode);
    res.trace.push_back({rep.max_eff, rep.argmax, g.kind(rep.argmax)});

    // A relative margin keeps float noise in B from counting as progress.
    if (t == 0 || rep.max_eff < res.best_value * (1.0 - 1e-12)) {
      res.best_value = rep.max_eff;
      res.best_iteration = t;
      res.best_weights = w;
      since_best = 0;
    } else if (++since_best >= schedule.patience) {
      res.stop = StopReason::Stalled;
      break;
    }
    if (t + 1 == schedule.max_iterations) break;

    for (LinkId e : influence_set(g, rep.argmax, schedule.mode, schedule.include_interfacing_wired_links)) {
      w.increment(e);
      ++res.increments_applied;
    }
  }
  res.final_weights = std::move(w);
  return res;
}

void write_trace_csv(std::ostream& os, const OptimizationResult& result) {
  os << "iter,max_eff,argmax,argmax_kind\n";
  for (std::size_t t = 0; t < result.trace.size(); ++t) {
    const TraceEntry& e = result.trace[t];
    os << t << ',' << format_double(e.max_eff) << ',' << e.argmax << ',' << to_string(e.argmax_kind)
       << '\n';
  }
}

}  // namespace mlnet
