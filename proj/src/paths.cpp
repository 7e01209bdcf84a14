#include "mlnet/paths.hpp"

#include <algorithm>
#include <string>

#include <nlohmann/json.hpp>

#include "mlnet/error.hpp"

namespace mlnet {

std::string_view to_string(ChannelMode mode) {
  return mode == ChannelMode::SingleChannel ? "single" : "multi";
}

ChannelMode parse_channel_mode(std::string_view text) {
  if (text == "single" || text == "SingleChannel") return ChannelMode::SingleChannel;
  if (text == "multi" || text == "MultiChannel") return ChannelMode::MultiChannel;
  throw Error(ErrorCode::ParseError, "unknown mode '" + std::string(text) + "'");
}

DagBuilder::DagBuilder(const MultilayerGraph& g) : g_(&g) {
  const auto n = static_cast<std::size_t>(g.size());
  dag_.dist.resize(n);
  dag_.sigma.resize(n);
  dag_.order.reserve(n);
  delta_.resize(n);
  settled_.resize(n);
}

std::int64_t max_doubled(const WeightState& w) {
  std::int64_t m = 2;
  for (LinkId e = 0; e < w.size(); ++e) m = std::max(m, w.doubled(e));
  return m;
}

const ShortestPathDag& DagBuilder::run(const WeightState& w, NodeId source) {
  return run(w, source, max_doubled(w));
}

const ShortestPathDag& DagBuilder::run(const WeightState& w, NodeId source, std::int64_t max_w) {
  const MultilayerGraph& g = *g_;
  const NodeId n = g.size();
  if (source < 0 || source >= n) throw Error(ErrorCode::UnknownNode, "source " + std::to_string(source));

  const auto nb = static_cast<std::size_t>(max_w + 1);
  if (buckets_.size() < nb) buckets_.resize(nb);

  constexpr std::int64_t kInf = INT64_MAX;
  std::fill(dag_.dist.begin(), dag_.dist.end(), kInf);
  std::fill(settled_.begin(), settled_.end(), 0);
  dag_.order.clear();
  dag_.source = source;

  // Dial's algorithm: every pending distance lies in [cur, cur + max_w], so a
  // ring of max_w + 1 buckets is enough.
  dag_.dist[source] = 0;
  buckets_[0].push_back(source);
  std::size_t pending = 1;
  std::int64_t cur = 0;
  while (pending > 0) {
    auto& bucket = buckets_[static_cast<std::size_t>(cur) % nb];
    if (bucket.empty()) {
      ++cur;
      continue;
    }
    const NodeId v = bucket.back();
    bucket.pop_back();
    --pending;
    if (settled_[v] || dag_.dist[v] != cur) continue;
    settled_[v] = 1;
    dag_.order.push_back(v);
    for (const Arc* a = g.arcs_begin(v); a != g.arcs_end(v); ++a) {
      const std::int64_t nd = cur + w.doubled(a->link);
      if (nd < dag_.dist[a->to]) {
        dag_.dist[a->to] = nd;
        buckets_[static_cast<std::size_t>(nd) % nb].push_back(a->to);
        ++pending;
      }
    }
  }
  if (static_cast<NodeId>(dag_.order.size()) != n)
    throw Error(ErrorCode::DisconnectedPair, "source " + std::to_string(source) + " cannot reach every node");

  // Pull-based path counts: each sigma is a sum in adjacency order, which makes
  // the result independent of how equal-distance nodes were popped.
  dag_.sigma[source] = 1.0;
  for (std::size_t i = 1; i < dag_.order.size(); ++i) {
    const NodeId v = dag_.order[i];
    double s = 0.0;
    for (const Arc* a = g.arcs_begin(v); a != g.arcs_end(v); ++a)
      if (dag_.dist[a->to] + w.doubled(a->link) == dag_.dist[v]) s += dag_.sigma[a->to];
    dag_.sigma[v] = s;
  }
  return dag_;
}

void DagBuilder::accumulate_dependencies(const WeightState& w, std::span<double> acc) {
  const MultilayerGraph& g = *g_;
  for (auto it = dag_.order.rbegin(); it != dag_.order.rend(); ++it) {
    const NodeId v = *it;
    double d = 0.0;
    for (const Arc* a = g.arcs_begin(v); a != g.arcs_end(v); ++a) {
      const NodeId u = a->to;
      if (dag_.dist[v] + w.doubled(a->link) == dag_.dist[u])
        d += dag_.sigma[v] / dag_.sigma[u] * (1.0 + delta_[u]);
    }
    delta_[v] = d;
    if (v != dag_.source) acc[v] += d;
  }
}

std::vector<double> DagBuilder::expected_hops(const WeightState& w) const {
  const MultilayerGraph& g = *g_;
  // hop_sum[v] = total hops over all minimum-weight source->v paths.
  std::vector<double> hop_sum(static_cast<std::size_t>(g.size()), 0.0);
  std::vector<double> out(static_cast<std::size_t>(g.size()), 0.0);
  for (std::size_t i = 1; i < dag_.order.size(); ++i) {
    const NodeId v = dag_.order[i];
    double h = 0.0;
    for (const Arc* a = g.arcs_begin(v); a != g.arcs_end(v); ++a)
      if (dag_.dist[a->to] + w.doubled(a->link) == dag_.dist[v]) h += hop_sum[a->to] + dag_.sigma[a->to];
    hop_sum[v] = h;
    out[v] = h / dag_.sigma[v];
  }
  return out;
}

std::vector<double> betweenness(const MultilayerGraph& g, const WeightState& w) {
  const NodeId n = g.size();
  constexpr NodeId kBlock = 32;
  const NodeId blocks = (n + kBlock - 1) / kBlock;
  std::vector<std::vector<double>> partial(static_cast<std::size_t>(blocks));
  const std::int64_t max_w = max_doubled(w);

#pragma omp parallel
  {
    DagBuilder builder(g);
#pragma omp for schedule(dynamic, 1)
    for (NodeId b = 0; b < blocks; ++b) {
      std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
      const NodeId end = std::min(n, (b + 1) * kBlock);
      for (NodeId s = b * kBlock; s < end; ++s) {
        builder.run(w, s, max_w);
        builder.accumulate_dependencies(w, acc);
      }
      partial[static_cast<std::size_t>(b)] = std::move(acc);
    }
  }

  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (const auto& acc : partial)
    for (NodeId v = 0; v < n; ++v) out[v] += acc[v];
  return out;
}

BetweennessReport effective_ratios(const MultilayerGraph& g, std::span<const double> b,
                                   ChannelMode mode) {
  const NodeId n = g.size();
  if (static_cast<NodeId>(b.size()) != n) throw Error(ErrorCode::InvalidArgs, "betweenness size mismatch");
  BetweennessReport r;
  r.mode = mode;
  r.betweenness.assign(b.begin(), b.end());
  r.ratio.resize(static_cast<std::size_t>(n));
  for (NodeId v = 0; v < n; ++v) r.ratio[v] = b[v] / g.capacity(v);
  r.eff_ratio = r.ratio;
  if (mode == ChannelMode::SingleChannel) {
    for (NodeId v = 0; v < n; ++v)
      for (NodeId u : g.wireless_neighbors(v)) r.eff_ratio[v] += r.ratio[u];
  }
  r.argmax = n > 0 ? 0 : -1;
  r.max_eff = n > 0 ? r.eff_ratio[0] : 0.0;
  for (NodeId v = 1; v < n; ++v) {
    if (r.eff_ratio[v] > r.max_eff) {
      r.max_eff = r.eff_ratio[v];
      r.argmax = v;
    }
  }
  return r;
}

nlohmann::json to_json(const BetweennessReport& r) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t v = 0; v < r.betweenness.size(); ++v) {
    nodes.push_back({{"node", v}, {"B", r.betweenness[v]}, {"ratio", r.ratio[v]},
                     {"eff_ratio", r.eff_ratio[v]}});
  }
  return {{"mode", std::string(to_string(r.mode))},
          {"max_eff", r.max_eff},
          {"argmax", r.argmax},
          {"nodes", std::move(nodes)}};
}

double expected_hop_distance(const MultilayerGraph& g, const WeightState& w, NodeId s, NodeId t) {
  if (t < 0 || t >= g.size()) throw Error(ErrorCode::UnknownNode, "target " + std::to_string(t));
  if (s < 0 || s >= g.size()) throw Error(ErrorCode::UnknownNode, "source " + std::to_string(s));
  if (s == t) return 0.0;
  DagBuilder builder(g);
  builder.run(w, s);
  return builder.expected_hops(w)[t];
}

}  // namespace mlnet
