// Independent reference computations for tests. Everything here is brute
// force on purpose and shares no code with the library beyond its types.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "mlnet/graph.hpp"
#include "mlnet/rng.hpp"

namespace mlnet::testing {

// A, B, C wireless; D interfacing; E wired. Wireless links A-B, A-C, A-D,
// wired link D-E.
inline constexpr NodeId A = 0, B = 1, C = 2, D = 3, E = 4;

inline MultilayerGraph toy_graph() {
  std::vector<NodeSpec> nodes = {
      {A, NodeKind::Wireless, 1.0, Point{0.5, 0.5}},
      {B, NodeKind::Wireless, 1.0, Point{0.2, 0.8}},
      {C, NodeKind::Wireless, 1.0, Point{0.8, 0.8}},
      {D, NodeKind::Interfacing, 1.0, Point{0.5, 0.2}},
      {E, NodeKind::Wired, 1.0, std::nullopt},
  };
  std::vector<LinkSpec> links = {
      {A, B, LinkKind::Wireless},
      {A, C, LinkKind::Wireless},
      {A, D, LinkKind::Wireless},
      {D, E, LinkKind::Wired},
  };
  return MultilayerGraph::build(std::move(nodes), std::move(links));
}

inline MultilayerGraph wired_graph(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<NodeSpec> nodes;
  for (int i = 0; i < n; ++i) nodes.push_back({i, NodeKind::Wired, 1.0, std::nullopt});
  std::vector<LinkSpec> links;
  for (auto [u, v] : edges) links.push_back({u, v, LinkKind::Wired});
  return MultilayerGraph::build(std::move(nodes), std::move(links));
}

// Random connected graph on n nodes: random spanning tree plus each other
// pair with probability p. Node kinds are mixed: the first third is wired,
// one node is interfacing, the rest wireless, and links follow the layers.
inline MultilayerGraph random_connected_graph(int n, double p, Rng& rng, bool mixed_kinds = true) {
  std::vector<NodeKind> kinds(static_cast<std::size_t>(n), NodeKind::Wired);
  if (mixed_kinds && n >= 3) {
    const int n_wired = std::max(1, n / 3);
    kinds[static_cast<std::size_t>(n_wired)] = NodeKind::Interfacing;
    for (int i = n_wired + 1; i < n; ++i) kinds[static_cast<std::size_t>(i)] = NodeKind::Wireless;
  }
  auto allowed = [&](int u, int v) {
    const NodeKind a = kinds[static_cast<std::size_t>(u)], b = kinds[static_cast<std::size_t>(v)];
    return (in_wired_layer(a) && in_wired_layer(b)) || (in_wireless_layer(a) && in_wireless_layer(b));
  };
  auto kind_of = [&](int u, int v) {
    const NodeKind a = kinds[static_cast<std::size_t>(u)], b = kinds[static_cast<std::size_t>(v)];
    return in_wired_layer(a) && in_wired_layer(b) ? LinkKind::Wired : LinkKind::Wireless;
  };

  std::set<std::pair<int, int>> edges;
  // Tree: attach each node to an earlier allowed node. The interfacing node
  // bridges the two layers, so every node has an allowed predecessor.
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (int i = 1; i < n; ++i) {
    std::vector<int> cands;
    for (int j = 0; j < i; ++j)
      if (allowed(i, j)) cands.push_back(j);
    const int j = cands[std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(rng)];
    edges.insert({j, i});
  }
  std::bernoulli_distribution coin(p);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (allowed(u, v) && coin(rng)) edges.insert({u, v});

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<NodeSpec> nodes;
  for (int i = 0; i < n; ++i) {
    NodeSpec s{i, kinds[static_cast<std::size_t>(i)], 1.0, std::nullopt};
    if (in_wireless_layer(s.kind)) s.position = Point{unit(rng), unit(rng)};
    nodes.push_back(s);
  }
  std::vector<LinkSpec> links;
  for (auto [u, v] : edges) links.push_back({u, v, kind_of(u, v)});
  return MultilayerGraph::build(std::move(nodes), std::move(links));
}

inline WeightState random_weights(LinkId m, Rng& rng, std::uint32_t max_half_units) {
  std::uniform_int_distribution<std::uint32_t> k(0, max_half_units);
  std::vector<std::uint32_t> v(static_cast<std::size_t>(m));
  for (auto& x : v) x = k(rng);
  return WeightState(std::move(v));
}

// Every simple s->t path with its length in half units and its node list.
struct EnumeratedPath {
  std::int64_t length;
  std::vector<NodeId> nodes;
};

inline void enumerate_paths(const MultilayerGraph& g, const WeightState& w, NodeId at, NodeId t,
                            std::vector<char>& on_path, std::vector<NodeId>& stack, std::int64_t len,
                            std::vector<EnumeratedPath>& out) {
  if (at == t) {
    out.push_back({len, stack});
    return;
  }
  for (const Arc& a : g.arcs(at)) {
    if (on_path[a.to]) continue;
    on_path[a.to] = 1;
    stack.push_back(a.to);
    // half units: weight 1 + k/2 is 2 + k halves
    enumerate_paths(g, w, a.to, t, on_path, stack, len + 2 + w.half_units(a.link), out);
    stack.pop_back();
    on_path[a.to] = 0;
  }
}

inline std::vector<EnumeratedPath> minimum_weight_paths(const MultilayerGraph& g, const WeightState& w,
                                                        NodeId s, NodeId t) {
  std::vector<EnumeratedPath> all;
  std::vector<char> on_path(static_cast<std::size_t>(g.size()), 0);
  std::vector<NodeId> stack{s};
  on_path[s] = 1;
  enumerate_paths(g, w, s, t, on_path, stack, 0, all);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (const auto& p : all) best = std::min(best, p.length);
  std::vector<EnumeratedPath> min_paths;
  for (auto& p : all)
    if (p.length == best) min_paths.push_back(std::move(p));
  return min_paths;
}

// B_i = sum over ordered (s, t) of (minimum-weight paths through i as an
// interior node) / (all minimum-weight paths).
inline std::vector<double> enumerate_betweenness(const MultilayerGraph& g, const WeightState& w) {
  std::vector<double> b(static_cast<std::size_t>(g.size()), 0.0);
  for (NodeId s = 0; s < g.size(); ++s) {
    for (NodeId t = 0; t < g.size(); ++t) {
      if (s == t) continue;
      const auto paths = minimum_weight_paths(g, w, s, t);
      const double share = 1.0 / static_cast<double>(paths.size());
      for (const auto& p : paths)
        for (std::size_t k = 1; k + 1 < p.nodes.size(); ++k) b[p.nodes[k]] += share;
    }
  }
  return b;
}

inline double enumerate_expected_hops(const MultilayerGraph& g, const WeightState& w, NodeId s, NodeId t) {
  const auto paths = minimum_weight_paths(g, w, s, t);
  double sum = 0.0;
  for (const auto& p : paths) sum += static_cast<double>(p.nodes.size() - 1);
  return sum / static_cast<double>(paths.size());
}

// O(n^2 log n) evaluation of d_ij <= max(r_i, r_j) with r_i the distance to
// the k-th nearest other point.
inline std::set<std::pair<int, int>> geometric_links(const std::vector<Point>& pts, int k) {
  const int n = static_cast<int>(pts.size());
  std::vector<double> r(static_cast<std::size_t>(n));
  auto dist = [&](int i, int j) { return std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y); };
  for (int i = 0; i < n; ++i) {
    std::vector<double> d;
    for (int j = 0; j < n; ++j)
      if (j != i) d.push_back(dist(i, j));
    std::sort(d.begin(), d.end());
    r[static_cast<std::size_t>(i)] = d[static_cast<std::size_t>(k - 1)];
  }
  std::set<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (dist(i, j) <= std::max(r[static_cast<std::size_t>(i)], r[static_cast<std::size_t>(j)])) out.insert({i, j});
  return out;
}

}  // namespace mlnet::testing
