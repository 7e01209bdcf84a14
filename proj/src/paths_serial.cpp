// Reference betweenness: one thread, binary heap, explicit predecessor lists.
// Kept deliberately close to the textbook formulation so the parallel kernel
// in paths.cpp has an independent implementation to be checked against.

#include <functional>
#include <queue>
#include <stack>
#include <string>
#include <utility>

#include "mlnet/error.hpp"
#include "mlnet/paths.hpp"

namespace mlnet {

std::vector<double> betweenness_serial(const MultilayerGraph& g, const WeightState& w) {
  const NodeId n = g.size();
  std::vector<double> cb(static_cast<std::size_t>(n), 0.0);
  using Item = std::pair<std::int64_t, NodeId>;

  for (NodeId s = 0; s < n; ++s) {
    std::vector<std::int64_t> dist(n, -1);
    std::vector<double> sigma(n, 0.0);
    std::vector<std::vector<NodeId>> preds(n);
    std::vector<char> done(n, 0);
    std::stack<NodeId> order;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;

    dist[s] = 0;
    sigma[s] = 1.0;
    pq.emplace(0, s);
    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      if (done[v]) continue;
      done[v] = 1;
      order.push(v);
      for (const Arc& a : g.arcs(v)) {
        const std::int64_t nd = d + w.doubled(a.link);
        if (dist[a.to] < 0 || nd < dist[a.to]) {
          dist[a.to] = nd;
          sigma[a.to] = sigma[v];
          preds[a.to].assign(1, v);
          pq.emplace(nd, a.to);
        } else if (nd == dist[a.to]) {
          sigma[a.to] += sigma[v];
          preds[a.to].push_back(v);
        }
      }
    }
    if (static_cast<NodeId>(order.size()) != n)
      throw Error(ErrorCode::DisconnectedPair, "source " + std::to_string(s));

    std::vector<double> delta(n, 0.0);
    while (!order.empty()) {
      const NodeId x = order.top();
      order.pop();
      for (NodeId p : preds[x]) delta[p] += sigma[p] / sigma[x] * (1.0 + delta[x]);
      if (x != s) cb[x] += delta[x];
    }
  }
  return cb;
}

}  // namespace mlnet
