#include "mlnet/packet_sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <ostream>

#include <nlohmann/json.hpp>

#include "mlnet/error.hpp"

namespace mlnet {

const NextHop& RoutingTables::sample(NodeId node, NodeId dest, Rng& rng) const {
  const auto hops = next_hops(node, dest);
  if (hops.size() == 1) return hops.front();
  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  for (const NextHop& h : hops) {
    if (u < h.prob) return h;
    u -= h.prob;
  }
  return hops.back();
}

RoutingTables build_routing_tables(const MultilayerGraph& g, const WeightState& w) {
  if (w.size() != g.num_links()) throw Error(ErrorCode::InvalidArgs, "weight state does not match graph");
  const NodeId n = g.size();
  RoutingTables t;
  t.n_ = n;
  t.weights_ = w;
  t.offsets_.assign(static_cast<std::size_t>(n) * n + 1, 0);
  DagBuilder builder(g);
  for (NodeId dest = 0; dest < n; ++dest) {
    // Undirected links: the DAG rooted at dest gives distances and route
    // counts towards dest.
    const ShortestPathDag& dag = builder.run(w, dest);
    for (NodeId u = 0; u < n; ++u) {
      const std::size_t k = static_cast<std::size_t>(dest) * n + u;
      t.offsets_[k] = t.hops_.size();
      if (u == dest) continue;
      for (const Arc& a : g.arcs(u)) {
        if (dag.dist[a.to] + w.doubled(a.link) == dag.dist[u])
          t.hops_.push_back({a.to, a.link, dag.sigma[a.to] / dag.sigma[u]});
      }
    }
  }
  t.offsets_.back() = t.hops_.size();
  return t;
}

double queue_slope(std::span<const std::int64_t> series, std::size_t from) {
  if (series.size() < from + 2) return 0.0;
  const std::size_t m = series.size() - from;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = static_cast<double>(i);
    const double y = static_cast<double>(series[from + i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double md = static_cast<double>(m);
  const double denom = md * sxx - sx * sx;
  return denom > 0 ? (md * sxy - sx * sy) / denom : 0.0;
}

namespace {

struct Packet {
  NodeId dest;
  NodeId next;
  bool wireless;
};

bool within_one_hop(const MultilayerGraph& g, NodeId a, NodeId b) {
  if (a == b) return true;
  const auto nb = g.wireless_neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

bool audit_step(const MultilayerGraph& g, std::span<const std::pair<NodeId, NodeId>> tx) {
  for (std::size_t i = 0; i < tx.size(); ++i) {
    for (std::size_t j = i + 1; j < tx.size(); ++j) {
      for (NodeId a : {tx[i].first, tx[i].second})
        for (NodeId b : {tx[j].first, tx[j].second})
          if (within_one_hop(g, a, b)) return false;
    }
  }
  return true;
}

}  // namespace

SimResult simulate(const MultilayerGraph& g, const RoutingTables& tables, const SimConfig& cfg) {
  if (!(cfg.rate >= 0.0) || cfg.steps <= 0 || cfg.warmup < 0 || cfg.warmup >= cfg.steps)
    throw Error(ErrorCode::InvalidConfig, "need rate >= 0 and steps > warmup >= 0");
  if (tables.size() != g.size()) throw Error(ErrorCode::InvalidConfig, "routing tables do not match graph");
  const NodeId n = g.size();
  if (n < 2) throw Error(ErrorCode::InvalidConfig, "need at least two nodes");

  Rng rng(cfg.seed);
  SimResult res;
  res.queue.reserve(static_cast<std::size_t>(cfg.steps));
  res.delivered.reserve(static_cast<std::size_t>(cfg.steps));

  const bool single = cfg.mode == ChannelMode::SingleChannel;
  std::vector<std::deque<Packet>> queues(static_cast<std::size_t>(n));
  std::vector<NodeId> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::vector<char> blocked(static_cast<std::size_t>(n), 0);
  std::vector<std::pair<NodeId, Packet>> in_flight;
  std::vector<std::pair<NodeId, NodeId>> wl_tx;

  std::uniform_int_distribution<NodeId> any_node(0, n - 1);
  std::uniform_int_distribution<NodeId> other_node(0, n - 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::poisson_distribution<std::int64_t> arrivals(cfg.rate > 0 ? cfg.rate : 1.0);

  auto route = [&](NodeId at, NodeId dest) {
    const NextHop& h = tables.sample(at, dest, rng);
    return Packet{dest, h.next, g.link(h.link).kind == LinkKind::Wireless};
  };
  auto block_around = [&](NodeId v) {
    blocked[v] = 1;
    for (NodeId x : g.wireless_neighbors(v)) blocked[x] = 1;
  };

  std::int64_t queued = 0, delivered = 0;
  for (int step = 0; step < cfg.steps; ++step) {
    const std::int64_t inject = cfg.rate > 0 ? arrivals(rng) : 0;
    for (std::int64_t k = 0; k < inject; ++k) {
      const NodeId s = any_node(rng);
      NodeId t = other_node(rng);
      if (t >= s) ++t;
      queues[s].push_back(route(s, t));
    }
    res.injected += inject;
    queued += inject;

    std::shuffle(order.begin(), order.end(), rng);
    if (single) std::fill(blocked.begin(), blocked.end(), 0);
    in_flight.clear();
    wl_tx.clear();

    for (NodeId u : order) {
      auto& q = queues[u];
      if (q.empty()) continue;
      const double c = g.capacity(u);
      int budget = static_cast<int>(std::floor(c));
      if (unit(rng) < c - std::floor(c)) ++budget;
      if (budget == 0) continue;

      if (!single || g.kind(u) == NodeKind::Wired) {
        for (; budget > 0 && !q.empty(); --budget) {
          in_flight.emplace_back(q.front().next, q.front());
          q.pop_front();
        }
        continue;
      }
      // First-in-first-possible-out scan.
      for (std::size_t i = 0; i < q.size() && budget > 0;) {
        const Packet p = q[i];
        if (!p.wireless) {
          in_flight.emplace_back(p.next, p);
          q.erase(q.begin() + static_cast<std::ptrdiff_t>(i));
          --budget;
          continue;
        }
        if (blocked[u] || blocked[p.next]) {
          ++res.blocked_attempts;
          if (blocked[u] && g.kind(u) == NodeKind::Wireless) break;
          ++i;
          continue;
        }
        in_flight.emplace_back(p.next, p);
        q.erase(q.begin() + static_cast<std::ptrdiff_t>(i));
        --budget;
        ++res.wireless_transmissions;
        if (cfg.audit) wl_tx.emplace_back(u, p.next);
        block_around(u);
        block_around(p.next);
      }
    }
    if (cfg.audit && single && !audit_step(g, wl_tx)) res.audit_ok = false;

    for (auto& [v, p] : in_flight) {
      if (v == p.dest) {
        ++delivered;
        --queued;
      } else {
        queues[v].push_back(route(v, p.dest));
      }
    }

    res.queue.push_back(queued);
    res.delivered.push_back(delivered);
    if (cfg.audit) {
      std::int64_t actual = 0;
      for (const auto& q : queues) actual += static_cast<std::int64_t>(q.size());
      if (actual != queued || res.injected != delivered + queued) res.conserved = false;
    }
    if (queued > cfg.queue_cap) break;
  }

  if (cfg.rate > 0) {
    const std::size_t from = res.queue.size() > static_cast<std::size_t>(cfg.warmup) + 1
                                 ? static_cast<std::size_t>(cfg.warmup)
                                 : 0;
    res.eta = std::clamp(queue_slope(res.queue, from) / cfg.rate, 0.0, 1.0);
  }
  return res;
}

ThresholdResult congestion_threshold(const MultilayerGraph& g, const RoutingTables& tables,
                                     ChannelMode mode, const ThresholdOptions& opts) {
  const NodeId n = g.size();
  ThresholdResult out;
  const BetweennessReport rep = compute_report(g, tables.weights(), mode);
  out.predicted = static_cast<double>(n) * (n - 1) / rep.max_eff;

  auto congested = [&](double rate) {
    SimConfig cfg;
    cfg.rate = rate;
    cfg.steps = opts.steps;
    cfg.warmup = opts.warmup;
    cfg.mode = mode;
    cfg.seed = opts.seed;
    ++out.simulations;
    return simulate(g, tables, cfg).eta > opts.eta_threshold;
  };

  double lo = 0.0, hi = 2.0 * out.predicted;
  while (!congested(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 64.0 * out.predicted)
      throw Error(ErrorCode::NoConvergence, "no congestion found below 64x the predicted threshold");
  }
  for (int k = 0; k < opts.max_bisections && (hi - lo) > opts.rel_tolerance * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    (congested(mid) ? hi : lo) = mid;
  }
  out.lo = lo;
  out.hi = hi;
  out.measured = 0.5 * (lo + hi);
  return out;
}

void write_queue_csv(std::ostream& os, const SimResult& r) {
  os << "step,total_queue,delivered\n";
  for (std::size_t i = 0; i < r.queue.size(); ++i) os << i << ',' << r.queue[i] << ',' << r.delivered[i] << '\n';
}

nlohmann::json to_json(const SimResult& r, const SimConfig& cfg) {
  return {{"rate", cfg.rate},
          {"steps", r.queue.size()},
          {"warmup", cfg.warmup},
          {"mode", std::string(to_string(cfg.mode))},
          {"seed", cfg.seed},
          {"injected", r.injected},
          {"delivered", r.delivered.empty() ? 0 : r.delivered.back()},
          {"queued", r.queue.empty() ? 0 : r.queue.back()},
          {"eta", r.eta},
          {"wireless_transmissions", r.wireless_transmissions},
          {"blocked_attempts", r.blocked_attempts}};
}

}  // namespace mlnet
