#include "mlnet/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <unordered_set>

#include "mlnet/error.hpp"
#include "mlnet/placement.hpp"

namespace mlnet {

std::vector<int> LayerGraph::degrees() const {
  std::vector<int> d(static_cast<std::size_t>(n), 0);
  for (auto [u, v] : edges) {
    ++d[u];
    ++d[v];
  }
  return d;
}

std::string_view to_string(PlacementMode mode) {
  return mode == PlacementMode::RandomPlacement ? "RP" : "OP";
}

PlacementMode parse_placement_mode(std::string_view text) {
  if (text == "RP" || text == "rp" || text == "random") return PlacementMode::RandomPlacement;
  if (text == "OP" || text == "op" || text == "optimal") return PlacementMode::OptimalPlacement;
  throw Error(ErrorCode::ParseError, "unknown placement '" + std::string(text) + "'");
}

PfpParams PfpParams::standard(int n, double p, double delta) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidParams, "PFP p must lie in (0, 1)");
  PfpParams params;
  params.n = n;
  params.delta = delta;
  params.mix = {{p, 1, 2}, {1.0 - p, 2, 1}};
  return params;
}

namespace {

class PreferentialSampler {
 public:
  explicit PreferentialSampler(double delta) : delta_(delta) {}

  double weight(int k) const {
    if (k <= 0) return 0.0;
    const double kd = k;
    return std::pow(kd, 1.0 + delta_ * std::log10(kd));
  }

  void push(int degree) { w_.push_back(weight(degree)); }
  void set_degree(int i, int degree) { w_[i] = weight(degree); }

  // Draws a node not rejected by `excluded`; -1 when every candidate is
  // excluded or carries zero weight.
  template <typename Pred>
  int draw(Rng& rng, Pred excluded) const {
    double total = 0.0;
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (!excluded(static_cast<int>(i))) total += w_[i];
    if (!(total > 0.0)) return -1;
    const double target = std::uniform_real_distribution<double>(0.0, total)(rng);
    double acc = 0.0;
    int last = -1;
    for (std::size_t i = 0; i < w_.size(); ++i) {
      if (excluded(static_cast<int>(i)) || w_[i] == 0.0) continue;
      acc += w_[i];
      last = static_cast<int>(i);
      if (target < acc) return last;
    }
    return last;
  }

 private:
  double delta_;
  std::vector<double> w_;
};

}  // namespace

LayerGraph generate_pfp(const PfpParams& params, Rng& rng) {
  if (params.seed_size < 2) throw Error(ErrorCode::InvalidParams, "PFP seed clique needs >= 2 nodes");
  if (params.n < params.seed_size) throw Error(ErrorCode::InvalidParams, "PFP n smaller than seed clique");
  if (!(params.delta >= 0.0)) throw Error(ErrorCode::InvalidParams, "PFP delta must be >= 0");
  if (params.mix.empty()) throw Error(ErrorCode::InvalidParams, "PFP growth mix is empty");
  double psum = 0.0;
  std::vector<double> probs;
  for (const GrowthEvent& ev : params.mix) {
    if (ev.probability < 0.0 || ev.probability > 1.0 || ev.hosts < 1 || ev.hosts > 2 ||
        ev.internal_links < 0)
      throw Error(ErrorCode::InvalidParams, "bad PFP growth event");
    psum += ev.probability;
    probs.push_back(ev.probability);
  }
  if (std::abs(psum - 1.0) > 1e-9) throw Error(ErrorCode::InvalidParams, "PFP growth probabilities must sum to 1");

  LayerGraph out;
  out.n = params.n;
  std::vector<int> degree(static_cast<std::size_t>(params.n), 0);
  PreferentialSampler sampler(params.delta);
  std::set<std::pair<int, int>> edge_set;

  auto connected = [&](int a, int b) {
    return edge_set.count({std::min(a, b), std::max(a, b)}) > 0;
  };
  auto add_edge = [&](int a, int b) {
    edge_set.insert({std::min(a, b), std::max(a, b)});
    ++degree[a];
    ++degree[b];
  };

  for (int i = 0; i < params.seed_size; ++i)
    for (int j = i + 1; j < params.seed_size; ++j) add_edge(i, j);
  for (int i = 0; i < params.seed_size; ++i) sampler.push(degree[i]);

  std::discrete_distribution<int> pick_event(probs.begin(), probs.end());
  for (int fresh = params.seed_size; fresh < params.n; ++fresh) {
    const GrowthEvent& ev = params.mix[static_cast<std::size_t>(pick_event(rng))];

    // Hosts and peers are drawn from the pre-step degree distribution; the
    // new node is not yet in the sampler.
    std::vector<int> hosts;
    for (int h = 0; h < ev.hosts; ++h) {
      const int host = sampler.draw(rng, [&](int i) {
        return std::find(hosts.begin(), hosts.end(), i) != hosts.end();
      });
      if (host >= 0) hosts.push_back(host);
    }
    const int host = hosts.front();
    std::vector<int> peers;
    for (int k = 0; k < ev.internal_links; ++k) {
      // A peer already linked to the host is dropped rather than redrawn.
      const int peer = sampler.draw(rng, [&](int i) {
        return i == host || std::find(peers.begin(), peers.end(), i) != peers.end();
      });
      if (peer >= 0 && !connected(host, peer)) peers.push_back(peer);
    }

    for (int h : hosts) add_edge(fresh, h);
    for (int p : peers) add_edge(host, p);
    sampler.push(degree[fresh]);
    for (int h : hosts) sampler.set_degree(h, degree[h]);
    for (int p : peers) sampler.set_degree(p, degree[p]);
  }

  out.edges.assign(edge_set.begin(), edge_set.end());
  return out;
}

LayerGraph generate_min_degree_geometric(const GeoParams& params, Rng& rng) {
  if (params.k_min < 1 || params.n <= params.k_min)
    throw Error(ErrorCode::InvalidParams, "geometric layer needs n > k_min >= 1");
  if (params.max_retries < 1) throw Error(ErrorCode::InvalidParams, "max_retries must be >= 1");

  const int n = params.n;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < params.max_retries; ++attempt) {
    LayerGraph out;
    out.n = n;
    out.positions.resize(static_cast<std::size_t>(n));
    for (Point& p : out.positions) {
      p.x = unit(rng);
      p.y = unit(rng);
    }

    std::vector<double> radius(static_cast<std::size_t>(n));
    std::vector<double> d2(static_cast<std::size_t>(n - 1));
    for (int i = 0; i < n; ++i) {
      std::size_t m = 0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double dx = out.positions[i].x - out.positions[j].x;
        const double dy = out.positions[i].y - out.positions[j].y;
        d2[m++] = dx * dx + dy * dy;
      }
      std::nth_element(d2.begin(), d2.begin() + (params.k_min - 1), d2.end());
      radius[i] = d2[static_cast<std::size_t>(params.k_min - 1)];  // squared
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double dx = out.positions[i].x - out.positions[j].x;
        const double dy = out.positions[i].y - out.positions[j].y;
        if (dx * dx + dy * dy <= std::max(radius[i], radius[j])) out.edges.emplace_back(i, j);
      }
    }

    // Connectivity via union-find.
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    int components = n;
    for (auto [u, v] : out.edges) {
      const int a = find(u), b = find(v);
      if (a != b) {
        parent[a] = b;
        --components;
      }
    }
    if (components == 1) return out;
  }
  throw Error(ErrorCode::ConnectivityRetriesExhausted,
              "no connected geometric layer after " + std::to_string(params.max_retries) + " draws");
}

MultilayerGraph compose_multilayer(const LayerGraph& wired, const LayerGraph& wireless, int n_i,
                                   PlacementMode mode, std::span<const Point> op_targets,
                                   Rng& rng, const CapacityPlan& capacity) {
  if (n_i < 1) throw Error(ErrorCode::InvalidParams, "at least one interfacing node is required");
  if (n_i > std::min(wired.n, wireless.n))
    throw Error(ErrorCode::TooManyInterfaces,
                std::to_string(n_i) + " > min(" + std::to_string(wired.n) + ", " +
                    std::to_string(wireless.n) + ")");
  if (static_cast<int>(wireless.positions.size()) != wireless.n)
    throw Error(ErrorCode::InvalidParams, "wireless layer lacks positions");
  if (mode == PlacementMode::OptimalPlacement && static_cast<int>(op_targets.size()) != n_i)
    throw Error(ErrorCode::InvalidParams, "optimal placement needs exactly n_i target positions");

  constexpr int kMaxPairings = 100;
  for (int attempt = 0; attempt < kMaxPairings; ++attempt) {
    std::vector<int> wired_pick(static_cast<std::size_t>(wired.n));
    std::iota(wired_pick.begin(), wired_pick.end(), 0);
    std::shuffle(wired_pick.begin(), wired_pick.end(), rng);
    wired_pick.resize(static_cast<std::size_t>(n_i));

    std::vector<int> wireless_pick;
    if (mode == PlacementMode::RandomPlacement) {
      wireless_pick.resize(static_cast<std::size_t>(wireless.n));
      std::iota(wireless_pick.begin(), wireless_pick.end(), 0);
      std::shuffle(wireless_pick.begin(), wireless_pick.end(), rng);
      wireless_pick.resize(static_cast<std::size_t>(n_i));
    } else {
      for (NodeId id : op_candidates(op_targets, wireless.positions)) wireless_pick.push_back(id);
    }

    // Wireless index -> final id.
    std::vector<NodeId> wl_id(static_cast<std::size_t>(wireless.n), -1);
    for (int k = 0; k < n_i; ++k) wl_id[wireless_pick[k]] = wired_pick[k];
    NodeId next = wired.n;
    for (int l = 0; l < wireless.n; ++l)
      if (wl_id[l] < 0) wl_id[l] = next++;

    std::vector<NodeSpec> nodes(static_cast<std::size_t>(next));
    for (NodeId v = 0; v < next; ++v) {
      nodes[v].id = v;
      nodes[v].kind = v < wired.n ? NodeKind::Wired : NodeKind::Wireless;
      nodes[v].capacity = capacity.base;
    }
    for (int l = 0; l < wireless.n; ++l) {
      NodeSpec& s = nodes[wl_id[l]];
      s.position = wireless.positions[l];
      if (wl_id[l] < wired.n) {
        s.kind = NodeKind::Interfacing;
        s.capacity = capacity.interfacing;
      }
    }

    std::vector<LinkSpec> links;
    links.reserve(wired.edges.size() + wireless.edges.size());
    std::unordered_set<std::uint64_t> seen;
    auto key = [](NodeId a, NodeId b) {
      if (a > b) std::swap(a, b);
      return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
    };
    for (auto [u, v] : wired.edges) {
      links.push_back({u, v, LinkKind::Wired});
      seen.insert(key(u, v));
    }
    bool duplicate = false;
    for (auto [u, v] : wireless.edges) {
      const NodeId a = wl_id[u], b = wl_id[v];
      if (!seen.insert(key(a, b)).second) {
        duplicate = true;
        break;
      }
      links.push_back({a, b, LinkKind::Wireless});
    }
    if (duplicate) continue;
    return MultilayerGraph::build(std::move(nodes), std::move(links));
  }
  throw Error(ErrorCode::MergeCreatedDuplicateLink,
              "every pairing merged a wired and a wireless link onto the same node pair");
}

}  // namespace mlnet
