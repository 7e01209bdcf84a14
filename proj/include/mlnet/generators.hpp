#pragma once

#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "mlnet/graph.hpp"
#include "mlnet/rng.hpp"

namespace mlnet {

/// A single-layer undirected graph as produced by a generator. `positions`
/// is empty for the wired layer and has one entry per node otherwise.
struct LayerGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // u < v
  std::vector<Point> positions;

  std::vector<int> degrees() const;
  double mean_degree() const { return n > 0 ? 2.0 * static_cast<double>(edges.size()) / n : 0.0; }
};

/// One branch of the PFP growth mix: with `probability`, a new node attaches
/// to `hosts` existing nodes and the first host gains `internal_links` links to
/// preferentially chosen peers.
struct GrowthEvent {
  double probability = 0.0;
  int hosts = 1;
  int internal_links = 0;
};

/// Positive-feedback preference growth. Attachment probability to node i is
/// proportional to k_i^(1 + delta * log10 k_i).
struct PfpParams {
  int n = 0;
  double delta = 0.048;
  int seed_size = 3;
  std::vector<GrowthEvent> mix;

  /// p -> (1 host, 2 internal links), 1 - p -> (2 hosts, 1 internal link).
  /// An internal link that would duplicate an existing one is dropped, so
  /// p sets the mean degree (about 5.4 at p = 0.3 for n = 2000).
  static PfpParams standard(int n, double p = 0.3, double delta = 0.048);
};

struct GeoParams {
  int n = 0;
  int k_min = 8;
  int max_retries = 100;
};

enum class PlacementMode { RandomPlacement, OptimalPlacement };

std::string_view to_string(PlacementMode mode);
PlacementMode parse_placement_mode(std::string_view text);

struct CapacityPlan {
  double base = 1.0;
  double interfacing = 1.0;
};

/// Throws InvalidParams.
LayerGraph generate_pfp(const PfpParams& params, Rng& rng);

/// Nodes uniform in the unit square; r_i is the distance to the k_min-th
/// nearest node and i~j iff d_ij <= max(r_i, r_j). Disconnected draws are
/// discarded and regenerated. Throws InvalidParams or
/// ConnectivityRetriesExhausted.
LayerGraph generate_min_degree_geometric(const GeoParams& params, Rng& rng);

/// Merges n_i (wired, wireless) node pairs into interfacing nodes. Node ids of
/// the result: wired-layer nodes keep their wired index (merged nodes
/// included), unmerged wireless nodes follow from wired.n upward in wireless
/// index order. With OptimalPlacement, `op_targets` supplies n_i positions and
/// each claims its nearest unclaimed wireless node.
MultilayerGraph compose_multilayer(const LayerGraph& wired, const LayerGraph& wireless, int n_i,
                                   PlacementMode mode, std::span<const Point> op_targets,
                                   Rng& rng, const CapacityPlan& capacity = {});

}  // namespace mlnet
