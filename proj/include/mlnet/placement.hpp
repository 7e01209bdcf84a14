#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "mlnet/graph.hpp"
#include "mlnet/rng.hpp"

namespace mlnet {

/// min{distance to each side of the unit square, half the distance to every
/// other point}. Throws OutOfBounds if any point lies outside the square.
double candidate_radius(std::span<const Point> points, std::size_t i);

/// Smallest candidate radius over all points.
double min_candidate_radius(std::span<const Point> points);

struct PlacementSchedule {
  double initial_sigma = 0.1;
  int halve_after = 500;  // consecutive non-improving proposals per halving
  double sigma_floor = 1e-4;
  int stall_budget = 5000;
  double improvement_eps = 1e-6;
  std::int64_t max_proposals = 5'000'000;
  int restarts = 1;  // independent starts; best r_min wins
};

struct PlacementResult {
  std::vector<Point> points;
  double r_min = 0.0;
  std::int64_t proposals = 0;
  std::vector<double> r_min_history;  // r_min after every accepted improvement
};

/// Random-disturbance hill climbing that maximizes the minimum candidate
/// radius. A move is kept when r_min does not decrease. Throws InvalidN.
PlacementResult optimize_placement(int n, Rng& rng, const PlacementSchedule& schedule = {});

/// Greedy assignment: targets in order, each claims the nearest unclaimed
/// node (lowest index on exact ties). Returns indices into `nodes`.
/// Throws NotEnoughNodes.
std::vector<NodeId> op_candidates(std::span<const Point> targets, std::span<const Point> nodes);

/// `i,x,y` rows followed by an `r_min,<value>` footer.
void write_placement_csv(std::ostream& os, const PlacementResult& result);

}  // namespace mlnet
