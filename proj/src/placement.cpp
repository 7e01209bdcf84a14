#include "mlnet/placement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "mlnet/error.hpp"
#include "mlnet/graph_io.hpp"

namespace mlnet {

namespace {

bool inside(const Point& p) { return p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0; }

double boundary_distance(const Point& p) {
  return std::min({p.x, 1.0 - p.x, p.y, 1.0 - p.y});
}

// Same quantity as min_candidate_radius without the bounds check.
double r_min_unchecked(std::span<const Point> pts) {
  double r = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    r = std::min(r, boundary_distance(pts[i]));
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      r = std::min(r, 0.5 * std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y));
  }
  return r;
}

PlacementResult climb(int n, Rng& rng, const PlacementSchedule& s) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, n - 1);
  PlacementResult res;
  res.points.resize(static_cast<std::size_t>(n));
  for (Point& p : res.points) p = {unit(rng), unit(rng)};
  res.r_min = r_min_unchecked(res.points);
  res.r_min_history.push_back(res.r_min);

  double sigma = s.initial_sigma;
  double anchor = res.r_min;  // r_min at the last significant improvement
  int non_improving = 0;
  int stall = 0;
  while (stall < s.stall_budget && res.proposals < s.max_proposals) {
    ++res.proposals;
    const int i = pick(rng);
    const Point old = res.points[i];
    const double radius = sigma * std::sqrt(unit(rng));
    const double theta = 2.0 * M_PI * unit(rng);
    res.points[i] = {std::clamp(old.x + radius * std::cos(theta), 0.0, 1.0),
                     std::clamp(old.y + radius * std::sin(theta), 0.0, 1.0)};
    const double r = r_min_unchecked(res.points);

    // Equal r_min keeps the move: plateau drift is part of the search.
    if (r > res.r_min) {
      res.r_min = r;
      res.r_min_history.push_back(r);
      non_improving = 0;
    } else {
      if (r < res.r_min) res.points[i] = old;
      if (++non_improving % s.halve_after == 0) sigma = std::max(0.5 * sigma, s.sigma_floor);
    }
    if (res.r_min > anchor + s.improvement_eps) {
      anchor = res.r_min;
      stall = 0;
    } else {
      ++stall;
    }
  }
  return res;
}

}  // namespace

double candidate_radius(std::span<const Point> points, std::size_t i) {
  if (i >= points.size()) throw Error(ErrorCode::InvalidArgs, "point index out of range");
  for (const Point& p : points)
    if (!inside(p)) throw Error(ErrorCode::OutOfBounds, "point outside unit square");
  double r = boundary_distance(points[i]);
  for (std::size_t j = 0; j < points.size(); ++j)
    if (j != i) r = std::min(r, 0.5 * std::hypot(points[i].x - points[j].x, points[i].y - points[j].y));
  return r;
}

double min_candidate_radius(std::span<const Point> points) {
  for (const Point& p : points)
    if (!inside(p)) throw Error(ErrorCode::OutOfBounds, "point outside unit square");
  return r_min_unchecked(points);
}

PlacementResult optimize_placement(int n, Rng& rng, const PlacementSchedule& schedule) {
  if (n < 1) throw Error(ErrorCode::InvalidN, "need at least one point");
  if (schedule.restarts < 1 || schedule.halve_after < 1 || schedule.stall_budget < 1 ||
      !(schedule.initial_sigma > 0.0))
    throw Error(ErrorCode::InvalidParams, "bad placement schedule");

  const int starts = schedule.restarts;
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(starts));
  for (auto& s : seeds) s = rng();
  std::vector<PlacementResult> results(static_cast<std::size_t>(starts));
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < starts; ++k) {
    Rng local(seeds[k]);
    results[k] = climb(n, local, schedule);
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < results.size(); ++k)
    if (results[k].r_min > results[best].r_min) best = k;
  return std::move(results[best]);
}

std::vector<NodeId> op_candidates(std::span<const Point> targets, std::span<const Point> nodes) {
  if (targets.size() > nodes.size())
    throw Error(ErrorCode::NotEnoughNodes, std::to_string(targets.size()) + " targets for " +
                                               std::to_string(nodes.size()) + " nodes");
  std::vector<char> claimed(nodes.size(), 0);
  std::vector<NodeId> out;
  out.reserve(targets.size());
  for (const Point& t : targets) {
    std::size_t best = nodes.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (claimed[j]) continue;
      const double dx = nodes[j].x - t.x, dy = nodes[j].y - t.y;
      const double d = dx * dx + dy * dy;
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    claimed[best] = 1;
    out.push_back(static_cast<NodeId>(best));
  }
  return out;
}

void write_placement_csv(std::ostream& os, const PlacementResult& result) {
  os << "i,x,y\n";
  for (std::size_t i = 0; i < result.points.size(); ++i)
    os << i << ',' << format_double(result.points[i].x) << ',' << format_double(result.points[i].y)
       << '\n';
  os << "r_min," << format_double(result.r_min) << '\n';
}

}  // namespace mlnet
