// Acceptance suite. Each test checks one acceptance criterion at its stated
// tolerance and prints a single "[criterion N] PASS|FAIL" line. Runs shared
// between criteria are computed once and cached.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <string>

#include <gtest/gtest.h>

#include "mlnet/experiment.hpp"
#include "mlnet/metrics.hpp"
#include "mlnet/packet_sim.hpp"
#include "mlnet/placement.hpp"
#include "oracles.hpp"

using namespace mlnet;
using namespace mlnet::testing;

namespace {

constexpr std::uint64_t kMasterSeed = 2024;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[criterion %d] %s: %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

struct Outcome {
  RunRecord record;
  double trace0 = 0.0;
  bool best_is_running_min = true;
};

// Every optimization run made by this binary, for the monotonicity check.
int g_runs = 0;
int g_monotonicity_violations = 0;

Outcome run_one(const ExperimentConfig& cfg, const PointSpec& p, const Variant& v, std::uint64_t seed) {
  const RealizationOutcome o = run_realization(cfg, p, v, seed);
  Outcome out;
  out.record = o.record;
  out.trace0 = o.optimization.trace.front().max_eff;
  double running = out.trace0;
  for (const TraceEntry& t : o.optimization.trace) running = std::min(running, t.max_eff);
  out.best_is_running_min = o.optimization.best_value <= out.trace0 &&
                            std::abs(o.optimization.best_value - running) <= 1e-9 * running;
  ++g_runs;
  if (!out.best_is_running_min) ++g_monotonicity_violations;
  return out;
}

// Desk-scale multi-channel sweep: N_W = 50, N_L = 250, C = 1.
class DeskSweep {
 public:
  static DeskSweep& instance() {
    static DeskSweep s;
    return s;
  }

  const ExperimentConfig& config() const { return cfg_; }

  // Realizations [0, count) for sweep index `point` and variant `variant`.
  const std::vector<Outcome>& runs(std::size_t point, std::size_t variant, int count) {
    auto& v = cache_[{point, variant}];
    while (static_cast<int>(v.size()) < count) {
      const auto r = static_cast<std::uint64_t>(v.size());
      v.push_back(run_one(cfg_, points_[point], cfg_.variants[variant], derive_seed(kMasterSeed, point, r)));
    }
    return v;
  }

  const PointSpec& point(std::size_t i) const { return points_[i]; }
  std::size_t num_points() const { return points_.size(); }

 private:
  DeskSweep() : cfg_(make_preset("fig3b", 0.25)) {
    cfg_.ni_sweep = {1, 2, 4, 8};
    points_ = cfg_.points();
  }
  ExperimentConfig cfg_;  // variants: RP C=1, RP C=4, OP C=4
  std::vector<PointSpec> points_;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Outcome>> cache_;
};

constexpr std::size_t kRpC1 = 0, kRpC4 = 1, kOpC4 = 2;

double mean_field(const std::vector<Outcome>& runs, int count, double RunRecord::*field) {
  double s = 0.0;
  for (int i = 0; i < count; ++i) s += runs[static_cast<std::size_t>(i)].record.*field;
  return s / count;
}

}  // namespace

TEST(Acceptance, C01_BetweennessMatchesEnumeration) {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(kMasterSeed);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 10)(rng);
    const MultilayerGraph g = random_connected_graph(n, 0.3, rng, trial % 2 == 0);
    const WeightState w = random_weights(g.num_links(), rng, 4);
    const auto b = betweenness(g, w);
    const auto oracle = enumerate_betweenness(g, w);
    for (NodeId v = 0; v < g.size(); ++v) worst = std::max(worst, std::abs(b[v] - oracle[v]));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool pass = worst <= 1e-9 && secs < 60.0;
  report(1, pass, fmt("200 graphs, max |B - oracle| = %.2e, %.1f s", worst, secs));
  EXPECT_TRUE(pass);
}

TEST(Acceptance, C02_LowerBoundAnchor) {
  const double v = interfacing_lower_bound(200, 1000, 1, 1);
  const bool pass = v == 4e5;
  report(2, pass, fmt("interfacing_lower_bound(200, 1000, 1, 1) = %.17g", v));
  EXPECT_TRUE(pass);
}

TEST(Acceptance, C03_BoundHugging) {
  DeskSweep& s = DeskSweep::instance();
  bool pass = true;
  std::string detail;
  for (std::size_t p = 0; p < s.num_points(); ++p) {
    const auto& runs = s.runs(p, kRpC1, 10);
    const double mean_opt = mean_field(runs, 10, &RunRecord::bcmax_opt);
    const int ni = s.point(p).n_interfacing;
    const double bound = interfacing_lower_bound(50, 250, ni, 1);
    const double tol = ni <= 2 ? 0.05 : 0.25;
    const double rel = mean_opt / bound - 1.0;
    const bool ok = std::abs(rel) <= tol;
    pass &= ok;
    detail += fmt("N_I=%d mean=%.0f bound=%.0f (%+.1f%%, tol %.0f%%%s) ", ni, mean_opt, bound, 100 * rel,
                  100 * tol, ok ? "" : " MISS");
  }
  report(3, pass, detail + "over 10 realizations");
  EXPECT_TRUE(pass);
}

TEST(Acceptance, C04_HalvingAtTwoInterfaces) {
  DeskSweep& s = DeskSweep::instance();
  const double one = mean_field(s.runs(0, kRpC1, 10), 10, &RunRecord::bcmax_opt);
  const double two = mean_field(s.runs(1, kRpC1, 10), 10, &RunRecord::bcmax_opt);
  const double ratio = two / one;
  const bool pass = std::abs(ratio / 0.5 - 1.0) <= 0.15;
  report(4, pass, fmt("mean optimized N_I=2 / N_I=1 = %.0f / %.0f = %.3f (target 0.5 +/- 15%%)", two, one, ratio));
  EXPECT_TRUE(pass);
}

TEST(Acceptance, C05_EnsembleSqueezing) {
  DeskSweep& s = DeskSweep::instance();
  const auto& runs = s.runs(0, kRpC1, 20);
  std::vector<RunRecord> recs;
  for (int i = 0; i < 20; ++i) recs.push_back(runs[static_cast<std::size_t>(i)].record);
  const EnsembleStats st = ensemble_stats(recs);
  const bool pass = st.std_ratio < 0.05;
  report(5, pass, fmt("N_I=1, 20 realizations: std opt %.2f / std SP %.2f = %.4f (< 0.05)", st.bcmax_opt.std,
                      st.bcmax_sp.std, st.std_ratio));
  EXPECT_TRUE(pass);
}

TEST(Acceptance, C06_OptimizerMonotonicityAndImprovement) {
  // Single-channel fig2a-style point with N >= 400: N_W = N_L = 205, N_I = 10.
  ExperimentConfig cfg = make_preset("fig2a");
  const PointSpec p{205, 205, 10};
  const int realizations = 10;
  int below = 0;
  std::string rhos;
  for (int r = 0; r < realizations; ++r) {
    const Outcome o = run_one(cfg, p, Variant{}, derive_seed(kMasterSeed + 6, 0, static_cast<std::uint64_t>(r)));
    below += o.record.rho < 0.9;
    rhos += fmt("%.3f ", o.record.rho);
  }
  // Include the multi-channel desk sweep so "every run" spans both modes.
  DeskSweep::instance().runs(0, kRpC1, 10);
  const bool monotone = g_monotonicity_violations == 0;
  const bool improved = below >= (realizations * 8 + 9) / 10;
  report(6, monotone && improved,
         fmt("%d/%d runs monotone with best <= SP; N=400 rho < 0.9 in %d/%d (need 80%%): %s", g_runs - g_monotonicity_violations,
             g_runs, below, realizations, rhos.c_str()));
  EXPECT_TRUE(monotone && improved);
}

TEST(Acceptance, C07_BottleneckTrend) {
  DeskSweep& s = DeskSweep::instance();
  std::vector<double> multi;
  for (std::size_t p = 0; p < s.num_points(); ++p) multi.push_back(mean_field(s.runs(p, kRpC1, 10), 10, &RunRecord::bcmax_opt));

  // Single channel: fig2b-style sweep at N_W = N_L = 100.
  ExperimentConfig cfg = make_preset("fig2b", 0.5);
  cfg.layer_sizes = {{100, 100}};
  const std::vector<PointSpec> pts = cfg.points();
  const int realizations = 6;
  std::vector<double> single;
  for (std::size_t p = 0; p < pts.size(); ++p) {
    std::vector<double> v;
    for (int r = 0; r < realizations; ++r)
      v.push_back(run_one(cfg, pts[p], Variant{}, derive_seed(kMasterSeed + 7, p, static_cast<std::uint64_t>(r)))
                      .record.bcmax_opt);
    single.push_back(mean_of(v));
  }

  auto check = [](const std::vector<double>& m) {
    bool ok = m.front() >= 4.0 * m.back();
    for (std::size_t i = 1; i < m.size(); ++i) ok &= m[i] <= m[i - 1];
    return ok;
  };
  auto show = [](const std::vector<double>& m) {
    std::string s;
    for (double x : m) s += fmt("%.0f ", x);
    return s;
  };
  const bool pass = check(multi) && check(single);
  report(7, pass, "multi N_I{1,2,4,8}: " + show(multi) + "| single N_I{1,2,4,8,16}: " + show(single) +
                      fmt("| first/last %.1f and %.1f (need >= 4)", multi.front() / multi.back(),
                          single.front() / single.back()));
  EXPECT_TRUE(pass);
}

TEST(Acceptance, C08_DllOrdering) {
  DeskSweep& s = DeskSweep::instance();
  const int realizations = 5;
  std::vector<double> sp, op4, rp4, rp1;
  bool c4_below = true;
  std::string per_point;
  for (std::size_t p = 0; p < s.num_points(); ++p) {
    const auto& a = s.runs(p, kRpC1, realizations);
    const auto& b = s.runs(p, kRpC4, realizations);
    const auto& c = s.runs(p, kOpC4, realizations);
    for (int r = 0; r < realizations; ++r) {
      const auto i = static_cast<std::size_t>(r);
      sp.push_back(a[i].record.dll_sp);
      rp1.push_back(a[i].record.dll_opt);
      rp4.push_back(b[i].record.dll_opt);
      op4.push_back(c[i].record.dll_opt);
    }
    const double m1 = mean_field(a, realizations, &RunRecord::bcmax_opt);
    const double m4 = mean_field(b, realizations, &RunRecord::bcmax_opt);
    c4_below &= m4 < m1;
    per_point += fmt("N_I=%d C4 %.0f < C1 %.0f; ", s.point(p).n_interfacing, m4, m1);
  }
  const double msp = mean_of(sp), mop4 = mean_of(op4), mrp4 = mean_of(rp4), mrp1 = mean_of(rp1);
  const bool order = msp <= mop4 && mop4 <= mrp4 && mrp4 <= mrp1;
  report(8, order && c4_below,
         fmt("mean d_LL SP %.4f <= OP/C4 %.4f <= RP/C4 %.4f <= RP/C1 %.4f: %s; ", msp, mop4, mrp4, mrp1,
             order ? "yes" : "no") +
             per_point);
  EXPECT_TRUE(order && c4_below);
}

TEST(Acceptance, C09_PlacementOptima) {
  const std::vector<std::pair<int, double>> cases = {{1, 0.5}, {2, (2.0 - std::sqrt(2.0)) / 2.0}, {4, 0.25}};
  bool pass = true;
  std::string detail;
  for (auto [n, optimum] : cases) {
    int hits = 0;
    double slowest = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      Rng rng(derive_seed(kMasterSeed + 9, static_cast<std::uint64_t>(n), seed));
      const auto t0 = std::chrono::steady_clock::now();
      const PlacementResult r = optimize_placement(n, rng);
      slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      hits += r.r_min >= 0.95 * optimum;
    }
    const bool ok = hits >= 45 && slowest < 5.0;
    pass &= ok;
    detail += fmt("n=%d %d/50 >= 95%% of %.4f, slowest %.2f s; ", n, hits, optimum, slowest);
  }
  report(9, pass, detail);
  EXPECT_TRUE(pass);
}

TEST(Acceptance, C10_SimulatorConsistency) {
  bool pass = true;
  std::string detail;
  struct Setup {
    ChannelMode mode;
    const char* preset;
    PointSpec point;
  };
  const Setup setups[] = {{ChannelMode::SingleChannel, "fig2a", {100, 100, 10}},
                          {ChannelMode::MultiChannel, "fig3a", {50, 250, 4}}};
  for (const Setup& s : setups) {
    ExperimentConfig cfg = make_preset(s.preset);
    int within = 0, higher = 0;
    std::string ratios;
    for (int r = 0; r < 5; ++r) {
      const std::uint64_t seed = derive_seed(kMasterSeed + 10, static_cast<std::uint64_t>(s.mode), static_cast<std::uint64_t>(r));
      const MultilayerGraph g = realize_graph(cfg, s.point, Variant{}, seed);
      const OptimizationResult opt = optimize(g, schedule_for(cfg, g));
      ThresholdOptions th;
      th.seed = seed;
      const ThresholdResult sp_th = congestion_threshold(g, build_routing_tables(g, WeightState(g.num_links())), s.mode, th);
      const ThresholdResult op_th = congestion_threshold(g, build_routing_tables(g, opt.best_weights), s.mode, th);
      const double q_sp = sp_th.measured / sp_th.predicted, q_op = op_th.measured / op_th.predicted;
      within += std::abs(q_sp - 1.0) <= 0.25 && std::abs(q_op - 1.0) <= 0.25;
      higher += op_th.measured > sp_th.measured;
      ratios += fmt("%.2f/%.2f ", q_sp, q_op);
    }
    const bool ok = within == 5 && higher == 5;
    pass &= ok;
    detail += fmt("%s: measured/predicted SP/opt = %s(%d/5 within 25%%), opt R_c > SP R_c on %d/5; ",
                  std::string(to_string(s.mode)).c_str(), ratios.c_str(), within, higher);
  }
  report(10, pass, detail);
  EXPECT_TRUE(pass);
}

TEST(Acceptance, C11_GeneratorAnchors) {
  double degree_sum = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(derive_seed(kMasterSeed + 11, 0, seed));
    degree_sum += generate_pfp(PfpParams::standard(2000), rng).mean_degree();
  }
  const double mean_degree = degree_sum / 20.0;
  int min_degree = 1 << 30;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(derive_seed(kMasterSeed + 11, 1, seed));
    const auto deg = generate_min_degree_geometric({1000, 8}, rng).degrees();
    min_degree = std::min(min_degree, *std::min_element(deg.begin(), deg.end()));
  }
  const bool pass = mean_degree >= 5.1 && mean_degree <= 5.7 && min_degree >= 8;
  report(11, pass, fmt("PFP n=2000 mean degree over 20 seeds %.3f (in [5.1, 5.7]); geometric n=1000 min degree over 20 seeds %d (>= 8)",
                       mean_degree, min_degree));
  EXPECT_TRUE(pass);
}
