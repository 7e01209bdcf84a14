#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mlnet/generators.hpp"
#include "mlnet/metrics.hpp"
#include "mlnet/optimizer.hpp"

namespace mlnet {

struct PointSpec {
  int n_wired = 0;
  int n_wireless = 0;
  int n_interfacing = 1;
};

/// Placement and interfacing capacity. Variants of one point share the same
/// layer pair in every realization.
struct Variant {
  PlacementMode placement = PlacementMode::RandomPlacement;
  double c_interfacing = 1.0;
};

struct ExperimentConfig {
  std::string preset = "custom";
  std::vector<std::pair<int, int>> layer_sizes;  // (N_W, N_L)
  std::vector<int> ni_sweep;
  std::vector<Variant> variants{Variant{}};
  int k_min = 8;
  double capacity = 1.0;  // every non-interfacing node
  ChannelMode mode = ChannelMode::MultiChannel;
  int realizations = 20;
  std::uint64_t master_seed = 1;
  std::string out_dir = ".";
  double scale = 1.0;
  bool full = false;
  int max_nodes = 1500;  // desk cap on N per point unless `full`
  double pfp_p = 0.3;
  double pfp_delta = 0.048;
  double patience_factor = 2.0;  // patience = factor * N
  double max_iter_factor = 40.0;
  bool include_interfacing_wired_links = true;

  /// Parameter points in sweep order: sizes outer, N_I inner.
  std::vector<PointSpec> points() const;
  void validate() const;  // throws ConfigError
};

/// fig2a | fig2b | fig3a | fig3b | custom, with layer sizes multiplied by
/// `scale`. Throws ConfigError for unknown names.
ExperimentConfig make_preset(const std::string& name, double scale = 1.0, bool full = false);

/// Flat key-value text with [sections]; keys override `base`.
ExperimentConfig load_config(const std::string& path, ExperimentConfig base);
ExperimentConfig parse_config(std::istream& is, ExperimentConfig base);
void write_config(std::ostream& os, const ExperimentConfig& cfg);

MultilayerGraph realize_graph(const ExperimentConfig& cfg, const PointSpec& point,
                              const Variant& variant, std::uint64_t seed);

OptSchedule schedule_for(const ExperimentConfig& cfg, const MultilayerGraph& g);

struct RealizationOutcome {
  RunRecord record;
  OptimizationResult optimization;
};

RealizationOutcome run_realization(const ExperimentConfig& cfg, const PointSpec& point,
                                   const Variant& variant, std::uint64_t seed);

struct ExperimentOutput {
  std::vector<RunRecord> records;  // (point, variant, realization) order
  std::string records_path;
  std::string summary_path;
  std::string json_path;
  std::string config_path;
  int resumed = 0;  // records taken from an earlier partial run
};

/// Runs every (point, variant, realization), appending each record to
/// `<out>/<preset>_records.csv` as it completes, then writes the summary,
/// JSON mirror and resolved config. Records already present in the records
/// file are reused. Throws ConfigError or IoError.
ExperimentOutput run_experiment(const ExperimentConfig& cfg);

}  // namespace mlnet
