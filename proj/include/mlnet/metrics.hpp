#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mlnet/generators.hpp"
#include "mlnet/graph.hpp"
#include "mlnet/paths.hpp"

namespace mlnet {

/// (2 N_W N_L) / (N_I C_I). Throws InvalidArgs unless every argument is > 0.
double interfacing_lower_bound(double n_wired, double n_wireless, double n_interfacing,
                               double c_interfacing);

/// Tighter pair-counting form: only wired-node x wireless-node pairs must
/// cross an interfacing node as an interior hop, giving
/// 2 (N_W - N_I)(N_L - N_I) / (N_I C_I). Never exceeds the form above.
double interfacing_pair_bound(double n_wired, double n_wireless, double n_interfacing,
                              double c_interfacing);

struct GraphBound {
  double value = 0.0;       // interfacing_lower_bound with C_I = min interfacing capacity
  double pair_value = 0.0;  // interfacing_pair_bound, same C_I
  double c_interfacing = 0.0;
  bool heterogeneous_capacity = false;
};

GraphBound lower_bound_for(const MultilayerGraph& g);

/// Mean expected hop count over unordered pairs of Wireless-kind nodes
/// (interfacing nodes excluded). Throws NoWirelessPairs.
double d_ll(const MultilayerGraph& g, const WeightState& w);

/// Same average taken over ordered pairs; equal to d_ll on undirected graphs.
double d_ll_ordered(const MultilayerGraph& g, const WeightState& w);

struct RunRecord {
  std::string preset;
  int n_wired = 0;
  int n_wireless = 0;
  int n_interfacing = 0;
  ChannelMode mode = ChannelMode::MultiChannel;
  PlacementMode placement = PlacementMode::RandomPlacement;
  double c_interfacing = 1.0;
  std::uint64_t seed = 0;
  double bcmax_sp = 0.0;
  double bcmax_opt = 0.0;
  double rho = 0.0;
  double dll_sp = 0.0;
  double dll_opt = 0.0;
  double bound = 0.0;
  int iterations = 0;
};

struct Summary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation
  double median = 0.0;
};

Summary summarize(std::span<const double> values);

struct EnsembleStats {
  std::size_t count = 0;
  Summary bcmax_sp, bcmax_opt, rho, dll_sp, dll_opt, bound;
  double std_ratio = 0.0;  // std(bcmax_opt) / std(bcmax_sp)
};

/// Throws InsufficientRecords for fewer than two records and InvalidArgs if
/// the records do not share their descriptors.
EnsembleStats ensemble_stats(std::span<const RunRecord> records);

extern const char* const kRecordCsvHeader;
extern const char* const kSummaryCsvHeader;

void write_record_csv_row(std::ostream& os, const RunRecord& r);
void write_summary_csv_row(std::ostream& os, const RunRecord& descriptor, const EnsembleStats& s);
RunRecord parse_record_csv_row(const std::string& line);

nlohmann::json to_json(const RunRecord& r);
nlohmann::json to_json(const EnsembleStats& s);

}  // namespace mlnet
