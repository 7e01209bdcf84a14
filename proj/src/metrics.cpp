#include "mlnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mlnet/error.hpp"
#include "mlnet/graph_io.hpp"

namespace mlnet {

double interfacing_lower_bound(double n_wired, double n_wireless, double n_interfacing,
                               double c_interfacing) {
  if (!(n_wired > 0 && n_wireless > 0 && n_interfacing > 0 && c_interfacing > 0))
    throw Error(ErrorCode::InvalidArgs, "lower bound arguments must be positive");
  return 2.0 * n_wired * n_wireless / (n_interfacing * c_interfacing);
}

double interfacing_pair_bound(double n_wired, double n_wireless, double n_interfacing,
                              double c_interfacing) {
  if (!(n_wired > 0 && n_wireless > 0 && n_interfacing > 0 && c_interfacing > 0))
    throw Error(ErrorCode::InvalidArgs, "lower bound arguments must be positive");
  return 2.0 * std::max(0.0, n_wired - n_interfacing) * std::max(0.0, n_wireless - n_interfacing) /
         (n_interfacing * c_interfacing);
}

GraphBound lower_bound_for(const MultilayerGraph& g) {
  GraphBound b;
  double cmin = std::numeric_limits<double>::infinity(), cmax = 0.0;
  for (NodeId v : g.nodes_of_kind(NodeKind::Interfacing)) {
    cmin = std::min(cmin, g.capacity(v));
    cmax = std::max(cmax, g.capacity(v));
  }
  if (g.interfacing_count() == 0) throw Error(ErrorCode::InvalidArgs, "graph has no interfacing nodes");
  b.c_interfacing = cmin;
  b.heterogeneous_capacity = cmax != cmin;
  b.value = interfacing_lower_bound(g.wired_layer_size(), g.wireless_layer_size(), g.interfacing_count(), cmin);
  b.pair_value = interfacing_pair_bound(g.wired_layer_size(), g.wireless_layer_size(), g.interfacing_count(), cmin);
  return b;
}

namespace {

double d_ll_impl(const MultilayerGraph& g, const WeightState& w, bool ordered) {
  const std::vector<NodeId> wl = g.nodes_of_kind(NodeKind::Wireless);
  if (wl.size() < 2) throw Error(ErrorCode::NoWirelessPairs, std::to_string(wl.size()) + " wireless nodes");
  const auto m = static_cast<std::int64_t>(wl.size());
  std::vector<double> per_source(wl.size(), 0.0);

#pragma omp parallel
  {
    DagBuilder builder(g);
#pragma omp for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < m; ++i) {
      builder.run(w, wl[i]);
      const std::vector<double> hops = builder.expected_hops(w);
      double s = 0.0;
      for (std::int64_t j = ordered ? 0 : i + 1; j < m; ++j)
        if (j != i) s += hops[wl[j]];
      per_source[i] = s;
    }
  }
  double total = 0.0;
  for (double s : per_source) total += s;
  const double pairs = ordered ? static_cast<double>(m) * (m - 1) : 0.5 * static_cast<double>(m) * (m - 1);
  return total / pairs;
}

}  // namespace

double d_ll(const MultilayerGraph& g, const WeightState& w) { return d_ll_impl(g, w, false); }
double d_ll_ordered(const MultilayerGraph& g, const WeightState& w) { return d_ll_impl(g, w, true); }

Summary summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t k = sorted.size() / 2;
  s.median = sorted.size() % 2 ? sorted[k] : 0.5 * (sorted[k - 1] + sorted[k]);
  return s;
}

EnsembleStats ensemble_stats(std::span<const RunRecord> records) {
  if (records.size() < 2)
    throw Error(ErrorCode::InsufficientRecords, std::to_string(records.size()) + " records");
  const RunRecord& a = records.front();
  for (const RunRecord& r : records) {
    if (r.n_wired != a.n_wired || r.n_wireless != a.n_wireless || r.n_interfacing != a.n_interfacing ||
        r.mode != a.mode || r.placement != a.placement || r.c_interfacing != a.c_interfacing)
      throw Error(ErrorCode::InvalidArgs, "records do not share descriptors");
  }
  auto column = [&](double RunRecord::*field) {
    std::vector<double> v;
    v.reserve(records.size());
    for (const RunRecord& r : records) v.push_back(r.*field);
    return summarize(v);
  };
  EnsembleStats s;
  s.count = records.size();
  s.bcmax_sp = column(&RunRecord::bcmax_sp);
  s.bcmax_opt = column(&RunRecord::bcmax_opt);
  s.rho = column(&RunRecord::rho);
  s.dll_sp = column(&RunRecord::dll_sp);
  s.dll_opt = column(&RunRecord::dll_opt);
  s.bound = column(&RunRecord::bound);
  if (s.bcmax_sp.std > 0.0)
    s.std_ratio = s.bcmax_opt.std / s.bcmax_sp.std;
  else
    s.std_ratio = s.bcmax_opt.std > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return s;
}

const char* const kRecordCsvHeader =
    "preset,NW,NL,NI,mode,placement,CI,seed,bcmax_sp,bcmax_opt,rho,dll_sp,dll_opt,bound";
const char* const kSummaryCsvHeader =
    "preset,NW,NL,NI,mode,placement,CI,count,"
    "mean_bcmax_sp,std_bcmax_sp,median_bcmax_sp,mean_bcmax_opt,std_bcmax_opt,median_bcmax_opt,"
    "mean_rho,std_rho,median_rho,mean_dll_sp,std_dll_sp,median_dll_sp,"
    "mean_dll_opt,std_dll_opt,median_dll_opt,mean_bound,std_ratio";

void write_record_csv_row(std::ostream& os, const RunRecord& r) {
  os << r.preset << ',' << r.n_wired << ',' << r.n_wireless << ',' << r.n_interfacing << ','
     << to_string(r.mode) << ',' << to_string(r.placement) << ',' << format_double(r.c_interfacing)
     << ',' << r.seed << ',' << format_double(r.bcmax_sp) << ',' << format_double(r.bcmax_opt) << ','
     << format_double(r.rho) << ',' << format_double(r.dll_sp) << ',' << format_double(r.dll_opt)
     << ',' << format_double(r.bound) << '\n';
}

void write_summary_csv_row(std::ostream& os, const RunRecord& d, const EnsembleStats& s) {
  auto put = [&](const Summary& m) {
    os << ',' << format_double(m.mean) << ',' << format_double(m.std) << ',' << format_double(m.median);
  };
  os << d.preset << ',' << d.n_wired << ',' << d.n_wireless << ',' << d.n_interfacing << ','
     << to_string(d.mode) << ',' << to_string(d.placement) << ',' << format_double(d.c_interfacing)
     << ',' << s.count;
  put(s.bcmax_sp);
  put(s.bcmax_opt);
  put(s.rho);
  put(s.dll_sp);
  put(s.dll_opt);
  os << ',' << format_double(s.bound.mean) << ',' << format_double(s.std_ratio) << '\n';
}

RunRecord parse_record_csv_row(const std::string& line) {
  std::vector<std::string> f;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
  if (f.size() != 14) throw Error(ErrorCode::ParseError, "record row needs 14 fields: " + line);
  try {
    RunRecord r;
    r.preset = f[0];
    r.n_wired = std::stoi(f[1]);
    r.n_wireless = std::stoi(f[2]);
    r.n_interfacing = std::stoi(f[3]);
    r.mode = parse_channel_mode(f[4]);
    r.placement = parse_placement_mode(f[5]);
    r.c_interfacing = std::stod(f[6]);
    r.seed = std::stoull(f[7]);
    r.bcmax_sp = std::stod(f[8]);
    r.bcmax_opt = std::stod(f[9]);
    r.rho = std::stod(f[10]);
    r.dll_sp = std::stod(f[11]);
    r.dll_opt = std::stod(f[12]);
    r.bound = std::stod(f[13]);
    return r;
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::ParseError, "bad record row: " + line);
  }
}

nlohmann::json to_json(const RunRecord& r) {
  return {{"preset", r.preset},
          {"NW", r.n_wired},
          {"NL", r.n_wireless},
          {"NI", r.n_interfacing},
          {"mode", std::string(to_string(r.mode))},
          {"placement", std::string(to_string(r.placement))},
          {"CI", r.c_interfacing},
          {"seed", r.seed},
          {"bcmax_sp", r.bcmax_sp},
          {"bcmax_opt", r.bcmax_opt},
          {"rho", r.rho},
          {"dll_sp", r.dll_sp},
          {"dll_opt", r.dll_opt},
          {"bound", r.bound},
          {"iterations", r.iterations}};
}

nlohmann::json to_json(const EnsembleStats& s) {
  auto sum = [](const Summary& m) {
    return nlohmann::json{{"mean", m.mean}, {"std", m.std}, {"median", m.median}};
  };
  return {{"count", s.count},         {"bcmax_sp", sum(s.bcmax_sp)}, {"bcmax_opt", sum(s.bcmax_opt)},
          {"rho", sum(s.rho)},         {"dll_sp", sum(s.dll_sp)},     {"dll_opt", sum(s.dll_opt)},
          {"bound", sum(s.bound)},     {"std_ratio", s.std_ratio}};
}

}  // namespace mlnet
