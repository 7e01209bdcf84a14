#include "mlnet/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include "mlnet/error.hpp"
#include "mlnet/graph_io.hpp"
#include "mlnet/placement.hpp"

namespace mlnet {

namespace {

int scaled(int size, double scale) { return std::max(1, static_cast<int>(std::lround(size * scale))); }

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join_sizes(const std::vector<std::pair<int, int>>& sizes) {
  std::string s;
  for (const auto& [w, l] : sizes) s += (s.empty() ? "" : ",") + std::to_string(w) + "x" + std::to_string(l);
  return s;
}

std::string join_variants(const std::vector<Variant>& vs) {
  std::string s;
  for (const Variant& v : vs)
    s += (s.empty() ? "" : ",") + std::string(to_string(v.placement)) + ":" + format_double(v.c_interfacing);
  return s;
}

}  // namespace

std::vector<PointSpec> ExperimentConfig::points() const {
  std::vector<PointSpec> pts;
  for (const auto& [nw, nl] : layer_sizes) {
    for (int ni : ni_sweep) {
      if (!full && nw + nl - ni > max_nodes) continue;
      pts.push_back({nw, nl, ni});
    }
  }
  return pts;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::ConfigError, why); };
  if (realizations < 1) fail("realizations must be >= 1");
  if (layer_sizes.empty()) fail("layer size sweep is empty");
  if (ni_sweep.empty()) fail("interfacing sweep is empty");
  if (variants.empty()) fail("variant list is empty");
  if (k_min < 1) fail("k_min must be >= 1");
  if (!(capacity > 0.0)) fail("capacity must be positive");
  if (!(patience_factor > 0.0) || !(max_iter_factor > 0.0)) fail("optimizer factors must be positive");
  for (const auto& [nw, nl] : layer_sizes) {
    if (nw < 3 || nl < 1) fail("layer sizes must be positive (wired >= 3)");
    if (nl <= k_min) fail("wireless layer must exceed k_min");
  }
  for (int ni : ni_sweep)
    if (ni < 1) fail("N_I values must be >= 1");
  for (const Variant& v : variants)
    if (!(v.c_interfacing > 0.0)) fail("interfacing capacity must be positive");
  for (const PointSpec& p : points())
    if (p.n_interfacing > std::min(p.n_wired, p.n_wireless)) fail("N_I exceeds a layer size");
  if (points().empty()) fail("no parameter point fits under max_nodes; use --full");
}

ExperimentConfig make_preset(const std::string& name, double scale, bool full) {
  if (!(scale > 0.0)) throw Error(ErrorCode::ConfigError, "scale must be positive");
  ExperimentConfig c;
  c.preset = name;
  c.scale = scale;
  c.full = full;
  if (full) c.realizations = 500;
  const std::vector<int> fig3_ni = full ? std::vector<int>{1, 2, 3, 4, 5, 6, 8, 10, 12, 15, 20}
                                        : std::vector<int>{1, 2, 4, 8};
  if (name == "fig2a") {
    for (int s : {100, 200, 400, 800}) c.layer_sizes.emplace_back(scaled(s, scale), scaled(s, scale));
    c.ni_sweep = {10};
    c.mode = ChannelMode::SingleChannel;
  } else if (name == "fig2b") {
    for (int s : {200, 400}) c.layer_sizes.emplace_back(scaled(s, scale), scaled(s, scale));
    c.ni_sweep = {1, 2, 4, 8, 16};
    c.mode = ChannelMode::SingleChannel;
  } else if (name == "fig3a") {
    c.layer_sizes = {{scaled(200, scale), scaled(1000, scale)}};
    c.ni_sweep = fig3_ni;
    c.variants = {{PlacementMode::RandomPlacement, 1.0}, {PlacementMode::OptimalPlacement, 1.0}};
  } else if (name == "fig3b") {
    c.layer_sizes = {{scaled(200, scale), scaled(1000, scale)}};
    c.ni_sweep = fig3_ni;
    c.variants = {{PlacementMode::RandomPlacement, 1.0},
                  {PlacementMode::RandomPlacement, 4.0},
                  {PlacementMode::OptimalPlacement, 4.0}};
  } else if (name == "custom") {
    c.layer_sizes = {{scaled(50, scale), scaled(250, scale)}};
    c.ni_sweep = {1};
  } else {
    throw Error(ErrorCode::ConfigError, "unknown preset '" + name + "'");
  }
  return c;
}

// Present keys must convert; absent keys keep the current value.
template <typename T>
void read_key(const boost::property_tree::ptree& tree, const char* path, T& out) {
  if (tree.get_child_optional(path)) out = tree.get<T>(path);
}

ExperimentConfig parse_config(std::istream& is, ExperimentConfig base) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  try {
    if (auto preset = tree.get_optional<std::string>("experiment.preset")) {
      double scale = base.scale;
      bool full = base.full;
      read_key(tree, "experiment.scale", scale);
      read_key(tree, "experiment.full", full);
      base = make_preset(*preset, scale, full);
    }
    ExperimentConfig c = std::move(base);
    if (auto v = tree.get_optional<std::string>("experiment.mode")) c.mode = parse_channel_mode(*v);
    read_key(tree, "experiment.realizations", c.realizations);
    read_key(tree, "experiment.seed", c.master_seed);
    read_key(tree, "experiment.out", c.out_dir);
    read_key(tree, "experiment.max_nodes", c.max_nodes);

    if (auto v = tree.get_optional<std::string>("layers.sizes")) {
      c.layer_sizes.clear();
      for (const std::string& item : split_list(*v)) {
        const auto x = item.find('x');
        if (x == std::string::npos) throw Error(ErrorCode::ConfigError, "layer size '" + item + "' is not WxL");
        c.layer_sizes.emplace_back(std::stoi(item.substr(0, x)), std::stoi(item.substr(x + 1)));
      }
    }
    if (auto v = tree.get_optional<std::string>("layers.interfacing")) {
      c.ni_sweep.clear();
      for (const std::string& item : split_list(*v)) c.ni_sweep.push_back(std::stoi(item));
    }
    read_key(tree, "layers.k_min", c.k_min);
    read_key(tree, "capacity.base", c.capacity);
    if (auto v = tree.get_optional<std::string>("variants.list")) {
      c.variants.clear();
      for (const std::string& item : split_list(*v)) {
        const auto colon = item.find(':');
        Variant var;
        var.placement = parse_placement_mode(item.substr(0, colon));
        if (colon != std::string::npos) var.c_interfacing = std::stod(item.substr(colon + 1));
        c.variants.push_back(var);
      }
    }
    if (tree.get_child_optional("capacity.interfacing")) {
      const auto ci = tree.get<double>("capacity.interfacing");
      for (Variant& var : c.variants) var.c_interfacing = ci;
    }
    read_key(tree, "pfp.p", c.pfp_p);
    read_key(tree, "pfp.delta", c.pfp_delta);
    read_key(tree, "optimizer.patience_factor", c.patience_factor);
    read_key(tree, "optimizer.max_iter_factor", c.max_iter_factor);
    read_key(tree, "optimizer.include_interfacing_wired_links", c.include_interfacing_wired_links);
    return c;
  } catch (const pt::ptree_error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  } catch (const std::logic_error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path);
  return parse_config(in, std::move(base));
}

void write_config(std::ostream& os, const ExperimentConfig& c) {
  std::string ni;
  for (int v : c.ni_sweep) ni += (ni.empty() ? "" : ",") + std::to_string(v);
  os << "[experiment]\n"
     << "preset = " << c.preset << '\n'
     << "scale = " << format_double(c.scale) << '\n'
     << "full = " << (c.full ? "true" : "false") << '\n'
     << "mode = " << to_string(c.mode) << '\n'
     << "realizations = " << c.realizations << '\n'
     << "seed = " << c.master_seed << '\n'
     << "out = " << c.out_dir << '\n'
     << "max_nodes = " << c.max_nodes << '\n'
     << "\n[layers]\n"
     << "sizes = " << join_sizes(c.layer_sizes) << '\n'
     << "interfacing = " << ni << '\n'
     << "k_min = " << c.k_min << '\n'
     << "\n[capacity]\n"
     << "base = " << format_double(c.capacity) << '\n'
     << "\n[variants]\n"
     << "list = " << join_variants(c.variants) << '\n'
     << "\n[pfp]\n"
     << "p = " << format_double(c.pfp_p) << '\n'
     << "delta = " << format_double(c.pfp_delta) << '\n'
     << "\n[optimizer]\n"
     << "patience_factor = " << format_double(c.patience_factor) << '\n'
     << "max_iter_factor = " << format_double(c.max_iter_factor) << '\n'
     << "include_interfacing_wired_links = " << (c.include_interfacing_wired_links ? "true" : "false")
     << '\n';
}

MultilayerGraph realize_graph(const ExperimentConfig& cfg, const PointSpec& point,
                              const Variant& variant, std::uint64_t seed) {
  Rng layer_rng(seed);
  const LayerGraph wired = generate_pfp(PfpParams::standard(point.n_wired, cfg.pfp_p, cfg.pfp_delta), layer_rng);
  const LayerGraph wireless = generate_min_degree_geometric({point.n_wireless, cfg.k_min}, layer_rng);

  std::vector<Point> targets;
  if (variant.placement == PlacementMode::OptimalPlacement) {
    Rng place_rng(mix64(seed ^ 0x706c616365ULL));
    targets = optimize_placement(point.n_interfacing, place_rng).points;
  }
  Rng pair_rng(mix64(seed ^ 0x7061697273ULL));
  return compose_multilayer(wired, wireless, point.n_interfacing, variant.placement, targets, pair_rng,
                            {cfg.capacity, variant.c_interfacing});
}

OptSchedule schedule_for(const ExperimentConfig& cfg, const MultilayerGraph& g) {
  OptSchedule s;
  s.mode = cfg.mode;
  s.patience = std::max(1, static_cast<int>(std::lround(cfg.patience_factor * g.size())));
  s.max_iterations = std::max(1, static_cast<int>(std::lround(cfg.max_iter_factor * g.size())));
  s.include_interfacing_wired_links = cfg.include_interfacing_wired_links;
  return s;
}

RealizationOutcome run_realization(const ExperimentConfig& cfg, const PointSpec& point,
                                   const Variant& variant, std::uint64_t seed) {
  const MultilayerGraph g = realize_graph(cfg, point, variant, seed);
  const WeightState unit(g.num_links());
  RealizationOutcome out;
  out.optimization = optimize(g, schedule_for(cfg, g));

  RunRecord& r = out.record;
  r.preset = cfg.preset;
  r.n_wired = point.n_wired;
  r.n_wireless = point.n_wireless;
  r.n_interfacing = point.n_interfacing;
  r.mode = cfg.mode;
  r.placement = variant.placement;
  r.c_interfacing = variant.c_interfacing;
  r.seed = seed;
  r.bcmax_sp = out.optimization.trace.front().max_eff;
  r.bcmax_opt = out.optimization.best_value;
  r.rho = r.bcmax_opt / r.bcmax_sp;
  r.dll_sp = d_ll(g, unit);
  r.dll_opt = d_ll(g, out.optimization.best_weights);
  r.bound = lower_bound_for(g).value;
  r.iterations = static_cast<int>(out.optimization.trace.size());
  return out;
}

namespace {

using RecordKey = std::tuple<int, int, int, std::string, std::string, std::string, std::uint64_t>;

RecordKey key_of(const RunRecord& r) {
  return {r.n_wired, r.n_wireless, r.n_interfacing, std::string(to_string(r.mode)),
          std::string(to_string(r.placement)), format_double(r.c_interfacing), r.seed};
}

EnsembleStats stats_any(std::span<const RunRecord> group) {
  if (group.size() >= 2) return ensemble_stats(group);
  EnsembleStats s;
  s.count = group.size();
  if (group.empty()) return s;
  const RunRecord& r = group.front();
  s.bcmax_sp = {r.bcmax_sp, 0.0, r.bcmax_sp};
  s.bcmax_opt = {r.bcmax_opt, 0.0, r.bcmax_opt};
  s.rho = {r.rho, 0.0, r.rho};
  s.dll_sp = {r.dll_sp, 0.0, r.dll_sp};
  s.dll_opt = {r.dll_opt, 0.0, r.dll_opt};
  s.bound = {r.bound, 0.0, r.bound};
  return s;
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + cfg.out_dir + ": " + ec.message());

  ExperimentOutput out;
  const fs::path dir(cfg.out_dir);
  out.records_path = (dir / (cfg.preset + "_records.csv")).string();
  out.summary_path = (dir / (cfg.preset + "_summary.csv")).string();
  out.json_path = (dir / (cfg.preset + "_records.json")).string();
  out.config_path = (dir / (cfg.preset + "_config.ini")).string();

  std::map<RecordKey, RunRecord> previous;
  if (std::ifstream prev(out.records_path); prev) {
    std::string line;
    if (std::getline(prev, line)) {
      if (line != kRecordCsvHeader)
        throw Error(ErrorCode::IoError, out.records_path + " has an unexpected header");
      while (std::getline(prev, line)) {
        if (line.empty()) continue;
        try {
          const RunRecord r = parse_record_csv_row(line);
          previous.emplace(key_of(r), r);
        } catch (const Error&) {
          // Truncated trailing row from an interrupted run; recomputed below.
        }
      }
    }
  }

  // Rewrite the file with the rows we keep so a torn last line disappears.
  std::ofstream rec(out.records_path, std::ios::trunc);
  if (!rec) throw Error(ErrorCode::IoError, "cannot write " + out.records_path);
  rec << kRecordCsvHeader << '\n';

  struct Task {
    std::size_t point;
    std::size_t variant;
    int realization;
    std::uint64_t seed;
  };
  const std::vector<PointSpec> pts = cfg.points();
  std::vector<Task> tasks;
  for (std::size_t p = 0; p < pts.size(); ++p)
    for (std::size_t v = 0; v < cfg.variants.size(); ++v)
      for (int r = 0; r < cfg.realizations; ++r)
        tasks.push_back({p, v, r, derive_seed(cfg.master_seed, p, static_cast<std::uint64_t>(r))});

  out.records.resize(tasks.size());
  std::vector<char> reused(tasks.size(), 0);
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    RunRecord probe;
    probe.n_wired = pts[tasks[i].point].n_wired;
    probe.n_wireless = pts[tasks[i].point].n_wireless;
    probe.n_interfacing = pts[tasks[i].point].n_interfacing;
    probe.mode = cfg.mode;
    probe.placement = cfg.variants[tasks[i].variant].placement;
    probe.c_interfacing = cfg.variants[tasks[i].variant].c_interfacing;
    probe.seed = tasks[i].seed;
    if (auto it = previous.find(key_of(probe)); it != previous.end()) {
      out.records[i] = it->second;
      out.records[i].preset = cfg.preset;
      reused[i] = 1;
      ++out.resumed;
    }
  }

  const auto ntasks = static_cast<std::int64_t>(tasks.size());
#pragma omp parallel for ordered schedule(dynamic, 1)
  for (std::int64_t i = 0; i < ntasks; ++i) {
    if (!reused[i]) {
      const Task& t = tasks[i];
      out.records[i] = run_realization(cfg, pts[t.point], cfg.variants[t.variant], t.seed).record;
    }
#pragma omp ordered
    {
      write_record_csv_row(rec, out.records[i]);
      rec.flush();
    }
  }

  std::ofstream sum(out.summary_path);
  if (!sum) throw Error(ErrorCode::IoError, "cannot write " + out.summary_path);
  sum << kSummaryCsvHeader << '\n';
  nlohmann::json summaries = nlohmann::json::array();
  const std::size_t per_group = static_cast<std::size_t>(cfg.realizations);
  for (std::size_t g = 0; g * per_group < out.records.size(); ++g) {
    const std::span<const RunRecord> group(out.records.data() + g * per_group, per_group);
    const EnsembleStats s = stats_any(group);
    write_summary_csv_row(sum, group.front(), s);
    nlohmann::json j = to_json(s);
    j["NW"] = group.front().n_wired;
    j["NL"] = group.front().n_wireless;
    j["NI"] = group.front().n_interfacing;
    j["placement"] = std::string(to_string(group.front().placement));
    j["CI"] = group.front().c_interfacing;
    summaries.push_back(std::move(j));
  }

  nlohmann::json records = nlohmann::json::array();
  for (const RunRecord& r : out.records) records.push_back(to_json(r));
  std::ofstream js(out.json_path);
  if (!js) throw Error(ErrorCode::IoError, "cannot write " + out.json_path);
  js << nlohmann::json{{"preset", cfg.preset}, {"records", records}, {"summary", summaries}}.dump(2) << '\n';

  std::ofstream cf(out.config_path);
  if (!cf) throw Error(ErrorCode::IoError, "cannot write " + out.config_path);
  write_config(cf, cfg);
  return out;
}

}  // namespace mlnet
