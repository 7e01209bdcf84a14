// mlnet command-line front end.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mlnet/error.hpp"
#include "mlnet/experiment.hpp"
#include "mlnet/graph_io.hpp"
#include "mlnet/optimizer.hpp"
#include "mlnet/packet_sim.hpp"
#include "mlnet/placement.hpp"

namespace fs = std::filesystem;
using namespace mlnet;

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return os;
}

// Writes to `path`, or to stdout when the path is empty or "-".
template <typename F>
void emit(const std::string& path, F&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream os = open_out(path);
  write(os);
}

struct GenerateArgs {
  int n_wired = 50, n_wireless = 250, n_interfacing = 1, k_min = 8;
  std::string placement = "RP";
  double c_interfacing = 1.0;
  std::uint64_t seed = 1;
  std::string out;
};

void run_generate(const GenerateArgs& a) {
  ExperimentConfig cfg = make_preset("custom");
  cfg.k_min = a.k_min;
  const Variant v{parse_placement_mode(a.placement), a.c_interfacing};
  const MultilayerGraph g = realize_graph(cfg, {a.n_wired, a.n_wireless, a.n_interfacing}, v, a.seed);
  emit(a.out, [&](std::ostream& os) { write_graph(os, g); });
}

struct OptimizeArgs {
  std::string graph;
  std::string mode = "multi";
  std::string out = ".";
  std::optional<int> max_iterations, patience;
  bool exclude_interfacing_wired = false;
};

void run_optimize(const OptimizeArgs& a) {
  const ParsedGraph parsed = read_graph_file(a.graph);
  const MultilayerGraph& g = parsed.graph;
  OptSchedule s = OptSchedule::defaults_for(g, parse_channel_mode(a.mode));
  if (a.max_iterations) s.max_iterations = *a.max_iterations;
  if (a.patience) s.patience = *a.patience;
  s.include_interfacing_wired_links = !a.exclude_interfacing_wired;
  const OptimizationResult r = optimize(g, s);

  const fs::path dir(a.out);
  {
    std::ofstream os = open_out(dir / "trace.csv");
    write_trace_csv(os, r);
  }
  {
    std::ofstream os = open_out(dir / "weights.graph");
    write_weighted_graph(os, g, r.best_weights);
  }
  std::printf("bcmax_sp=%s bcmax_opt=%s rho=%s best_iteration=%d iterations=%zu stop=%s\n",
              format_double(r.trace.front().max_eff).c_str(), format_double(r.best_value).c_str(),
              format_double(r.best_value / r.trace.front().max_eff).c_str(), r.best_iteration, r.trace.size(),
              std::string(to_string(r.stop)).c_str());
}

struct PlaceArgs {
  int n = 4;
  std::uint64_t seed = 1;
  int restarts = 1;
  std::string out;
};

void run_place(const PlaceArgs& a) {
  Rng rng(a.seed);
  PlacementSchedule s;
  s.restarts = a.restarts;
  const PlacementResult r = optimize_placement(a.n, rng, s);
  emit(a.out, [&](std::ostream& os) { write_placement_csv(os, r); });
}

struct SimulateArgs {
  std::string graph;
  std::string mode = "multi";
  double rate = 1.0;
  int steps = 3000, warmup = 500;
  std::uint64_t seed = 1;
  bool threshold = false;
  std::string out;
};

void run_simulate(const SimulateArgs& a) {
  const ParsedGraph parsed = read_graph_file(a.graph);
  const ChannelMode mode = parse_channel_mode(a.mode);
  const RoutingTables tables = build_routing_tables(parsed.graph, parsed.weights);
  if (a.threshold) {
    ThresholdOptions opts;
    opts.steps = a.steps;
    opts.warmup = a.warmup;
    opts.seed = a.seed;
    const ThresholdResult t = congestion_threshold(parsed.graph, tables, mode, opts);
    const nlohmann::json j = {{"mode", to_string(mode)},       {"measured", t.measured}, {"predicted", t.predicted},
                              {"lo", t.lo},                    {"hi", t.hi},             {"simulations", t.simulations}};
    emit(a.out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    return;
  }
  SimConfig cfg;
  cfg.rate = a.rate;
  cfg.steps = a.steps;
  cfg.warmup = a.warmup;
  cfg.mode = mode;
  cfg.seed = a.seed;
  const SimResult r = simulate(parsed.graph, tables, cfg);
  emit(a.out, [&](std::ostream& os) { write_queue_csv(os, r); });
  std::fprintf(stderr, "eta=%s injected=%lld delivered=%lld\n", format_double(r.eta).c_str(),
               static_cast<long long>(r.injected), static_cast<long long>(r.delivered.back()));
}

struct ExperimentArgs {
  std::string preset = "fig3a";
  std::string config;
  std::optional<double> scale;
  std::optional<std::uint64_t> seed;
  std::optional<int> realizations;
  std::optional<std::string> mode, out;
  bool full = false;
};

void run_experiment_cmd(const ExperimentArgs& a) {
  ExperimentConfig cfg = make_preset(a.preset, a.scale.value_or(1.0), a.full);
  if (!a.config.empty()) cfg = load_config(a.config, cfg);
  // Command-line flags override the config file.
  if (a.scale && (!a.config.empty())) {
    ExperimentConfig scaled = make_preset(cfg.preset, *a.scale, a.full || cfg.full);
    cfg.layer_sizes = scaled.layer_sizes;
    cfg.scale = *a.scale;
  }
  if (a.full) cfg.full = true;
  if (a.seed) cfg.master_seed = *a.seed;
  if (a.realizations) cfg.realizations = *a.realizations;
  if (a.mode) cfg.mode = parse_channel_mode(*a.mode);
  if (a.out) cfg.out_dir = *a.out;
  const ExperimentOutput out = run_experiment(cfg);
  std::printf("%zu records (%d resumed)\n%s\n%s\n%s\n%s\n", out.records.size(), out.resumed,
              out.records_path.c_str(), out.summary_path.c_str(), out.json_path.c_str(), out.config_path.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Routing and placement tools for wired-wireless multilayer networks"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all subcommand help");
  const std::string modes = "single|multi";

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate a multilayer graph");
  g->add_option("--wired", gen.n_wired, "Wired layer size N_W")->capture_default_str();
  g->add_option("--wireless", gen.n_wireless, "Wireless layer size N_L")->capture_default_str();
  g->add_option("--ni", gen.n_interfacing, "Interfacing nodes N_I")->capture_default_str();
  g->add_option("--k-min", gen.k_min, "Wireless minimum degree")->capture_default_str();
  g->add_option("--placement", gen.placement, "RP or OP")->capture_default_str();
  g->add_option("--ci", gen.c_interfacing, "Interfacing node capacity")->capture_default_str();
  g->add_option("--seed", gen.seed)->capture_default_str();
  g->add_option("--out", gen.out, "Output file (default stdout)");

  OptimizeArgs opt;
  auto* o = app.add_subcommand("optimize", "Optimize link weights of a graph file");
  o->add_option("graph", opt.graph, "Graph file")->required();
  o->add_option("--mode", opt.mode, modes)->capture_default_str();
  o->add_option("--out", opt.out, "Output directory for trace.csv and weights.graph")->capture_default_str();
  o->add_option("--max-iterations", opt.max_iterations, "Default 40 N");
  o->add_option("--patience", opt.patience, "Default 2 N");
  o->add_flag("--exclude-interfacing-wired", opt.exclude_interfacing_wired,
              "Leave an interfacing argmax node's wired links unchanged");

  PlaceArgs pl;
  auto* p = app.add_subcommand("place", "Maximize the minimum candidate radius of n points");
  p->add_option("--n", pl.n)->capture_default_str();
  p->add_option("--seed", pl.seed)->capture_default_str();
  p->add_option("--restarts", pl.restarts)->capture_default_str();
  p->add_option("--out", pl.out, "Output CSV (default stdout)");

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Run the packet simulator on a graph file");
  s->add_option("graph", sim.graph, "Graph file; a weight column selects the routing weights")->required();
  s->add_option("--mode", sim.mode, modes)->capture_default_str();
  s->add_option("--rate", sim.rate, "Packets injected per step")->capture_default_str();
  s->add_option("--steps", sim.steps)->capture_default_str();
  s->add_option("--warmup", sim.warmup)->capture_default_str();
  s->add_option("--seed", sim.seed)->capture_default_str();
  s->add_flag("--threshold", sim.threshold, "Bisect for the congestion threshold instead");
  s->add_option("--out", sim.out, "Output file (default stdout)");

  ExperimentArgs ex;
  auto* e = app.add_subcommand("experiment", "Run a preset ensemble");
  e->add_option("--preset", ex.preset, "fig2a|fig2b|fig3a|fig3b|custom")->capture_default_str();
  e->add_option("--config", ex.config, "INI config file");
  e->add_option("--scale", ex.scale, "Layer size factor");
  e->add_option("--seed", ex.seed, "Master seed");
  e->add_option("--realizations", ex.realizations);
  e->add_option("--mode", ex.mode, modes);
  e->add_option("--out", ex.out, "Output directory");
  e->add_flag("--full", ex.full, "Full-size layers and 500 realizations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    std::fprintf(stderr, "error: UsageError: %s\n", err.what());
    return 2;
  }

  try {
    if (*g) run_generate(gen);
    if (*o) run_optimize(opt);
    if (*p) run_place(pl);
    if (*s) run_simulate(sim);
    if (*e) run_experiment_cmd(ex);
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 0;
}
