// coopnav: generate instances, run strategy batches, and tabulate results.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "coopnav/coopnav.hpp"

namespace {

using namespace coopnav;

std::vector<double> parse_lengths(const std::string& csv) {
  std::vector<double> out;
  std::stringstream in(csv);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    if (!cell.empty()) out.push_back(parse_number(cell));
  }
  return out;
}

std::vector<Strategy> parse_strategies(const std::string& csv) {
  std::vector<Strategy> out;
  std::stringstream in(csv);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    if (!cell.empty()) out.push_back(parse_strategy(cell));
  }
  return out;
}

Graph load_graph_file(const std::string& path) { return load_graph(read_file(path)); }

// "maps/tokyo.graph.json" -> "tokyo"
std::string map_label(const std::string& graph_path) {
  std::string stem = std::filesystem::path(graph_path).stem().string();
  const std::string suffix = ".graph";
  if (stem.size() > suffix.size() && stem.ends_with(suffix)) stem.resize(stem.size() - suffix.size());
  return stem;
}

void print_summary(const Graph& graph, const Scenario& scenario) {
  std::cout << "vertices: " << graph.vertex_count() << "\n"
            << "edges: " << graph.edge_count() << "\n"
            << "s: " << graph.vertex(scenario.s).id << "\n"
            << "g: " << graph.vertex(scenario.g).id << "\n"
            << "uav_start: " << graph.vertex(scenario.uav_start).id << "\n"
            << "blockages: " << scenario.blockages.size() << "\n"
            << "L*: " << format_number(offline_optimum(graph, scenario)) << "\n";
}

void write_instance(const std::string& prefix, const Graph& graph, const Scenario& scenario) {
  write_file(prefix + ".graph.json", to_json(graph).dump(2) + "\n");
  write_file(prefix + ".scenario.json", to_json(graph, scenario).dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UGV-UAV cooperative path planning under unknown road blockages"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "Write graph and scenario JSON files");
  generate->require_subcommand(1);

  std::string out_prefix;
  double v_g = 20.0;
  double v_a = 40.0;
  std::uint64_t seed = 0;

  auto* disjoint = generate->add_subcommand("disjoint", "k disjoint s-g paths, adversarial blockages");
  std::string lengths_csv;
  std::size_t segments = 2;
  double eps = 1e-3;
  disjoint->add_option("--lengths", lengths_csv, "Nondecreasing path lengths, comma separated")
      ->required();
  disjoint->add_option("--segments", segments, "Edges per path")->capture_default_str();
  disjoint->add_option("--eps", eps, "Blockage offset from g, fraction of the final edge")
      ->capture_default_str();
  disjoint->add_option("--vg", v_g, "UGV speed (m/s)")->capture_default_str();
  disjoint->add_option("--va", v_a, "UAV speed (m/s)")->capture_default_str();
  disjoint->add_option("--out", out_prefix, "Output prefix")->required();

  auto* random = generate->add_subcommand("random", "Random midpoint blockages on a graph");
  std::string graph_path;
  std::string s_id, g_id, uav_id;
  double block_prob = 0.2;
  random->add_option("--graph", graph_path, "Graph JSON file")->required();
  random->add_option("--s", s_id, "UGV start vertex id (random when omitted)");
  random->add_option("--g", g_id, "Goal vertex id (random when omitted)");
  random->add_option("--uav-start", uav_id, "UAV start vertex id (default: s)");
  random->add_option("--block-prob", block_prob, "Per-edge blocking probability")
      ->capture_default_str();
  random->add_option("--seed", seed, "Random seed")->capture_default_str();
  random->add_option("--vg", v_g, "UGV speed (m/s)")->capture_default_str();
  random->add_option("--va", v_a, "UAV speed (m/s)")->capture_default_str();
  random->add_option("--out", out_prefix, "Output prefix")->required();

  auto* grid = generate->add_subcommand("grid", "Synthetic perturbed grid road map");
  GridOptions grid_options;
  grid->add_option("--rows", grid_options.rows)->capture_default_str();
  grid->add_option("--cols", grid_options.cols)->capture_default_str();
  grid->add_option("--spacing", grid_options.spacing, "Grid spacing (m)")->capture_default_str();
  grid->add_option("--jitter", grid_options.jitter)->capture_default_str();
  grid->add_option("--delete-prob", grid_options.deletion_probability)->capture_default_str();
  grid->add_option("--seed", seed, "Random seed")->capture_default_str();
  grid->add_option("--out", out_prefix, "Output prefix")->required();

  // run
  auto* run = app.add_subcommand("run", "Simulate strategies and write a CSV report");
  ExperimentConfig config;
  std::string strategies_csv = "full_obs,ugv_only,bidirectional,optimal_partition";
  std::string scenario_path;
  std::string csv_out;
  std::string trace_dir;
  std::string map_id;
  run->add_option("--graph", graph_path, "Graph JSON file (default 10x10 synthetic grid, seed 0)");
  run->add_option("--scenario", scenario_path, "Simulate this scenario instead of random ones");
  run->add_option("--map-id", map_id, "Map label for the report (default: graph file stem)");
  run->add_option("--instances", config.instances)->capture_default_str();
  run->add_option("--seed", config.seed_base, "Seed base; instance i uses seed + i")
      ->capture_default_str();
  run->add_option("--block-prob", config.block_probability)->capture_default_str();
  run->add_option("--vg", config.v_g, "UGV speed (m/s)")->capture_default_str();
  run->add_option("--va", config.v_a, "UAV speed (m/s)")->capture_default_str();
  run->add_option("--strategies", strategies_csv)->capture_default_str();
  run->add_option("--threads", config.threads, "Worker threads (0: all cores)");
  run->add_option("--out", csv_out, "CSV output path (stdout when omitted)");
  run->add_option("--trace-dir", trace_dir, "Write one JSON-lines trace per run here");

  // report
  auto* report = app.add_subcommand("report", "Markdown table of mean UGV times from a CSV");
  std::string csv_in;
  std::string md_out;
  report->add_option("csv", csv_in, "CSV produced by 'run'")->required();
  report->add_option("--out", md_out, "Markdown output path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (disjoint->parsed()) {
      const auto instance = gen_disjoint_adversarial(parse_lengths(lengths_csv), segments, eps,
                                                     v_g, v_a);
      write_instance(out_prefix, instance.graph, instance.scenario);
      print_summary(instance.graph, instance.scenario);
    } else if (random->parsed()) {
      const Graph graph = load_graph_file(graph_path);
      Scenario scenario;
      if (s_id.empty() && g_id.empty()) {
        scenario = random_instance(graph, block_prob, seed, v_g, v_a);
      } else {
        if (s_id.empty() || g_id.empty()) throw Error("--s and --g must be given together");
        const VertexIndex s = graph.vertex_index(s_id);
        const VertexIndex g = graph.vertex_index(g_id);
        const VertexIndex uav = uav_id.empty() ? s : graph.vertex_index(uav_id);
        scenario = gen_random(graph, s, g, uav, block_prob, seed, v_g, v_a);
      }
      write_instance(out_prefix, graph, scenario);
      print_summary(graph, scenario);
    } else if (grid->parsed()) {
      const Graph graph = gen_grid_map(grid_options, seed);
      write_file(out_prefix + ".graph.json", to_json(graph).dump(2) + "\n");
      std::cout << "vertices: " << graph.vertex_count() << "\n"
                << "edges: " << graph.edge_count() << "\n";
    } else if (run->parsed()) {
      config.strategies = parse_strategies(strategies_csv);
      Graph graph = graph_path.empty() ? gen_grid_map(GridOptions{}, 0)
                                       : load_graph_file(graph_path);
      config.map_id = !map_id.empty()     ? map_id
                      : graph_path.empty() ? std::string("synthetic")
                                           : map_label(graph_path);
      auto trace_sink = [&](std::size_t i, Strategy s, const std::string& jsonl) {
        write_file((std::filesystem::path(trace_dir) /
                    (config.map_id + "_" + std::to_string(i) + "_" + std::string(to_string(s)) +
                     ".jsonl"))
                       .string(),
                   jsonl);
      };
      if (!trace_dir.empty()) std::filesystem::create_directories(trace_dir);

      std::vector<ReportRow> rows;
      if (!scenario_path.empty()) {
        if (graph_path.empty()) throw Error("--scenario requires --graph");
        validate(config);
        const Scenario scenario =
            load_scenario(graph, nlohmann::json::parse(read_file(scenario_path)));
        for (Strategy s : kAllStrategies) {
          if (std::find(config.strategies.begin(), config.strategies.end(), s) ==
              config.strategies.end()) {
            continue;
          }
          const SimulationResult r = simulate(graph, scenario, s);
          rows.push_back({config.map_id, "0", s, r.ugv_time, r.uav_time, r.l_star,
                          r.competitive_ratio});
          if (!trace_dir.empty()) trace_sink(0, s, trace_to_jsonl(r.trace));
        }
      } else if (trace_dir.empty()) {
        rows = run_experiment(graph, config);
      } else {
        rows = run_experiment(graph, config, trace_sink);
      }
      const std::string csv = write_csv(rows);
      if (csv_out.empty()) {
        std::cout << csv;
      } else {
        write_file(csv_out, csv);
      }
    } else if (report->parsed()) {
      const std::string table = report_markdown(read_csv(read_file(csv_in)));
      if (md_out.empty()) {
        std::cout << table;
      } else {
        write_file(md_out, table);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
