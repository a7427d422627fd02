#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "coopnav/error.hpp"
#include "coopnav/graph.hpp"
#include "coopnav/scenario.hpp"
#include "coopnav/simulation.hpp"
#include "coopnav/strategies.hpp"

namespace coopnav {

struct ExperimentConfig {
  std::string map_id = "synthetic";
  std::size_t instances = 50;
  std::uint64_t seed_base = 0;  // instance i uses seed_base + i
  double block_probability = 0.2;
  double v_g = 20.0;
  double v_a = 40.0;
  std::vector<Strategy> strategies{kAllStrategies.begin(), kAllStrategies.end()};
  std::size_t threads = 0;  // 0: hardware concurrency
};

struct ReportRow {
  std::string map;
  std::string instance;  // instance number, or "mean" for summary rows
  Strategy strategy = Strategy::full_obs;
  double ugv_time = 0.0;
  double uav_time = 0.0;
  double l_star = 0.0;
  double ratio = 0.0;
};

inline void validate(const ExperimentConfig& config) {
  if (config.instances < 1) throw Error("instance count must be at least 1");
  if (config.strategies.empty()) throw Error("at least one strategy is required");
  if (!(config.v_g > 0.0) || !(config.v_a > 0.0)) throw Error("speeds must be positive");
  if (!(config.block_probability >= 0.0 && config.block_probability < 1.0)) {
    throw Error("block probability must lie in [0,1)");
  }
}

inline std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw Error("number formatting failed");
  return std::string(buf, end);
}

inline double parse_number(const std::string& text) {
  double value = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw Error("malformed number '" + text + "'");
  }
  return value;
}

// Simulates every (instance, strategy) pair. Rows come back ordered by
// instance, then strategy in canonical order. `on_trace` (optional) receives
// each run's JSON-lines trace.
inline std::vector<ReportRow> run_experiment(
    const Graph& graph, const ExperimentConfig& config,
    const std::function<void(std::size_t, Strategy, const std::string&)>& on_trace = {}) {
  validate(config);
  std::vector<Strategy> strategies;
  for (Strategy s : kAllStrategies) {
    if (std::find(config.strategies.begin(), config.strategies.end(), s) !=
        config.strategies.end()) {
      strategies.push_back(s);
    }
  }

  std::vector<std::vector<ReportRow>> per_instance(config.instances);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::mutex trace_mutex;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= config.instances) return;
      try {
        const Scenario scenario = random_instance(graph, config.block_probability,
                                                  config.seed_base + i, config.v_g, config.v_a);
        SimulationOptions options;
        options.record_trace = static_cast<bool>(on_trace);
        for (Strategy s : strategies) {
          const SimulationResult r = simulate(graph, scenario, s, options);
          per_instance[i].push_back({config.map_id, std::to_string(i), s, r.ugv_time,
                                     r.uav_time, r.l_star, r.competitive_ratio});
          if (on_trace) {
            std::lock_guard lock(trace_mutex);
            on_trace(i, s, trace_to_jsonl(r.trace));
          }
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = config.instances;
        return;
      }
    }
  };

  std::size_t threads = config.threads ? config.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, config.instances);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<ReportRow> rows;
  for (auto& block : per_instance) {
    for (auto& row : block) rows.push_back(std::move(row));
  }
  return rows;
}

// Per (map, strategy) arithmetic means of the data rows.
inline std::vector<ReportRow> mean_rows(const std::vector<ReportRow>& rows) {
  struct Acc {
    double ugv = 0, uav = 0, l_star = 0, ratio = 0;
    std::size_t n = 0;
  };
  std::map<std::pair<std::string, int>, Acc> acc;
  for (const ReportRow& r : rows) {
    if (r.instance == "mean") continue;
    Acc& a = acc[{r.map, static_cast<int>(r.strategy)}];
    a.ugv += r.ugv_time;
    a.uav += r.uav_time;
    a.l_star += r.l_star;
    a.ratio += r.ratio;
    ++a.n;
  }
  std::vector<ReportRow> out;
  for (const auto& [key, a] : acc) {
    const double n = static_cast<double>(a.n);
    out.push_back({key.first, "mean", static_cast<Strategy>(key.second), a.ugv / n, a.uav / n,
                   a.l_star / n, a.ratio / n});
  }
  return out;
}

inline constexpr const char* kCsvHeader = "map,instance,strategy,ugv_time_s,uav_time_s,l_star_m,ratio";

// Data rows followed by per-strategy mean rows.
inline std::string write_csv(const std::vector<ReportRow>& rows) {
  std::string out = kCsvHeader;
  out += '\n';
  auto line = [&](const ReportRow& r) {
    out += r.map + ',' + r.instance + ',' + std::string(to_string(r.strategy)) + ',' +
           format_number(r.ugv_time) + ',' + format_number(r.uav_time) + ',' +
           format_number(r.l_star) + ',' + format_number(r.ratio) + '\n';
  };
  for (const ReportRow& r : rows) line(r);
  for (const ReportRow& r : mean_rows(rows)) line(r);
  return out;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

inline std::vector<ReportRow> read_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error("no data rows");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  std::map<std::string, std::size_t> column;
  for (std::size_t c = 0; c < header.size(); ++c) column[header[c]] = c;
  const char* required[] = {"map", "instance", "strategy", "ugv_time_s",
                            "uav_time_s", "l_star_m", "ratio"};
  for (const char* name : required) {
    if (!column.count(name)) throw Error(std::string("missing columns: ") + name);
  }
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() < header.size()) throw Error("short CSV row: " + line);
    rows.push_back({cells[column["map"]], cells[column["instance"]],
                    parse_strategy(cells[column["strategy"]]),
                    parse_number(cells[column["ugv_time_s"]]),
                    parse_number(cells[column["uav_time_s"]]),
                    parse_number(cells[column["l_star_m"]]),
                    parse_number(cells[column["ratio"]])});
  }
  return rows;
}

inline std::string_view table_heading(Strategy s) {
  switch (s) {
    case Strategy::full_obs: return "Full Obs.";
    case Strategy::ugv_only: return "UGV-Only";
    case Strategy::bidirectional: return "Bi-dir.";
    case Strategy::optimal_partition: return "Optimal Partition";
  }
  return "?";
}

// Markdown table of mean UGV time per map (rows) and strategy (columns),
// three decimals. Summary rows in the input are ignored; means are recomputed.
inline std::string report_markdown(const std::vector<ReportRow>& rows) {
  std::vector<ReportRow> data;
  for (const ReportRow& r : rows) {
    if (r.instance != "mean") data.push_back(r);
  }
  if (data.empty()) throw Error("no data rows");
  std::vector<Strategy> present;
  for (Strategy s : kAllStrategies) {
    if (std::any_of(data.begin(), data.end(), [&](const ReportRow& r) { return r.strategy == s; })) {
      present.push_back(s);
    }
  }
  std::map<std::pair<std::string, int>, double> means;
  for (const ReportRow& r : mean_rows(data)) {
    means[{r.map, static_cast<int>(r.strategy)}] = r.ugv_time;
  }
  std::vector<std::string> maps;
  for (const ReportRow& r : data) maps.push_back(r.map);
  std::sort(maps.begin(), maps.end());
  maps.erase(std::unique(maps.begin(), maps.end()), maps.end());

  std::string out = "| Map |";
  for (Strategy s : present) out += " " + std::string(table_heading(s)) + " |";
  out += "\n|---|";
  for (std::size_t i = 0; i < present.size(); ++i) out += "---:|";
  out += '\n';
  for (const std::string& map : maps) {
    out += "| " + map + " |";
    for (Strategy s : present) {
      auto it = means.find({map, static_cast<int>(s)});
      if (it == means.end()) {
        out += " - |";
      } else {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3f", it->second);
        out += " " + std::string(buf) + " |";
      }
    }
    out += '\n';
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace coopnav
