#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "coopnav/error.hpp"
#include "coopnav/graph.hpp"

namespace coopnav {

// Damage point on an edge, at `fraction` of its length measured from the
// edge's lower-id endpoint (Edge::u).
struct Blockage {
  EdgeIndex edge = 0;
  double fraction = 0.5;
  bool operator==(const Blockage&) const = default;
};

struct Scenario {
  VertexIndex s = 0;
  VertexIndex g = 0;
  VertexIndex uav_start = 0;
  std::vector<Blockage> blockages;  // sorted by edge index
  double v_g = 20.0;                // m/s
  double v_a = 40.0;                // m/s
  std::uint64_t seed = 0;

  EdgeSet blocked_set(const Graph& graph) const {
    EdgeSet set(graph.edge_count());
    for (const Blockage& b : blockages) set.insert(b.edge);
    return set;
  }

  std::optional<double> damage_fraction(EdgeIndex e) const {
    auto it = std::lower_bound(
        blockages.begin(), blockages.end(), e,
        [](const Blockage& b, EdgeIndex key) { return b.edge < key; });
    if (it == blockages.end() || it->edge != e) return std::nullopt;
    return it->fraction;
  }
};

// Distance from endpoint `from` of edge `e` to the damage point.
inline double damage_distance(const Graph& graph, EdgeIndex e, double fraction,
                              VertexIndex from) {
  const Edge& edge = graph.edge(e);
  return from == edge.u ? fraction * edge.length : (1.0 - fraction) * edge.length;
}

inline bool is_viable(const Graph& graph, const Scenario& scenario) {
  return shortest_path(graph, scenario.s, scenario.g, scenario.blocked_set(graph))
      .has_value();
}

inline void validate(const Graph& graph, const Scenario& scenario) {
  for (VertexIndex v : {scenario.s, scenario.g, scenario.uav_start}) {
    if (v >= graph.vertex_count()) throw Error("scenario references unknown vertex");
  }
  if (scenario.s == scenario.g) throw Error("start and goal must differ");
  if (!(scenario.v_g > 0.0) || !(scenario.v_a > 0.0)) {
    throw Error("speeds must be positive");
  }
  for (std::size_t i = 0; i < scenario.blockages.size(); ++i) {
    const Blockage& b = scenario.blockages[i];
    if (b.edge >= graph.edge_count()) throw Error("blockage on unknown edge");
    if (!(b.fraction > 0.0 && b.fraction < 1.0)) {
      throw Error("blockage fraction must lie strictly inside (0,1)");
    }
    if (i > 0 && scenario.blockages[i - 1].edge >= b.edge) {
      throw Error("blockages must be unique and sorted by edge");
    }
  }
  if (!is_viable(graph, scenario)) throw Error("scenario is not viable: goal unreachable");
}

// Length of the shortest s-g path using no blocked edge.
inline double offline_optimum(const Graph& graph, const Scenario& scenario) {
  auto path = shortest_path(graph, scenario.s, scenario.g, scenario.blocked_set(graph));
  if (!path) throw Error("unreachable goal");
  return path_length(graph, *path);
}

namespace detail {

// Platform-independent draws on top of mt19937_64, whose output sequence is
// fixed by the standard (the std distributions are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform01() * static_cast<double>(n)) % n;
  }

 private:
  std::mt19937_64 engine_;
};

inline std::string padded(std::size_t value, std::size_t width) {
  std::ostringstream out;
  out << std::setw(static_cast<int>(width)) << std::setfill('0') << value;
  return out.str();
}

}  // namespace detail

struct DisjointInstance {
  Graph graph;
  Scenario scenario;
  std::vector<Path> paths;  // P_1..P_k, each from s to g
};

// Builds k internally disjoint s-g paths with the requested road lengths and
// blocks the final edge of every path but the last at a distance of
// `epsilon_fraction` times that edge's length from g.
//
// Vertices are laid out on a fan: path i bends through an apex on the ellipse
// with foci s and g whose string length is L_i, so each polyline has planar
// length L_i and every road edge is at least as long as its chord.
inline DisjointInstance gen_disjoint_adversarial(std::vector<double> lengths,
                                                 std::size_t segments_per_path,
                                                 double epsilon_fraction = 1e-3,
                                                 double v_g = 20.0,
                                                 double v_a = 40.0) {
  const std::size_t k = lengths.size();
  if (k == 0) throw Error("at least one path is required");
  if (segments_per_path < 2) throw Error("segments_per_path must be at least 2");
  if (!(epsilon_fraction > 0.0 && epsilon_fraction < 1.0)) {
    throw Error("epsilon_fraction must lie in (0,1)");
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (!(lengths[i] > 0.0) || !std::isfinite(lengths[i])) {
      throw Error("path lengths must be positive");
    }
    if (i > 0 && lengths[i] < lengths[i - 1]) {
      throw Error("path lengths must be nondecreasing");
    }
  }

  const double chord = 0.5 * lengths.front();
  const double focus = 0.5 * chord;
  const std::size_t width = std::to_string(k).size();
  const std::size_t seg_width = std::to_string(segments_per_path).size();

  std::vector<Vertex> vertices;
  std::vector<Graph::EdgeSpec> specs;
  vertices.push_back({"s", -focus, 0.0});
  vertices.push_back({"g", focus, 0.0});
  constexpr VertexIndex s = 0;
  constexpr VertexIndex g = 1;

  std::vector<std::vector<VertexIndex>> path_vertices(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double a = 0.5 * lengths[i];
    const double b = std::sqrt(std::max(a * a - focus * focus, 0.0));
    // Alternate above and below the s-g axis, spreading apexes over each half.
    const std::size_t half = (k + 1) / 2;
    const std::size_t slot = i / 2;
    double angle = std::numbers::pi * (static_cast<double>(slot) + 1.0) /
                   (static_cast<double>(half) + 1.0);
    if (i % 2 == 1) angle = -angle;
    const double apex_x = a * std::cos(angle);
    const double apex_y = b * std::sin(angle);
    const double leg1 = std::hypot(apex_x + focus, apex_y);
    const double leg2 = std::hypot(focus - apex_x, apex_y);
    const double planar = leg1 + leg2;

    auto point_at = [&](double t) {  // arc-length parameter along s->apex->g
      if (t <= leg1) {
        const double f = t / leg1;
        return std::pair{-focus + f * (apex_x + focus), f * apex_y};
      }
      const double f = (t - leg1) / leg2;
      return std::pair{apex_x + f * (focus - apex_x), apex_y - f * apex_y};
    };

    auto& pv = path_vertices[i];
    pv.push_back(s);
    for (std::size_t r = 1; r < segments_per_path; ++r) {
      const double t = planar * static_cast<double>(r) /
                       static_cast<double>(segments_per_path);
      auto [x, y] = point_at(t);
      pv.push_back(vertices.size());
      vertices.push_back({"P" + detail::padded(i + 1, width) + "." +
                              detail::padded(r, seg_width),
                          x, y});
    }
    pv.push_back(g);
    const double segment = lengths[i] / static_cast<double>(segments_per_path);
    for (std::size_t r = 1; r < pv.size(); ++r) {
      // The last segment absorbs rounding so the path sums to L_i.
      const double len = r + 1 == pv.size()
                             ? lengths[i] - segment * static_cast<double>(segments_per_path - 1)
                             : segment;
      specs.push_back({pv[r - 1], pv[r], len});
    }
  }

  DisjointInstance out{Graph(std::move(vertices), specs), Scenario{}, {}};
  out.scenario.s = s;
  out.scenario.g = g;
  out.scenario.uav_start = s;
  out.scenario.v_g = v_g;
  out.scenario.v_a = v_a;
  for (std::size_t i = 0; i < k; ++i) {
    out.paths.push_back(Path{path_vertices[i]});
    if (i + 1 == k) continue;
    const auto& pv = path_vertices[i];
    const VertexIndex last_inner = pv[pv.size() - 2];
    const EdgeIndex e = out.graph.edge_between(last_inner, g);
    const double from_u = out.graph.edge(e).u == g ? epsilon_fraction
                                                   : 1.0 - epsilon_fraction;
    out.scenario.blockages.push_back({e, from_u});
  }
  std::sort(out.scenario.blockages.begin(), out.scenario.blockages.end(),
            [](const Blockage& a, const Blockage& b) { return a.edge < b.edge; });
  return out;
}

inline constexpr int kViabilityRetries = 1000;

// Blocks each edge independently with `block_probability`, damage at the
// midpoint, resampling until some s-g path stays open.
inline Scenario gen_random(const Graph& graph, VertexIndex s, VertexIndex g,
                           VertexIndex uav_start, double block_probability,
                           std::uint64_t seed, double v_g = 20.0, double v_a = 40.0) {
  for (VertexIndex v : {s, g, uav_start}) graph.require_vertex(v);
  if (s == g) throw Error("start and goal must differ");
  if (!(block_probability >= 0.0 && block_probability < 1.0)) {
    throw Error("block probability must lie in [0,1)");
  }
  if (!shortest_path(graph, s, g)) throw Error("unreachable goal");

  Scenario scenario;
  scenario.s = s;
  scenario.g = g;
  scenario.uav_start = uav_start;
  scenario.v_g = v_g;
  scenario.v_a = v_a;
  scenario.seed = seed;

  detail::Rng rng(seed);
  for (int attempt = 0; attempt < kViabilityRetries; ++attempt) {
    scenario.blockages.clear();
    for (EdgeIndex e = 0; e < graph.edge_count(); ++e) {
      if (rng.uniform01() < block_probability) scenario.blockages.push_back({e, 0.5});
    }
    if (is_viable(graph, scenario)) return scenario;
  }
  throw Error("viability unachievable within retry budget");
}

// Picks distinct connected s and g plus a UAV start uniformly at random, then
// draws blockages with gen_random.
inline Scenario random_instance(const Graph& graph, double block_probability,
                                std::uint64_t seed, double v_g = 20.0,
                                double v_a = 40.0) {
  if (graph.vertex_count() < 2) throw Error("graph needs at least two vertices");
  detail::Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int attempt = 0; attempt < kViabilityRetries; ++attempt) {
    const VertexIndex s = rng.index(graph.vertex_count());
    const VertexIndex g = rng.index(graph.vertex_count());
    const VertexIndex uav = rng.index(graph.vertex_count());
    if (s == g || !shortest_path(graph, s, g)) continue;
    return gen_random(graph, s, g, uav, block_probability, seed, v_g, v_a);
  }
  throw Error("unreachable goal");
}

struct GridOptions {
  std::size_t rows = 10;
  std::size_t cols = 10;
  double spacing = 100.0;          // meters between grid lines
  double jitter = 0.2;             // max displacement, fraction of spacing
  double deletion_probability = 0.15;
};

// Perturbed grid with random edge deletions; deletions that would disconnect
// the graph are skipped. Edge lengths are Euclidean.
inline Graph gen_grid_map(const GridOptions& options, std::uint64_t seed) {
  if (options.rows < 2 || options.cols < 2) throw Error("grid needs at least 2x2 vertices");
  if (!(options.spacing > 0.0)) throw Error("grid spacing must be positive");
  if (!(options.jitter >= 0.0 && options.jitter < 0.5)) {
    throw Error("grid jitter must lie in [0,0.5)");
  }
  detail::Rng rng(seed);
  const std::size_t n = options.rows * options.cols;
  const std::size_t width = std::to_string(n - 1).size();
  std::vector<Vertex> vertices;
  vertices.reserve(n);
  for (std::size_t r = 0; r < options.rows; ++r) {
    for (std::size_t c = 0; c < options.cols; ++c) {
      const double dx = (2.0 * rng.uniform01() - 1.0) * options.jitter * options.spacing;
      const double dy = (2.0 * rng.uniform01() - 1.0) * options.jitter * options.spacing;
      vertices.push_back({"v" + detail::padded(vertices.size(), width),
                          static_cast<double>(c) * options.spacing + dx,
                          static_cast<double>(r) * options.spacing + dy});
    }
  }
  std::vector<std::pair<VertexIndex, VertexIndex>> candidates;
  for (std::size_t r = 0; r < options.rows; ++r) {
    for (std::size_t c = 0; c < options.cols; ++c) {
      const VertexIndex i = r * options.cols + c;
      if (c + 1 < options.cols) candidates.emplace_back(i, i + 1);
      if (r + 1 < options.rows) candidates.emplace_back(i, i + options.cols);
    }
  }
  std::vector<bool> keep(candidates.size(), true);

  auto connected_without = [&](std::size_t skip) {
    std::vector<std::vector<VertexIndex>> adj(n);
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      if (!keep[k] || k == skip) continue;
      adj[candidates[k].first].push_back(candidates[k].second);
      adj[candidates[k].second].push_back(candidates[k].first);
    }
    std::vector<bool> seen(n, false);
    std::vector<VertexIndex> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
      const VertexIndex u = stack.back();
      stack.pop_back();
      for (VertexIndex w : adj[u]) {
        if (!seen[w]) {
          seen[w] = true;
          ++count;
          stack.push_back(w);
        }
      }
    }
    return count == n;
  };

  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (rng.uniform01() < options.deletion_probability && connected_without(k)) {
      keep[k] = false;
    }
  }
  std::vector<Graph::EdgeSpec> specs;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (keep[k]) specs.push_back({candidates[k].first, candidates[k].second, -1.0});
  }
  return Graph(std::move(vertices), specs);
}

inline nlohmann::json to_json(const Graph& graph, const Scenario& scenario) {
  nlohmann::json doc;
  doc["s"] = graph.vertex(scenario.s).id;
  doc["g"] = graph.vertex(scenario.g).id;
  doc["uav_start"] = graph.vertex(scenario.uav_start).id;
  doc["v_g"] = scenario.v_g;
  doc["v_a"] = scenario.v_a;
  doc["seed"] = scenario.seed;
  doc["blockages"] = nlohmann::json::array();
  for (const Blockage& b : scenario.blockages) {
    const Edge& e = graph.edge(b.edge);
    doc["blockages"].push_back({{"u", graph.vertex(e.u).id},
                                {"v", graph.vertex(e.v).id},
                                {"fraction", b.fraction}});
  }
  return doc;
}

// Parses and validates the JSON scenario document against `graph`.
inline Scenario load_scenario(const Graph& graph, const nlohmann::json& doc) {
  auto need_string = [&](const char* key) {
    if (!doc.contains(key) || !doc[key].is_string()) {
      throw Error(std::string("malformed scenario document: missing '") + key + "'");
    }
    return graph.vertex_index(doc[key].get<std::string>());
  };
  auto need_number = [&](const char* key) {
    if (!doc.contains(key) || !doc[key].is_number()) {
      throw Error(std::string("malformed scenario document: missing '") + key + "'");
    }
    return doc[key].get<double>();
  };
  if (!doc.is_object()) throw Error("malformed scenario document");
  Scenario scenario;
  scenario.s = need_string("s");
  scenario.g = need_string("g");
  scenario.uav_start = need_string("uav_start");
  scenario.v_g = need_number("v_g");
  scenario.v_a = need_number("v_a");
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer()) {
      throw Error("malformed scenario document: 'seed' must be an integer");
    }
    scenario.seed = doc["seed"].get<std::uint64_t>();
  }
  if (!doc.contains("blockages") || !doc["blockages"].is_array()) {
    throw Error("malformed scenario document: missing 'blockages'");
  }
  for (const auto& jb : doc["blockages"]) {
    if (!jb.is_object() || !jb.contains("u") || !jb["u"].is_string() ||
        !jb.contains("v") || !jb["v"].is_string() || !jb.contains("fraction") ||
        !jb["fraction"].is_number()) {
      throw Error("malformed scenario document: bad blockage entry");
    }
    const VertexIndex u = graph.vertex_index(jb["u"].get<std::string>());
    const VertexIndex v = graph.vertex_index(jb["v"].get<std::string>());
    auto e = graph.find_edge(u, v);
    if (!e) throw Error("blockage on unknown edge");
    scenario.blockages.push_back({*e, jb["fraction"].get<double>()});
  }
  std::sort(scenario.blockages.begin(), scenario.blockages.end(),
            [](const Blockage& a, const Blockage& b) { return a.edge < b.edge; });
  validate(graph, scenario);
  return scenario;
}

}  // namespace coopnav
