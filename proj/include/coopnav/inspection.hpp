#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "coopnav/error.hpp"
#include "coopnav/graph.hpp"

namespace coopnav {

// Cost model for pure repositioning flights between suffix vertices.
enum class DeadheadRule {
  // min(road length, Euclidean) when the pair is a road edge, else Euclidean.
  cheapest_hop,
  // Literal motion-graph weight: the road length whenever the pair is an edge.
  strict_motion_weight,
};

inline double deadhead_cost(const Graph& graph, VertexIndex p, VertexIndex q,
                            DeadheadRule rule = DeadheadRule::cheapest_hop) {
  const double literal = motion_weight(graph, p, q);
  if (rule == DeadheadRule::strict_motion_weight) return literal;
  return std::min(literal, graph.euclidean(p, q));
}

// A contiguous stretch v_0..v_l of a candidate UGV path whose l edges the UAV
// must fly over.
class SuffixPath {
 public:
  SuffixPath() = default;

  SuffixPath(const Graph& graph, std::span<const VertexIndex> vertices)
      : vertices_(vertices.begin(), vertices.end()) {
    if (vertices_.empty()) throw Error("suffix path needs at least one vertex");
    for (VertexIndex v : vertices_) graph.require_vertex(v);
    for (std::size_t r = 1; r < vertices_.size(); ++r) {
      total_length_ += graph.edge(graph.edge_between(vertices_[r - 1], vertices_[r])).length;
    }
  }

  std::span<const VertexIndex> vertices() const { return vertices_; }
  VertexIndex front() const { return vertices_.front(); }
  VertexIndex back() const { return vertices_.back(); }
  VertexIndex at(std::size_t i) const { return vertices_.at(i); }
  // Number of required edges (l).
  std::size_t edge_count() const { return vertices_.size() - 1; }
  double total_length() const { return total_length_; }

 private:
  std::vector<VertexIndex> vertices_;
  double total_length_ = 0.0;
};

// Minimum-time UAV plan for one suffix: transit from the UAV's position to
// `start`, one pass over every required edge, and at most one deadhead hop.
struct InspectionPlan {
  std::size_t start = 0;  // index into the suffix
  std::size_t stop = 0;   // index into the suffix
  std::optional<std::pair<std::size_t, std::size_t>> connector;  // suffix indices
  double deadhead_length = 0.0;  // D, meters
  double t_init = 0.0;
  double t_inspect = 0.0;
  double t_dead = 0.0;
  double t_total = 0.0;

  // True for the zero plan of an empty suffix.
  bool empty() const { return t_inspect == 0.0; }
};

struct DeadheadOption {
  std::size_t stop;  // suffix index
  double cost;       // meters
  std::pair<std::size_t, std::size_t> connector;
};

// The three single-connector completions for an interior start v_i, in the
// order: stop at v_0, stop at v_l, return to v_i.
inline std::array<DeadheadOption, 3> interior_deadhead_options(
    const Graph& graph, const SuffixPath& suffix, std::size_t i,
    DeadheadRule rule = DeadheadRule::cheapest_hop) {
  const std::size_t l = suffix.edge_count();
  if (i == 0 || i >= l) throw Error("start index is not interior to the suffix");
  auto cost = [&](std::size_t a, std::size_t b) {
    return deadhead_cost(graph, suffix.at(a), suffix.at(b), rule);
  };
  return {{
      {0, cost(i, l), {i, l}},
      {l, cost(0, i), {0, i}},
      {i, cost(0, l), {0, l}},
  }};
}

// Chooses the start vertex, stop vertex and deadhead hop that minimize
// transit + inspection + deadheading time for the UAV at `uav_at`.
//
// Endpoint starts sweep the whole suffix with no deadheading. An interior
// start makes that vertex odd in the inspection subgraph, so the cheapest
// Euler completion adds exactly one hop pairing the remaining odd vertices;
// any other stop vertex needs a four-vertex join built from two hops, each
// pairing containing one of the single-hop options, so those stops are never
// better and are not enumerated.
//
// Ties resolve to: start v_0, start v_l, then lower interior start index with
// stop order v_l, v_0, v_i.
inline InspectionPlan plan_inspection(const Graph& graph, const SuffixPath& suffix,
                                      VertexIndex uav_at, double v_a,
                                      DeadheadRule rule = DeadheadRule::cheapest_hop) {
  graph.require_vertex(uav_at);
  if (!(v_a > 0.0)) throw Error("UAV speed must be positive");
  const std::size_t l = suffix.edge_count();
  InspectionPlan best;
  if (l == 0) return best;

  const double t_inspect = suffix.total_length() / v_a;
  double best_total = kInfinity;
  auto consider = [&](std::size_t start, std::size_t stop, double dead,
                      std::optional<std::pair<std::size_t, std::size_t>> connector) {
    const double t_init = motion_weight(graph, uav_at, suffix.at(start)) / v_a;
    const double t_dead = dead / v_a;
    const double total = t_init + t_inspect + t_dead;
    if (best_total == kInfinity || total < best_total - 1e-12 * std::max(1.0, best_total)) {
      best_total = total;
      best = InspectionPlan{start, stop, connector, dead, t_init, t_inspect, t_dead, total};
    }
  };

  consider(0, l, 0.0, std::nullopt);
  consider(l, 0, 0.0, std::nullopt);
  for (std::size_t i = 1; i < l; ++i) {
    const auto options = interior_deadhead_options(graph, suffix, i, rule);
    // Evaluate in tie order v_l, v_0, v_i.
    for (std::size_t k : {1u, 0u, 2u}) {
      consider(i, options[k].stop, options[k].cost, options[k].connector);
    }
  }
  return best;
}

struct WalkStep {
  VertexIndex from;
  VertexIndex to;
  bool deadhead = false;  // false: fly over the road edge and inspect it
};

struct InspectionWalk {
  std::vector<VertexIndex> vertices;
  std::vector<WalkStep> steps;
};

// Expands a plan into the explicit Euler trail from plan.start to plan.stop.
inline InspectionWalk expand_euler_walk(const SuffixPath& suffix,
                                        const InspectionPlan& plan) {
  const std::size_t l = suffix.edge_count();
  if (plan.start > l || plan.stop > l) throw Error("plan does not match suffix");
  InspectionWalk walk;
  walk.vertices.push_back(suffix.at(plan.start));
  auto sweep = [&](std::size_t from, std::size_t to) {
    while (from != to) {
      const std::size_t next = from < to ? from + 1 : from - 1;
      walk.steps.push_back({suffix.at(from), suffix.at(next), false});
      walk.vertices.push_back(suffix.at(next));
      from = next;
    }
  };
  auto hop = [&](std::size_t from, std::size_t to) {
    walk.steps.push_back({suffix.at(from), suffix.at(to), true});
    walk.vertices.push_back(suffix.at(to));
  };
  if (l == 0) return walk;

  const std::size_t i = plan.start;
  if (i == 0 || i == l) {
    if (plan.connector || plan.stop != l - i) throw Error("plan does not match suffix");
    sweep(i, l - i);
    return walk;
  }
  if (!plan.connector) throw Error("plan does not match suffix");
  const auto [a, b] = *plan.connector;
  if (plan.stop == 0 && a == i && b == l) {
    sweep(i, l);
    hop(l, i);
    sweep(i, 0);
  } else if (plan.stop == l && a == 0 && b == i) {
    sweep(i, 0);
    hop(0, i);
    sweep(i, l);
  } else if (plan.stop == i && a == 0 && b == l) {
    sweep(i, 0);
    hop(0, l);
    sweep(l, i);
  } else {
    throw Error("plan does not match suffix");
  }
  return walk;
}

inline nlohmann::json to_json(const Graph& graph, const SuffixPath& suffix,
                              const InspectionPlan& plan) {
  nlohmann::json doc;
  if (suffix.edge_count() == 0) {
    doc["start"] = graph.vertex(suffix.front()).id;
    doc["stop"] = graph.vertex(suffix.front()).id;
  } else {
    doc["start"] = graph.vertex(suffix.at(plan.start)).id;
    doc["stop"] = graph.vertex(suffix.at(plan.stop)).id;
  }
  if (plan.connector) {
    doc["connector"] = {graph.vertex(suffix.at(plan.connector->first)).id,
                        graph.vertex(suffix.at(plan.connector->second)).id};
  } else {
    doc["connector"] = nullptr;
  }
  doc["deadhead_m"] = plan.deadhead_length;
  doc["t_init"] = plan.t_init;
  doc["t_inspect"] = plan.t_inspect;
  doc["t_dead"] = plan.t_dead;
  doc["t_total"] = plan.t_total;
  return doc;
}

}  // namespace coopnav
