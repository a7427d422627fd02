#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "coopnav/belief.hpp"
#include "coopnav/error.hpp"
#include "coopnav/graph.hpp"
#include "coopnav/inspection.hpp"
#include "coopnav/partition.hpp"
#include "coopnav/scenario.hpp"

namespace coopnav {

enum class Strategy { full_obs, ugv_only, bidirectional, optimal_partition };

inline constexpr std::array<Strategy, 4> kAllStrategies = {
    Strategy::full_obs, Strategy::ugv_only, Strategy::bidirectional,
    Strategy::optimal_partition};

inline std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::full_obs: return "full_obs";
    case Strategy::ugv_only: return "ugv_only";
    case Strategy::bidirectional: return "bidirectional";
    case Strategy::optimal_partition: return "optimal_partition";
  }
  return "?";
}

inline Strategy parse_strategy(std::string_view name) {
  for (Strategy s : kAllStrategies) {
    if (to_string(s) == name) return s;
  }
  throw Error("unknown strategy '" + std::string(name) + "'");
}

enum class ActionKind {
  traverse_edge,     // UGV drives the road edge toward `target`
  fly_inspect_edge,  // UAV flies over the road edge toward `target`
  fly_transit,       // UAV flies straight to `target` before inspecting
  fly_deadhead,      // UAV repositions inside an inspection walk
  wait,
  finish,
};

struct Action {
  ActionKind kind = ActionKind::wait;
  VertexIndex target = 0;

  static Action wait() { return {ActionKind::wait, 0}; }
  static Action finish() { return {ActionKind::finish, 0}; }
  static Action to(ActionKind kind, VertexIndex target) { return {kind, target}; }
};

// Snapshot handed to a policy at a decision point. A robot is only asked to
// decide while it stands at a vertex.
struct PolicyContext {
  const Graph& graph;
  VertexIndex goal;
  double v_g;
  double v_a;
  DeadheadRule deadhead_rule;
  double time;
  const Belief& ugv_belief;
  const Belief& uav_belief;
  VertexIndex ugv_at;  // current vertex, or the vertex the UGV last left
  bool ugv_finished;
  VertexIndex uav_at;  // current vertex, or the destination of the flight
  bool uav_moving;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual Strategy strategy() const = 0;
  virtual Action decide_ugv(const PolicyContext& ctx) = 0;
  virtual Action decide_uav(const PolicyContext& ctx) = 0;

  // Planning records produced since the last call, for the trace.
  std::vector<nlohmann::json> take_notes() { return std::exchange(notes_, {}); }

 protected:
  void note(nlohmann::json record) { notes_.push_back(std::move(record)); }

 private:
  std::vector<nlohmann::json> notes_;
};

// Keeps the UGV's current shortest route to the goal and recomputes it only
// when the UGV leaves it or an edge ahead becomes known blocked.
class RouteFollower {
 public:
  // Returns true when a new route was selected.
  bool update(const Graph& graph, VertexIndex at, VertexIndex goal,
              const EdgeSet& known_blocked) {
    if (valid(graph, at, known_blocked)) return false;
    auto path = shortest_path(graph, at, goal, known_blocked);
    if (!path) throw Error("goal unreachable under current knowledge");
    route_ = std::move(*path);
    ++version_;
    return true;
  }

  const Path& route() const { return route_; }
  std::size_t version() const { return version_; }

  std::optional<std::size_t> position(VertexIndex at) const {
    auto it = std::find(route_.vertices.begin(), route_.vertices.end(), at);
    if (it == route_.vertices.end()) return std::nullopt;
    return static_cast<std::size_t>(it - route_.vertices.begin());
  }

  EdgeIndex edge_at(const Graph& graph, std::size_t q) const {
    return graph.edge_between(route_.vertices[q], route_.vertices[q + 1]);
  }

 private:
  bool valid(const Graph& graph, VertexIndex at, const EdgeSet& known_blocked) const {
    auto pos = position(at);
    if (!pos) return false;
    for (std::size_t q = *pos; q + 1 < route_.vertices.size(); ++q) {
      if (known_blocked.contains(edge_at(graph, q))) return false;
    }
    return true;
  }

  Path route_;
  std::size_t version_ = 0;
};

inline nlohmann::json route_note(const Graph& graph, const Path& route) {
  nlohmann::json ids = nlohmann::json::array();
  for (VertexIndex v : route.vertices) ids.push_back(graph.vertex(v).id);
  return {{"route", ids}, {"length", path_length(graph, route)}};
}

// The UGV knows every blockage up front and drives the offline optimum.
class FullObservationPolicy final : public Policy {
 public:
  explicit FullObservationPolicy(EdgeSet truth) : truth_(std::move(truth)) {}

  Strategy strategy() const override { return Strategy::full_obs; }

  Action decide_ugv(const PolicyContext& ctx) override {
    if (ctx.ugv_at == ctx.goal) return Action::finish();
    if (route_.update(ctx.graph, ctx.ugv_at, ctx.goal, truth_)) {
      note(route_note(ctx.graph, route_.route()));
    }
    const std::size_t pos = *route_.position(ctx.ugv_at);
    return Action::to(ActionKind::traverse_edge, route_.route().vertices[pos + 1]);
  }

  Action decide_uav(const PolicyContext&) override { return Action::finish(); }

 private:
  EdgeSet truth_;
  RouteFollower route_;
};

// Shared UGV behavior for the online strategies: follow the shortest route
// under current knowledge, probing unknown edges.
inline Action online_ugv_step(const PolicyContext& ctx, RouteFollower& route, bool& replanned) {
  replanned = route.update(ctx.graph, ctx.ugv_at, ctx.goal, ctx.ugv_belief.blocked_edges());
  const std::size_t pos = *route.position(ctx.ugv_at);
  return Action::to(ActionKind::traverse_edge, route.route().vertices[pos + 1]);
}

// The UGV alone: on a damage point it backs up to the last vertex and
// replans. The UAV stays grounded.
class UgvOnlyPolicy final : public Policy {
 public:
  Strategy strategy() const override { return Strategy::ugv_only; }

  Action decide_ugv(const PolicyContext& ctx) override {
    if (ctx.ugv_at == ctx.goal) return Action::finish();
    bool replanned = false;
    Action a = online_ugv_step(ctx, route_, replanned);
    if (replanned) note(route_note(ctx.graph, route_.route()));
    return a;
  }

  Action decide_uav(const PolicyContext&) override { return Action::finish(); }

 private:
  RouteFollower route_;
};

// The UGV drives as in UgvOnlyPolicy while the UAV sweeps the UGV's route
// backward from the goal side, one unknown edge at a time.
class BidirectionalPolicy final : public Policy {
 public:
  Strategy strategy() const override { return Strategy::bidirectional; }

  Action decide_ugv(const PolicyContext& ctx) override {
    if (ctx.ugv_at == ctx.goal) return Action::finish();
    bool replanned = false;
    Action a = online_ugv_step(ctx, route_, replanned);
    if (replanned) note(route_note(ctx.graph, route_.route()));
    return a;
  }

  Action decide_uav(const PolicyContext& ctx) override {
    if (ctx.ugv_finished) return Action::finish();
    const Path& route = route_.route();
    if (route.vertices.size() < 2) return Action::wait();
    auto pos = route_.position(ctx.ugv_at);
    if (!pos) return Action::wait();
    const std::size_t m = route.edge_count();
    // Stale route: wait for the UGV to replan.
    for (std::size_t q = *pos; q < m; ++q) {
      if (ctx.uav_belief.is_blocked(route_.edge_at(ctx.graph, q))) return Action::wait();
    }
    // Edge *pos is the one the UGV is on or about to take.
    for (std::size_t q = m; q-- > *pos + 1;) {
      if (ctx.uav_belief.known(route_.edge_at(ctx.graph, q))) continue;
      const VertexIndex goal_side = route.vertices[q + 1];
      if (ctx.uav_at != goal_side) return Action::to(ActionKind::fly_transit, goal_side);
      return Action::to(ActionKind::fly_inspect_edge, route.vertices[q]);
    }
    return Action::wait();
  }

 private:
  RouteFollower route_;
};

// Each time the UGV selects a route, the route is split so the UGV inspects
// the prefix while the UAV runs the minimum-time plan over the suffix. The
// UGV waits at a vertex rather than enter a suffix edge whose status the UAV
// has yet to report.
class OptimalPartitionPolicy final : public Policy {
 public:
  Strategy strategy() const override { return Strategy::optimal_partition; }

  Action decide_ugv(const PolicyContext& ctx) override {
    if (ctx.ugv_at == ctx.goal) return Action::finish();
    if (route_.update(ctx.graph, ctx.ugv_at, ctx.goal, ctx.ugv_belief.blocked_edges())) {
      assign(ctx);
    }
    const Path& route = route_.route();
    const std::size_t pos = *route_.position(ctx.ugv_at);
    const VertexIndex next = route.vertices[pos + 1];
    if (pos < assignment_.j_star) return Action::to(ActionKind::traverse_edge, next);
    const EdgeIndex e = route_.edge_at(ctx.graph, pos);
    if (ctx.ugv_belief.is_open(e) || assignment_.abandoned) {
      return Action::to(ActionKind::traverse_edge, next);
    }
    return Action::wait();
  }

  Action decide_uav(const PolicyContext& ctx) override {
    if (ctx.ugv_finished) return Action::finish();
    Assignment& job = assignment_;
    if (job.abandoned || job.walk.steps.empty()) return Action::wait();
    const Path& route = route_.route();
    const std::size_t first = route_.position(ctx.ugv_at).value_or(0);
    for (std::size_t q = first; q < route.edge_count(); ++q) {
      if (ctx.uav_belief.is_blocked(route_.edge_at(ctx.graph, q))) {
        job.abandoned = true;
        return Action::wait();
      }
    }
    if (job.next_step == 0 && ctx.uav_at != job.walk.vertices.front()) {
      return Action::to(ActionKind::fly_transit, job.walk.vertices.front());
    }
    if (job.next_step >= job.walk.steps.size()) return Action::wait();
    const WalkStep& step = job.walk.steps[job.next_step++];
    return Action::to(step.deadhead ? ActionKind::fly_deadhead : ActionKind::fly_inspect_edge,
                      step.to);
  }

 private:
  struct Assignment {
    std::size_t j_star = 0;
    InspectionWalk walk;
    std::size_t next_step = 0;
    bool abandoned = false;
  };

  void assign(const PolicyContext& ctx) {
    const Path& route = route_.route();
    PartitionResult split = optimal_split(ctx.graph, route, ctx.uav_at, ctx.v_g, ctx.v_a,
                                          0.0, ctx.deadhead_rule);
    assignment_ = Assignment{split.j_star, expand_euler_walk(split.suffix, split.uav_plan), 0,
                             false};
    nlohmann::json record = route_note(ctx.graph, route);
    record["j_star"] = split.j_star;
    record["t_ugv"] = split.t_ugv;
    record["t_uav"] = split.t_uav;
    record["objective"] = split.objective;
    record["uav_from"] = ctx.graph.vertex(ctx.uav_at).id;
    record["uav_plan"] = to_json(ctx.graph, split.suffix, split.uav_plan);
    note(std::move(record));
  }

  RouteFollower route_;
  Assignment assignment_;
};

inline std::unique_ptr<Policy> make_policy(Strategy strategy, const Graph& graph,
                                           const Scenario& scenario) {
  switch (strategy) {
    case Strategy::full_obs:
      return std::make_unique<FullObservationPolicy>(scenario.blocked_set(graph));
    case Strategy::ugv_only: return std::make_unique<UgvOnlyPolicy>();
    case Strategy::bidirectional: return std::make_unique<BidirectionalPolicy>();
    case Strategy::optimal_partition: return std::make_unique<OptimalPartitionPolicy>();
  }
  throw Error("unknown strategy");
}

}  // namespace coopnav
