#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "coopnav/belief.hpp"
#include "coopnav/error.hpp"
#include "coopnav/graph.hpp"
#include "coopnav/inspection.hpp"
#include "coopnav/scenario.hpp"
#include "coopnav/strategies.hpp"

namespace coopnav {

enum class Subject { ugv, uav };

enum class EventKind {
  depart,
  reach_vertex,
  reach_damage_point,
  publish_knowledge,
  receive_knowledge,
  begin_wait,
  end_wait,
  replan,
  finish,
};

inline std::string_view to_string(Subject s) { return s == Subject::ugv ? "ugv" : "uav"; }

inline std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::depart: return "depart";
    case EventKind::reach_vertex: return "reach_vertex";
    case EventKind::reach_damage_point: return "reach_damage_point";
    case EventKind::publish_knowledge: return "publish_knowledge";
    case EventKind::receive_knowledge: return "receive_knowledge";
    case EventKind::begin_wait: return "begin_wait";
    case EventKind::end_wait: return "end_wait";
    case EventKind::replan: return "replan";
    case EventKind::finish: return "finish";
  }
  return "?";
}

struct Event {
  double time = 0.0;
  Subject subject = Subject::ugv;
  EventKind kind = EventKind::depart;
  nlohmann::json payload;
};

enum class LegKind { traverse, probe, retreat, inspect, transit, deadhead };

inline std::string_view to_string(LegKind k) {
  switch (k) {
    case LegKind::traverse: return "traverse";
    case LegKind::probe: return "probe";
    case LegKind::retreat: return "retreat";
    case LegKind::inspect: return "inspect";
    case LegKind::transit: return "transit";
    case LegKind::deadhead: return "deadhead";
  }
  return "?";
}

struct SimulationOptions {
  DeadheadRule deadhead_rule = DeadheadRule::cheapest_hop;
  bool record_trace = true;
  std::size_t max_rounds = 5'000'000;
};

struct SimulationResult {
  Strategy strategy = Strategy::full_obs;
  double ugv_time = 0.0;  // travel + waiting until the goal is reached
  double uav_time = 0.0;  // UAV flight time until then
  double ugv_moving_time = 0.0;
  double ugv_waiting_time = 0.0;
  double l_star = 0.0;
  double competitive_ratio = 0.0;
  std::vector<Event> trace;
  Belief discovered;  // shared knowledge at the end
};

namespace detail {

struct Leg {
  LegKind kind;
  VertexIndex from;
  VertexIndex to;  // for probe/retreat: the vertex the UGV set out toward/from
  std::optional<EdgeIndex> edge;
  double length;
  double start;
  double end;
};

struct RobotState {
  Subject subject;
  VertexIndex at;  // current vertex, or the last vertex left
  std::optional<Leg> leg;
  bool waiting = false;
  double wait_since = 0.0;
  bool finished = false;
  Belief belief;
  double moving_time = 0.0;
  double waiting_time = 0.0;
};

class Engine {
 public:
  Engine(const Graph& graph, const Scenario& scenario, Policy& policy,
         const SimulationOptions& options)
      : graph_(graph), scenario_(scenario), policy_(policy), options_(options),
        pool_(graph.edge_count()) {
    ugv_ = RobotState{Subject::ugv, scenario.s, std::nullopt, false, 0.0, false,
                      Belief(graph.edge_count())};
    uav_ = RobotState{Subject::uav, scenario.uav_start, std::nullopt, false, 0.0, false,
                      Belief(graph.edge_count())};
  }

  SimulationResult run() {
    std::size_t rounds = 0;
    while (true) {
      if (++rounds > options_.max_rounds) throw Error("simulation exceeded its round budget");
      decide();
      if (ugv_.finished) break;
      double next = kInfinity;
      for (const RobotState* r : {&ugv_, &uav_}) {
        if (r->leg) next = std::min(next, r->leg->end);
      }
      if (next == kInfinity) throw Error("simulation stalled: no robot can make progress");
      time_ = next;
      for (RobotState* r : {&ugv_, &uav_}) {
        if (r->leg && r->leg->end == next) complete(*r);
      }
      exchange();
    }

    SimulationResult result;
    result.strategy = policy_.strategy();
    result.ugv_time = time_;
    result.ugv_moving_time = ugv_.moving_time;
    result.ugv_waiting_time = ugv_.waiting_time;
    result.uav_time = uav_.moving_time + (uav_.leg ? time_ - uav_.leg->start : 0.0);
    result.l_star = offline_optimum(graph_, scenario_);
    result.competitive_ratio = result.ugv_time / (result.l_star / scenario_.v_g);
    result.trace = std::move(trace_);
    result.discovered = std::move(pool_);
    return result;
  }

 private:
  const std::string& id(VertexIndex v) const { return graph_.vertex(v).id; }

  void emit(Subject who, EventKind kind, nlohmann::json payload = nlohmann::json::object()) {
    if (options_.record_trace) trace_.push_back({time_, who, kind, std::move(payload)});
  }

  PolicyContext context() const {
    return PolicyContext{graph_,          scenario_.g,  scenario_.v_g, scenario_.v_a,
                         options_.deadhead_rule, time_,  ugv_.belief,  uav_.belief,
                         ugv_.at,         ugv_.finished, uav_.leg ? uav_.leg->to : uav_.at,
                         uav_.leg.has_value()};
  }

  // Asks every idle robot for an action, UGV first, until nobody changes
  // state at the current instant.
  void decide() {
    bool changed = true;
    while (changed && !ugv_.finished) {
      changed = false;
      for (RobotState* r : {&ugv_, &uav_}) {
        if (r->finished || r->leg) continue;
        const PolicyContext ctx = context();
        const Action action =
            r->subject == Subject::ugv ? policy_.decide_ugv(ctx) : policy_.decide_uav(ctx);
        for (auto& record : policy_.take_notes()) emit(r->subject, EventKind::replan, record);
        if (action.kind == ActionKind::wait) {
          if (!r->waiting) {
            r->waiting = true;
            r->wait_since = time_;
            emit(r->subject, EventKind::begin_wait, {{"vertex", id(r->at)}});
          }
          continue;
        }
        if (r->waiting) {
          r->waiting = false;
          r->waiting_time += time_ - r->wait_since;
          emit(r->subject, EventKind::end_wait, {{"vertex", id(r->at)}});
        }
        changed = true;
        if (action.kind == ActionKind::finish) {
          r->finished = true;
          emit(r->subject, EventKind::finish, {{"vertex", id(r->at)}});
          if (r->subject == Subject::ugv) {
            if (r->at != scenario_.g) throw Error("UGV finished away from the goal");
            break;
          }
          continue;
        }
        start(*r, action);
      }
    }
  }

  void depart(RobotState& r, LegKind kind, VertexIndex to, std::optional<EdgeIndex> edge,
              double length, double speed) {
    r.leg = Leg{kind, r.at, to, edge, length, time_, time_ + length / speed};
    emit(r.subject, EventKind::depart,
         {{"from", id(r.at)}, {"to", id(to)}, {"mode", to_string(kind)}, {"length", length}});
  }

  void start(RobotState& r, const Action& action) {
    if (r.subject == Subject::ugv) {
      if (action.kind != ActionKind::traverse_edge) throw Error("UGV can only drive road edges");
      const EdgeIndex e = graph_.edge_between(r.at, action.target);
      if (r.belief.is_blocked(e)) throw Error("UGV attempted an edge it knows is blocked");
      if (auto fraction = scenario_.damage_fraction(e)) {
        depart(r, LegKind::probe, action.target, e,
               damage_distance(graph_, e, *fraction, r.at), scenario_.v_g);
      } else {
        depart(r, LegKind::traverse, action.target, e, graph_.edge(e).length, scenario_.v_g);
      }
      return;
    }
    switch (action.kind) {
      case ActionKind::fly_inspect_edge: {
        const EdgeIndex e = graph_.edge_between(r.at, action.target);
        depart(r, LegKind::inspect, action.target, e, graph_.edge(e).length, scenario_.v_a);
        return;
      }
      case ActionKind::fly_transit:
        depart(r, LegKind::transit, action.target, std::nullopt,
               motion_weight(graph_, r.at, action.target), scenario_.v_a);
        return;
      case ActionKind::fly_deadhead:
        depart(r, LegKind::deadhead, action.target, std::nullopt,
               deadhead_cost(graph_, r.at, action.target, options_.deadhead_rule),
               scenario_.v_a);
        return;
      default: throw Error("UAV cannot drive road edges");
    }
  }

  EdgeKnowledge truth(EdgeIndex e) const {
    if (auto fraction = scenario_.damage_fraction(e)) {
      return {EdgeStatus::blocked, *fraction};
    }
    return {EdgeStatus::open, 0.0};
  }

  static nlohmann::json status_json(const Graph& graph, EdgeIndex e, const EdgeKnowledge& k) {
    const Edge& edge = graph.edge(e);
    nlohmann::json j = {{"u", graph.vertex(edge.u).id}, {"v", graph.vertex(edge.v).id},
                        {"status", k.status == EdgeStatus::blocked ? "blocked" : "open"}};
    if (k.status == EdgeStatus::blocked) j["fraction"] = k.fraction;
    return j;
  }

  void complete(RobotState& r) {
    Leg leg = *r.leg;
    r.leg.reset();
    r.moving_time += leg.end - leg.start;
    switch (leg.kind) {
      case LegKind::traverse:
      case LegKind::inspect: {
        const EdgeKnowledge found = truth(*leg.edge);
        r.belief.learn(*leg.edge, found);
        r.at = leg.to;
        emit(r.subject, EventKind::reach_vertex,
             {{"vertex", id(r.at)}, {"edge", status_json(graph_, *leg.edge, found)}});
        return;
      }
      case LegKind::probe: {
        const EdgeKnowledge found = truth(*leg.edge);
        r.belief.learn(*leg.edge, found);
        emit(r.subject, EventKind::reach_damage_point,
             {{"from", id(leg.from)}, {"distance", leg.length},
              {"edge", status_json(graph_, *leg.edge, found)}});
        // Reverse at the damage point and return to the vertex just left.
        r.leg = Leg{LegKind::retreat, leg.to, leg.from, leg.edge, leg.length, time_,
                    time_ + leg.length / scenario_.v_g};
        emit(r.subject, EventKind::depart,
             {{"from", "damage_point"}, {"to", id(leg.from)},
              {"mode", to_string(LegKind::retreat)}, {"length", leg.length}});
        return;
      }
      case LegKind::retreat:
        r.at = leg.to;
        emit(r.subject, EventKind::reach_vertex, {{"vertex", id(r.at)}});
        return;
      case LegKind::transit:
      case LegKind::deadhead:
        r.at = leg.to;
        emit(r.subject, EventKind::reach_vertex, {{"vertex", id(r.at)}});
        return;
    }
  }

  // Robots standing at a vertex publish their discoveries, then pick up
  // everything published so far.
  void exchange() {
    auto listing = [&](const std::vector<EdgeIndex>& edges, const Belief& source) {
      nlohmann::json list = nlohmann::json::array();
      for (EdgeIndex e : edges) list.push_back(status_json(graph_, e, source[e]));
      return list;
    };
    for (RobotState* r : {&ugv_, &uav_}) {
      if (r->leg || r->finished) continue;
      auto added = pool_.merge(r->belief);
      if (!added.empty()) {
        emit(r->subject, EventKind::publish_knowledge,
             {{"vertex", id(r->at)}, {"edges", listing(added, pool_)}});
      }
    }
    for (RobotState* r : {&ugv_, &uav_}) {
      if (r->leg || r->finished) continue;
      auto added = r->belief.merge(pool_);
      if (!added.empty()) {
        emit(r->subject, EventKind::receive_knowledge,
             {{"vertex", id(r->at)}, {"edges", listing(added, pool_)}});
      }
    }
  }

  const Graph& graph_;
  const Scenario& scenario_;
  Policy& policy_;
  SimulationOptions options_;
  Belief pool_;
  RobotState ugv_{};
  RobotState uav_{};
  double time_ = 0.0;
  std::vector<Event> trace_;
};

}  // namespace detail

// Event-driven co-simulation of the UGV and UAV under one strategy.
//
// Motion is piecewise constant-speed, so the engine jumps from one leg
// completion to the next. A UGV that reaches a damage point d meters into an
// edge pays d back to the vertex it left. The UAV always completes the edge
// it is flying and reports at the far vertex. Discoveries move between
// robots only while they stand at vertices. Simultaneous events are handled
// UGV first.
inline SimulationResult simulate(const Graph& graph, const Scenario& scenario,
                                 Strategy strategy, const SimulationOptions& options = {}) {
  validate(graph, scenario);
  auto policy = make_policy(strategy, graph, scenario);
  return detail::Engine(graph, scenario, *policy, options).run();
}

inline SimulationResult simulate(const Graph& graph, const Scenario& scenario,
                                 std::string_view strategy,
                                 const SimulationOptions& options = {}) {
  return simulate(graph, scenario, parse_strategy(strategy), options);
}

// One JSON object per line: time, subject, kind, payload.
inline std::string trace_to_jsonl(const std::vector<Event>& trace) {
  std::string out;
  for (const Event& e : trace) {
    nlohmann::json line = {{"time", e.time},
                           {"subject", to_string(e.subject)},
                           {"kind", to_string(e.kind)},
                           {"payload", e.payload}};
    out += line.dump();
    out += '\n';
  }
  return out;
}

}  // namespace coopnav
