#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "coopnav/error.hpp"
#include "coopnav/graph.hpp"
#include "coopnav/inspection.hpp"

namespace coopnav {

// Cumulative road lengths S(0..m) along a path.
class PrefixSums {
 public:
  PrefixSums(const Graph& graph, const Path& path) {
    sums_.reserve(path.vertices.size());
    sums_.push_back(0.0);
    for (std::size_t r = 1; r < path.vertices.size(); ++r) {
      sums_.push_back(sums_.back() +
                      graph.edge(graph.edge_between(path.vertices[r - 1], path.vertices[r]))
                          .length);
    }
  }

  std::size_t edge_count() const { return sums_.size() - 1; }
  double operator[](std::size_t j) const { return sums_.at(j); }

 private:
  std::vector<double> sums_;
};

// T_UGV(j) = tau_ret + S(j) / v_g.
inline double ugv_prefix_time(const PrefixSums& sums, std::size_t j, double v_g,
                              double tau_ret) {
  if (j > sums.edge_count()) throw Error("split index out of range");
  if (!(v_g > 0.0)) throw Error("UGV speed must be positive");
  if (tau_ret < 0.0) throw Error("return time must be non-negative");
  return tau_ret + sums[j] / v_g;
}

inline double ugv_prefix_time(const Graph& graph, const Path& path, std::size_t j,
                              double v_g, double tau_ret) {
  return ugv_prefix_time(PrefixSums(graph, path), j, v_g, tau_ret);
}

struct PartitionResult {
  std::size_t j_star = 0;
  double t_ugv = 0.0;
  double t_uav = 0.0;
  double objective = 0.0;
  SuffixPath suffix;  // u_{j*}..u_m
  InspectionPlan uav_plan;
};

// Scans every split j = 0..m, pairing the UGV prefix time with the optimal
// UAV inspection time of the remaining suffix, and returns the split with the
// smallest max of the two. Ties go to the smaller j. O(m^2) overall.
inline PartitionResult optimal_split(const Graph& graph, const Path& path,
                                     VertexIndex uav_at, double v_g, double v_a,
                                     double tau_ret,
                                     DeadheadRule rule = DeadheadRule::cheapest_hop) {
  if (path.edge_count() == 0) throw Error("path must contain at least one edge");
  if (!(v_g > 0.0) || !(v_a > 0.0)) throw Error("speeds must be positive");
  const PrefixSums sums(graph, path);
  const std::size_t m = path.edge_count();
  std::span<const VertexIndex> all(path.vertices);

  std::optional<PartitionResult> best;
  for (std::size_t j = 0; j <= m; ++j) {
    const double t_ugv = ugv_prefix_time(sums, j, v_g, tau_ret);
    SuffixPath suffix(graph, all.subspan(j));
    InspectionPlan plan = plan_inspection(graph, suffix, uav_at, v_a, rule);
    const double objective = std::max(t_ugv, plan.t_total);
    if (!best || objective < best->objective - 1e-12 * std::max(1.0, best->objective)) {
      best = PartitionResult{j, t_ugv, plan.t_total, objective, std::move(suffix), plan};
    }
  }
  return std::move(*best);
}

}  // namespace coopnav
