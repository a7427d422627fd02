#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "coopnav/error.hpp"

// Closed-form worst-case costs for s-g graphs made of k disjoint paths with
// lengths L_1 <= ... <= L_k. Path indices in this header are 1-based to match
// the usual "first open path j" convention.
namespace coopnav::analysis {

namespace detail {

inline void require_sorted(std::span<const double> lengths) {
  if (lengths.empty()) throw Error("at least one path length is required");
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (!(lengths[i] > 0.0)) throw Error("path lengths must be positive");
    if (i > 0 && lengths[i] < lengths[i - 1]) throw Error("path lengths must be nondecreasing");
  }
}

inline void require_index(std::span<const double> lengths, std::size_t j) {
  if (j < 1 || j > lengths.size()) throw Error("first open path index out of range");
}

}  // namespace detail

// Indices (0-based) of the paths in the order a shortest-first UGV tries them.
inline std::vector<std::size_t> shortest_first_order(std::span<const double> lengths) {
  std::vector<std::size_t> order(lengths.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lengths[a] < lengths[b]; });
  return order;
}

// 2 * sum(L) - L_k: every path but the longest is driven out and back.
inline double ugv_only_worst_case(std::span<const double> lengths) {
  detail::require_sorted(lengths);
  const double sum = std::accumulate(lengths.begin(), lengths.end(), 0.0);
  return 2.0 * sum - lengths.back();
}

// (2 * sum_{i<j} (L_i - eps_i) + L_j) / v_g
inline double ugv_only_time(std::span<const double> lengths, std::size_t j,
                            std::span<const double> epsilons, double v_g = 1.0) {
  detail::require_sorted(lengths);
  detail::require_index(lengths, j);
  if (!epsilons.empty() && epsilons.size() < j - 1) {
    throw Error("one epsilon is required per blocked path");
  }
  if (!(v_g > 0.0)) throw Error("UGV speed must be positive");
  double wasted = 0.0;
  for (std::size_t i = 0; i + 1 < j; ++i) {
    const double eps = epsilons.empty() ? 0.0 : epsilons[i];
    if (eps < 0.0) throw Error("epsilons must be non-negative");
    wasted += lengths[i] - eps;
  }
  return (2.0 * wasted + lengths[j - 1]) / v_g;
}

inline double ugv_only_ratio_bound(std::size_t k) {
  if (k < 1) throw Error("k must be at least 1");
  return 2.0 * static_cast<double>(k) - 1.0;
}

// sum_{i<j} 2 L_i / (v_a + v_g) + L_j / v_g, with the UAV's transit and
// deadheading taken as free.
inline double coop_time(std::span<const double> lengths, std::size_t j, double v_g,
                        double v_a) {
  detail::require_sorted(lengths);
  detail::require_index(lengths, j);
  if (!(v_g > 0.0) || v_a < 0.0) throw Error("speeds must satisfy v_g > 0, v_a >= 0");
  double blocked = 0.0;
  for (std::size_t i = 0; i + 1 < j; ++i) blocked += 2.0 * lengths[i] / (v_a + v_g);
  return blocked + lengths[j - 1] / v_g;
}

struct CoopRatioBound {
  // 1 + 2 v_g / (v_a + v_g) * (k - 1); the bound the max-over-j argument yields.
  double derivation_bound;
  // 2 v_g / (v_a + v_g) * k - 1; the closed form quoted as the cooperative
  // ratio. It agrees with derivation_bound only at v_a = 0 and is smaller
  // otherwise.
  double headline_expression;
};

inline CoopRatioBound coop_ratio_bound(std::size_t k, double v_g, double v_a) {
  if (k < 1) throw Error("k must be at least 1");
  if (!(v_g > 0.0) || v_a < 0.0) throw Error("speeds must satisfy v_g > 0, v_a >= 0");
  const double share = 2.0 * v_g / (v_a + v_g);
  const double kk = static_cast<double>(k);
  return {1.0 + share * (kk - 1.0), share * kk - 1.0};
}

// max over j of time(j) / (L_j / v_g) for the UGV-only and cooperative
// shortest-first strategies.
inline double ugv_only_worst_ratio(std::span<const double> lengths) {
  double worst = 0.0;
  for (std::size_t j = 1; j <= lengths.size(); ++j) {
    worst = std::max(worst, ugv_only_time(lengths, j, {}, 1.0) / lengths[j - 1]);
  }
  return worst;
}

inline double coop_worst_ratio(std::span<const double> lengths, double v_g, double v_a) {
  double worst = 0.0;
  for (std::size_t j = 1; j <= lengths.size(); ++j) {
    worst = std::max(worst, coop_time(lengths, j, v_g, v_a) / (lengths[j - 1] / v_g));
  }
  return worst;
}

}  // namespace coopnav::analysis
