#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

#include "coopnav/error.hpp"

namespace coopnav {

using VertexIndex = std::size_t;
using EdgeIndex = std::size_t;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Vertex {
  std::string id;
  double x = 0.0;  // meters
  double y = 0.0;  // meters
};

// Undirected road segment. Endpoints are stored so that `u` is the endpoint
// with the lexicographically smaller id; damage fractions are measured from u.
struct Edge {
  VertexIndex u = 0;
  VertexIndex v = 0;
  double length = 0.0;  // meters, > 0

  VertexIndex other(VertexIndex w) const { return w == u ? v : u; }
};

// Ordered vertex sequence; consecutive vertices are joined by graph edges.
struct Path {
  std::vector<VertexIndex> vertices;

  std::size_t edge_count() const {
    return vertices.empty() ? 0 : vertices.size() - 1;
  }
  bool operator==(const Path&) const = default;
};

// Dense membership set over edge indices.
class EdgeSet {
 public:
  EdgeSet() = default;
  explicit EdgeSet(std::size_t edge_count) : bits_(edge_count, 0) {}

  void insert(EdgeIndex e) {
    if (e >= bits_.size()) bits_.resize(e + 1, 0);
    if (!bits_[e]) {
      bits_[e] = 1;
      ++count_;
    }
  }
  bool contains(EdgeIndex e) const { return e < bits_.size() && bits_[e]; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

 private:
  std::vector<std::uint8_t> bits_;
  std::size_t count_ = 0;
};

struct Neighbor {
  VertexIndex vertex;
  EdgeIndex edge;
};

// Weighted undirected simple graph with planar vertex coordinates.
// Immutable after construction.
class Graph {
 public:
  Graph() = default;

  // Builds and validates a graph. Edge endpoints are given as indices into
  // `vertices`; a negative or NaN length means "use the Euclidean distance".
  struct EdgeSpec {
    VertexIndex u;
    VertexIndex v;
    double length = -1.0;
  };

  Graph(std::vector<Vertex> vertices, std::span<const EdgeSpec> edges)
      : vertices_(std::move(vertices)) {
    index_.reserve(vertices_.size());
    for (VertexIndex i = 0; i < vertices_.size(); ++i) {
      const Vertex& vx = vertices_[i];
      if (!std::isfinite(vx.x) || !std::isfinite(vx.y)) {
        throw Error("non-finite coordinates for vertex '" + vx.id + "'");
      }
      if (!index_.emplace(vx.id, i).second) {
        throw Error("duplicate vertex id '" + vx.id + "'");
      }
    }
    rank_.resize(vertices_.size());
    {
      std::vector<VertexIndex> order(vertices_.size());
      for (VertexIndex i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](VertexIndex a, VertexIndex b) {
        return vertices_[a].id < vertices_[b].id;
      });
      for (std::size_t r = 0; r < order.size(); ++r) rank_[order[r]] = r;
    }

    adjacency_.resize(vertices_.size());
    edges_.reserve(edges.size());
    for (const EdgeSpec& spec : edges) {
      if (spec.u >= vertices_.size() || spec.v >= vertices_.size()) {
        throw Error("dangling endpoint");
      }
      if (spec.u == spec.v) {
        throw Error("self-loop at vertex '" + vertices_[spec.u].id + "'");
      }
      double length = spec.length;
      if (std::isnan(length) || length < 0.0) {
        length = euclidean(spec.u, spec.v);
      }
      if (!(length > 0.0) || !std::isfinite(length)) {
        throw Error("non-positive length on edge '" + vertices_[spec.u].id +
                    "'-'" + vertices_[spec.v].id + "'");
      }
      VertexIndex a = spec.u;
      VertexIndex b = spec.v;
      if (rank_[b] < rank_[a]) std::swap(a, b);
      const EdgeIndex e = edges_.size();
      if (!edge_index_.emplace(pair_key(a, b), e).second) {
        throw Error("parallel edge between '" + vertices_[a].id + "' and '" +
                    vertices_[b].id + "'");
      }
      edges_.push_back(Edge{a, b, length});
      adjacency_[a].push_back(Neighbor{b, e});
      adjacency_[b].push_back(Neighbor{a, e});
    }
    // Neighbor lists in id order make every traversal deterministic.
    for (auto& list : adjacency_) {
      std::sort(list.begin(), list.end(), [&](const Neighbor& p, const Neighbor& q) {
        return rank_[p.vertex] < rank_[q.vertex];
      });
    }
  }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const Vertex& vertex(VertexIndex i) const { return vertices_.at(i); }
  const Edge& edge(EdgeIndex e) const { return edges_.at(e); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Neighbor> neighbors(VertexIndex i) const {
    return adjacency_.at(i);
  }

  // Position of the vertex id in lexicographic order.
  std::size_t id_rank(VertexIndex i) const { return rank_.at(i); }

  std::optional<VertexIndex> find_vertex(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  VertexIndex vertex_index(const std::string& id) const {
    auto found = find_vertex(id);
    if (!found) throw Error("unknown vertex id '" + id + "'");
    return *found;
  }

  std::optional<EdgeIndex> find_edge(VertexIndex a, VertexIndex b) const {
    if (a >= vertices_.size() || b >= vertices_.size() || a == b) {
      return std::nullopt;
    }
    if (rank_[b] < rank_[a]) std::swap(a, b);
    auto it = edge_index_.find(pair_key(a, b));
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
  }

  EdgeIndex edge_between(VertexIndex a, VertexIndex b) const {
    auto e = find_edge(a, b);
    if (!e) {
      throw Error("no edge between '" + vertex_label(a) + "' and '" +
                  vertex_label(b) + "'");
    }
    return *e;
  }

  double euclidean(VertexIndex a, VertexIndex b) const {
    const Vertex& p = vertices_.at(a);
    const Vertex& q = vertices_.at(b);
    return std::hypot(p.x - q.x, p.y - q.y);
  }

  void require_vertex(VertexIndex i) const {
    if (i >= vertices_.size()) {
      throw Error("unknown vertex index " + std::to_string(i));
    }
  }

 private:
  static std::uint64_t pair_key(VertexIndex a, VertexIndex b) {
    return (static_cast<std::uint64_t>(a) << 32) ^ static_cast<std::uint64_t>(b);
  }

  std::string vertex_label(VertexIndex i) const {
    return i < vertices_.size() ? vertices_[i].id : std::to_string(i);
  }

  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<std::size_t> rank_;
  std::unordered_map<std::string, VertexIndex> index_;
  std::unordered_map<std::uint64_t, EdgeIndex> edge_index_;
};

// Parses the JSON graph document
//   {"vertices":[{"id":..,"x":..,"y":..}], "edges":[{"u":..,"v":..,"length":..}]}
// Missing edge lengths default to the Euclidean distance between endpoints.
inline Graph load_graph(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges") ||
      !doc["vertices"].is_array() || !doc["edges"].is_array()) {
    throw Error("malformed graph document: expected 'vertices' and 'edges' arrays");
  }
  std::vector<Vertex> vertices;
  std::unordered_map<std::string, VertexIndex> ids;
  for (const auto& jv : doc["vertices"]) {
    if (!jv.is_object() || !jv.contains("id") || !jv["id"].is_string() ||
        !jv.contains("x") || !jv["x"].is_number() || !jv.contains("y") ||
        !jv["y"].is_number()) {
      throw Error("malformed graph document: bad vertex entry");
    }
    Vertex v{jv["id"].get<std::string>(), jv["x"].get<double>(), jv["y"].get<double>()};
    if (!ids.emplace(v.id, vertices.size()).second) {
      throw Error("duplicate vertex id '" + v.id + "'");
    }
    vertices.push_back(std::move(v));
  }
  std::vector<Graph::EdgeSpec> specs;
  for (const auto& je : doc["edges"]) {
    if (!je.is_object() || !je.contains("u") || !je["u"].is_string() ||
        !je.contains("v") || !je["v"].is_string()) {
      throw Error("malformed graph document: bad edge entry");
    }
    auto iu = ids.find(je["u"].get<std::string>());
    auto iv = ids.find(je["v"].get<std::string>());
    if (iu == ids.end() || iv == ids.end()) throw Error("dangling endpoint");
    double length = -1.0;
    if (je.contains("length") && !je["length"].is_null()) {
      if (!je["length"].is_number()) {
        throw Error("malformed graph document: edge length must be a number");
      }
      length = je["length"].get<double>();
      if (!(length > 0.0)) {
        throw Error("non-positive length on edge '" + iu->first + "'-'" +
                    iv->first + "'");
      }
    }
    specs.push_back({iu->second, iv->second, length});
  }
  return Graph(std::move(vertices), specs);
}

inline Graph load_graph(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("malformed graph document: ") + e.what());
  }
  return load_graph(doc);
}

inline nlohmann::json to_json(const Graph& graph) {
  nlohmann::json doc;
  doc["vertices"] = nlohmann::json::array();
  for (const Vertex& v : graph.vertices()) {
    doc["vertices"].push_back({{"id", v.id}, {"x", v.x}, {"y", v.y}});
  }
  doc["edges"] = nlohmann::json::array();
  for (const Edge& e : graph.edges()) {
    doc["edges"].push_back({{"u", graph.vertex(e.u).id},
                            {"v", graph.vertex(e.v).id},
                            {"length", e.length}});
  }
  return doc;
}

// Single-source distances to `target` over edges not in `blocked`.
inline std::vector<double> distances_to(const Graph& graph, VertexIndex target,
                                        const EdgeSet& blocked) {
  std::vector<double> dist(graph.vertex_count(), kInfinity);
  using Item = std::pair<double, VertexIndex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[target] = 0.0;
  queue.emplace(0.0, target);
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    for (const Neighbor& n : graph.neighbors(u)) {
      if (blocked.contains(n.edge)) continue;
      const double candidate = d + graph.edge(n.edge).length;
      if (candidate < dist[n.vertex]) {
        dist[n.vertex] = candidate;
        queue.emplace(candidate, n.vertex);
      }
    }
  }
  return dist;
}

// Minimum-length src->dst path avoiding `known_blocked`, or nullopt when dst
// is unreachable. Among equal-length paths the one with the lexicographically
// smallest vertex-id sequence is returned.
inline std::optional<Path> shortest_path(const Graph& graph, VertexIndex src,
                                         VertexIndex dst,
                                         const EdgeSet& known_blocked = {}) {
  graph.require_vertex(src);
  graph.require_vertex(dst);
  const std::vector<double> dist = distances_to(graph, dst, known_blocked);
  if (!std::isfinite(dist[src])) return std::nullopt;

  Path path;
  path.vertices.push_back(src);
  VertexIndex at = src;
  while (at != dst) {
    const double tol = 1e-12 * std::max(1.0, dist[at]);
    std::optional<VertexIndex> next;
    for (const Neighbor& n : graph.neighbors(at)) {
      if (known_blocked.contains(n.edge) || !std::isfinite(dist[n.vertex])) continue;
      if (dist[n.vertex] >= dist[at]) continue;
      const double slack = graph.edge(n.edge).length + dist[n.vertex] - dist[at];
      if (std::abs(slack) <= tol) {
        // Neighbors are sorted by id, so the first tight one is the smallest.
        next = n.vertex;
        break;
      }
    }
    if (!next) {
      // Rounding left no tight neighbor; fall back to the best one.
      double best = kInfinity;
      for (const Neighbor& n : graph.neighbors(at)) {
        if (known_blocked.contains(n.edge) || dist[n.vertex] >= dist[at]) continue;
        const double total = graph.edge(n.edge).length + dist[n.vertex];
        if (total < best) {
          best = total;
          next = n.vertex;
        }
      }
    }
    at = *next;
    path.vertices.push_back(at);
  }
  return path;
}

// UAV motion-graph weight: the road length when (p,q) is a road edge,
// otherwise the planar Euclidean distance.
inline double motion_weight(const Graph& graph, VertexIndex p, VertexIndex q) {
  graph.require_vertex(p);
  graph.require_vertex(q);
  if (p == q) return 0.0;
  if (auto e = graph.find_edge(p, q)) return graph.edge(*e).length;
  return graph.euclidean(p, q);
}

inline double path_length(const Graph& graph, const Path& path) {
  double total = 0.0;
  for (std::size_t r = 1; r < path.vertices.size(); ++r) {
    total += graph.edge(graph.edge_between(path.vertices[r - 1], path.vertices[r])).length;
  }
  return total;
}

}  // namespace coopnav
